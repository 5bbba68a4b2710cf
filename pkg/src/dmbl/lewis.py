"""Triviality-gap demonstration.

The collapse argument against in-space conditionals needs one fragile
link: that conditioning the extended measure preserves the conditional's
probability, i.e. that the conditional probability of ``(B|A)`` given
``C`` always equals the classical ``P(B | A and C)``.  In this engine's
model that link breaks: the demonstration searches small classical
triples for an exact-rational witness where the two quantities differ,
while verifying that the inference identity itself holds on every
tested triple.  Both facts together certify that the conditional is
Bayesian without being trivial.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .evaluator import Session
from .formula import And, Atom, Cond, Formula, Implies, Not, Or, render
from .model import GuardExceeded, init_stage0
from .probability import Distribution, attach
from .suites import classical_weight

__all__ = ["LewisWitness", "LewisReport", "lewis_demo", "DEFAULT_DISTRIBUTION"]

P, Q = Atom("p"), Atom("q")

DEFAULT_DISTRIBUTION = Distribution(
    names=("p", "q"), generalized=False,
    weights=(Fraction(1, 6), Fraction(1, 3), Fraction(1, 4), Fraction(1, 4)))

_POOL = [P, Q, Not(P), Not(Q), Implies(P, Q), And(P, Q), Or(P, Q)]


@dataclass
class LewisWitness:
    a: str
    b: str
    c: str
    cond_of_cond: Fraction      # P((B|A) and C) / P(C)
    collapsed: Fraction          # P(B | A and C), the collapse-argument value


@dataclass
class LewisReport:
    tested: int = 0
    witnesses: list = field(default_factory=list)
    bayes_checked: int = 0
    bayes_all_equal: bool = True
    guard_trips: int = 0

    @property
    def ok(self) -> bool:
        return bool(self.witnesses) and self.bayes_all_equal


def lewis_demo(dist: Distribution | None = None, *, max_worlds: int = 100_000,
               verify_bayes: bool = True) -> LewisReport:
    """Search classical triples (A, B, C) for a triviality gap.

    For each triple with nonzero classical masses, compare the
    conditional probability of the conditional,
    ``P((B|A) and C) / P(C)``, against the collapsed value
    ``P(A and B and C) / P(A and C)`` computed straight from the
    distribution (the independent side).  The inference identity
    ``P(((B|A)|C)) * P(C) = P((B|A) and C)`` is verified on the same
    triples.
    """
    if dist is None:
        dist = DEFAULT_DISTRIBUTION
    if not dist.strictly_positive:
        raise ValueError("the demonstration needs a strictly positive distribution")
    if dist.generalized:
        raise ValueError("the demonstration runs on minterm distributions")
    names = dist.names
    from .formula import AtomContext
    ctx = AtomContext(names)

    report = LewisReport()
    for a in _POOL:
        for b in _POOL:
            for c in _POOL:
                pa_c = classical_weight(And(a, c), names, dist.weights)
                pc = classical_weight(c, names, dist.weights)
                if pa_c == 0 or pc == 0:
                    continue
                report.tested += 1
                state = init_stage0(ctx, max_worlds=max_worlds)
                attach(state, dist)
                s = Session(state)
                try:
                    joint_set = s.value(And(Cond(b, a), c))
                    joint = state.measure_mask(joint_set.mask)
                    cond_of_cond = joint / pc
                    collapsed = classical_weight(
                        And(And(a, b), c), names, dist.weights) / pa_c
                    if cond_of_cond != collapsed:
                        report.witnesses.append(LewisWitness(
                            render(a), render(b), render(c),
                            cond_of_cond, collapsed))
                    if verify_bayes:
                        nested = s.value(Cond(Cond(b, a), c))
                        c_set = s.value(c)
                        lhs = state.measure_mask(
                            state.forward_to_current(nested.mask, nested.stage)) \
                            * state.measure_mask(state.forward_to_current(
                                c_set.mask, c_set.stage))
                        rhs = state.measure_mask(state.forward_to_current(
                            joint_set.mask, joint_set.stage))
                        report.bayes_checked += 1
                        if lhs != rhs:
                            report.bayes_all_equal = False
                except GuardExceeded:
                    report.guard_trips += 1
    return report
