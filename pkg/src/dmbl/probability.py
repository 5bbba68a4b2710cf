"""Exact probability over the constructed model.

A distribution assigns rational weights to stage-0 worlds (minterms, or
labels in generalized mode).  Once attached, every construction step
extends the measure to the new stage's pair worlds: a pair inherits the
product of its parts' masses normalized by the mass of the block its
right part came from, which is exactly what keeps forwarded sets at
their old mass and makes the conditional-set measure a ratio.

Strictly positive distributions run on plain Fractions.  Distributions
with zero weights take the smoothed path: every mass becomes a rational
function of a smoothing parameter (the distribution mixed with the
uniform one), the whole pipeline runs symbolically, and the exact limit
at zero is taken at the end.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .algebra import StageSet
from .evaluator import Session, evaluate
from .formula import And, AtomContext, Cond, Formula
from .model import ModelState, init_generalized, init_stage0
from .ratfn import RationalFn, limit_at_zero

__all__ = [
    "Distribution", "DistributionError", "DegenerateDistribution",
    "load_distribution", "attach", "attach_epsilon", "measure",
    "prob", "epsilon_prob", "bayes_check", "BayesReport",
]


class DistributionError(ValueError):
    pass


class DegenerateDistribution(ValueError):
    """Zero weights present; the caller must use the epsilon-smoothed path."""


@dataclass(frozen=True)
class Distribution:
    """Validated weights over stage-0 worlds, in world-index order."""

    names: tuple[str, ...]
    generalized: bool
    weights: tuple[Fraction, ...]

    @property
    def strictly_positive(self) -> bool:
        return all(w > 0 for w in self.weights)


def _world_keys(names, generalized):
    if generalized:
        return list(names)
    rows = itertools.product((1, 0), repeat=len(names))
    return ["".join(str(b) for b in row) for row in rows]


def load_distribution(text: str) -> Distribution:
    """Parse the distribution file format.

    Line 1 declares ``atoms: <name>*`` (bitstring keys follow, one per
    minterm, in the declared atom order) or ``worlds: <label>*``
    (label keys).  Remaining lines are ``<key> <weight>`` with exact
    rational weights; omitted keys weigh zero; ``#`` starts a comment.
    """
    names = None
    generalized = False
    seen: dict[str, Fraction] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if names is None:
            if line.startswith("atoms:"):
                names = tuple(line[len("atoms:"):].split())
                generalized = False
            elif line.startswith("worlds:"):
                names = tuple(line[len("worlds:"):].split())
                generalized = True
            else:
                raise DistributionError(
                    f"line {lineno}: expected 'atoms:' or 'worlds:' header")
            if not names:
                raise DistributionError(f"line {lineno}: empty declaration")
            if len(set(names)) != len(names):
                raise DistributionError(f"line {lineno}: duplicate names")
            continue
        parts = line.split()
        if len(parts) != 2:
            raise DistributionError(f"line {lineno}: expected '<key> <weight>'")
        key, value = parts
        try:
            weight = Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise DistributionError(f"line {lineno}: bad weight {value!r}") from None
        if weight < 0:
            raise DistributionError(f"line {lineno}: negative weight {value}")
        if key in seen:
            raise DistributionError(f"line {lineno}: duplicate entry for {key!r}")
        seen[key] = weight
    if names is None:
        raise DistributionError("missing 'atoms:' or 'worlds:' header")

    keys = _world_keys(names, generalized)
    known = set(keys)
    for key in seen:
        if key not in known:
            raise DistributionError(f"unknown world {key!r}")
    weights = tuple(seen.get(k, Fraction(0)) for k in keys)
    total = sum(weights)
    if total != 1:
        raise DistributionError(f"weights sum to {total}, expected 1")
    return Distribution(names=names, generalized=generalized, weights=weights)


def _check_names(state: ModelState, dist: Distribution):
    if dist.generalized:
        if not state.generalized:
            raise DistributionError("labeled distribution on a minterm model")
        labels = tuple(state.stages[0].payloads)
        if labels != dist.names:
            raise DistributionError("distribution labels do not match the model")
    else:
        if state.generalized:
            raise DistributionError("minterm distribution on a labeled model")
        if state.atoms is None or state.atoms.names != dist.names:
            raise DistributionError("distribution atoms do not match the model")


def attach(state: ModelState, dist: Distribution):
    """Attach exact masses; later steps maintain them automatically."""
    _check_names(state, dist)
    state.attach_masses(list(dist.weights))


def attach_epsilon(state: ModelState, dist: Distribution):
    """Attach smoothed masses: mix with the uniform distribution by the
    smoothing parameter, so every mass is strictly positive near zero."""
    _check_names(state, dist)
    e = RationalFn.variable()
    k = len(dist.weights)
    state.attach_masses([e / k + (1 - e) * w for w in dist.weights])


def measure(state: ModelState, s: StageSet):
    """Mass of a current-stage set (Fraction, or RationalFn when smoothed)."""
    if s.stage != state.stage_index:
        raise ValueError(f"set at stage {s.stage}, model at {state.stage_index}")
    return state.measure_mask(s.mask)


def prob(state: ModelState, f: Formula):
    """Extended probability of a formula: mass of its evaluated set."""
    if state.masses is None:
        raise DistributionError("no distribution attached")
    if not state.mass_positive:
        raise DegenerateDistribution(
            "distribution has zero weights; use epsilon_prob")
    return measure(state, evaluate(state, f))


def epsilon_prob(dist: Distribution, f: Formula, ctx: AtomContext | None = None,
                 *, schedule="query", max_worlds=None) -> Fraction:
    """Probability via the smoothed pipeline and its exact limit at zero."""
    state = _fresh_state(dist, ctx, schedule, max_worlds)
    attach_epsilon(state, dist)
    value = measure(state, evaluate(state, f))
    if isinstance(value, RationalFn):
        return limit_at_zero(value)
    return limit_at_zero(RationalFn.const(value))


def _fresh_state(dist, ctx, schedule, max_worlds) -> ModelState:
    kwargs = {"schedule": schedule}
    if max_worlds is not None:
        kwargs["max_worlds"] = max_worlds
    if dist.generalized:
        assign = {lab: {lab} for lab in dist.names}
        return init_generalized(dist.names, atom_assign=assign, **kwargs)
    if ctx is None:
        ctx = AtomContext(dist.names)
    elif ctx.names != dist.names:
        raise DistributionError("atom context does not match the distribution")
    return init_stage0(ctx, **kwargs)


@dataclass
class BayesReport:
    cond_prob: Fraction
    base_prob: Fraction
    joint_prob: Fraction
    product: Fraction
    equal: bool


def bayes_check(state: ModelState, psi: Formula, phi: Formula) -> BayesReport:
    """Both sides of the inference identity, exactly.

    One shared evaluation session computes the three values, so the
    plain and joint probabilities reuse the sets found while evaluating
    the conditional instead of re-deriving them on the advanced state.
    """
    if state.masses is None:
        raise DistributionError("no distribution attached")
    if not state.mass_positive:
        raise DegenerateDistribution(
            "distribution has zero weights; use epsilon_prob")
    session = Session(state)
    cond_set = session.value(Cond(psi, phi))
    base_set = session.value(phi)
    joint_set = session.value(And(phi, psi))
    cond = state.measure_mask(state.forward_to_current(cond_set.mask, cond_set.stage))
    base = state.measure_mask(state.forward_to_current(base_set.mask, base_set.stage))
    joint = state.measure_mask(joint_set.mask)
    product = cond * base
    return BayesReport(cond_prob=cond, base_prob=base, joint_prob=joint,
                       product=product, equal=product == joint)
