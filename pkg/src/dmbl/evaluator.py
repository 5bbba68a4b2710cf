"""Set evaluation of formulas in the transferred Kripke model, verdicts,
and the logical-independence check.

The transfer uses total accessibility, so a boxed formula denotes the
full stage when its child does and the empty set otherwise.  That makes
modal answers sound but not complete; verdicts encode the distinction:
a box-free formula whose value is the full stage is *proved* (the model
is complete for the conditional operator), a boxed one is only *valid
in the model*, and any formula whose value falls short of the full
stage is *refuted* (soundness).
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import StageSet
from .formula import (
    Atom, Box, Cond, Formula, Implies, Not, desugar, is_box_free, render,
)
from .model import GuardExceeded, ModelState, ModelUsageError

__all__ = ["Verdict", "Session", "evaluate", "evaluate_desugared", "verdict",
           "check_independence"]

PROVED = "proved"
REFUTED = "refuted"
VALID_IN_MODEL = "valid-in-model"
INCONCLUSIVE = "inconclusive"


@dataclass
class Verdict:
    status: str
    formula: str
    witness: str | None = None
    world_count: int = 0
    guard: dict | None = None

    @property
    def exit_code(self) -> int:
        return {PROVED: 0, VALID_IN_MODEL: 0, REFUTED: 1, INCONCLUSIVE: 3}[self.status]


class _Evaluator:
    """One evaluation pass; memoizes subformula values against forwarding."""

    def __init__(self, state: ModelState):
        self.state = state
        self.memo: dict[Formula, tuple[int, int]] = {}  # formula -> (stage, mask)

    def fwd(self, mask: int, from_stage: int) -> int:
        return self.state.forward_to_current(mask, from_stage)

    def run(self, f: Formula) -> int:
        hit = self.memo.get(f)
        if hit is not None:
            stage, mask = hit
            mask = self.fwd(mask, stage)
            self.memo[f] = (self.state.stage_index, mask)
            return mask
        mask = self._eval(f)
        self.memo[f] = (self.state.stage_index, mask)
        return mask

    def _eval(self, f: Formula) -> int:
        state = self.state
        if isinstance(f, Atom):
            return state.atom_mask(f.name)
        if isinstance(f, Not):
            child = self.run(f.child)
            return state.stage.full ^ child
        if isinstance(f, Implies):
            left = self.run(f.left)
            at = state.stage_index
            right = self.run(f.right)
            left = self.fwd(left, at)
            return (state.stage.full ^ left) | right
        if isinstance(f, Box):
            child = self.run(f.child)
            return state.stage.full if child == state.stage.full else 0
        if isinstance(f, Cond):
            # Antecedent first and its base ensured; the consequent may
            # grow the model further, which goes stale on the base, so
            # re-ensure (a revisit step) before the final lookup.  The
            # consequent's value survives forwarding unchanged, so it is
            # never recomputed.
            ante = self.run(f.antecedent)
            state.ensure_conditioned(ante)
            ante = self.run(f.antecedent)
            at = state.stage_index
            cons = self.run(f.consequent)
            ante = self.fwd(ante, at)
            if not state.covered(ante):
                state.ensure_conditioned(ante)
                cons = self.run(f.consequent)
                ante = self.run(f.antecedent)
            return state.lookup_f(cons, ante)
        raise ModelUsageError(f"evaluate expects a desugared formula, got {f!r}")


class Session:
    """Shared-memo evaluation over one state.

    Values computed earlier in the session are forwarded, never
    recomputed, so asking for several formulas (or re-asking) does not
    re-trigger construction steps whose answers are already known.
    """

    def __init__(self, state: ModelState):
        if state.atoms is None:
            raise ModelUsageError("model has no atom assignment; formulas unavailable")
        self.state = state
        self._ev = _Evaluator(state)

    def value(self, f: Formula) -> StageSet:
        mask = self._ev.run(desugar(f, self.state.atoms))
        return self.state.stage_set(mask)

    def holds(self, f: Formula) -> bool:
        return self.value(f).mask == self.state.stage.full


def evaluate_desugared(state: ModelState, f: Formula) -> StageSet:
    """Value of a core-form formula; the state may advance."""
    mask = _Evaluator(state).run(f)
    return state.stage_set(mask)


def evaluate(state: ModelState, f: Formula) -> StageSet:
    """Desugar against the model's atom context, then evaluate."""
    if state.atoms is None:
        raise ModelUsageError("model has no atom assignment; formulas unavailable")
    return evaluate_desugared(state, desugar(f, state.atoms))


def verdict(state: ModelState, f: Formula) -> Verdict:
    """Classify a formula against the model; guard trips are reported,
    never raised."""
    if state.atoms is None:
        raise ModelUsageError("model has no atom assignment; formulas unavailable")
    core = desugar(f, state.atoms)
    text = render(f)
    try:
        value = evaluate_desugared(state, core)
    except GuardExceeded as g:
        return Verdict(INCONCLUSIVE, text, world_count=state.world_count,
                       guard={"needed": g.needed, "limit": g.limit})
    if value.mask == state.stage.full:
        status = PROVED if is_box_free(core) else VALID_IN_MODEL
        return Verdict(status, text, world_count=state.world_count)
    missing = (state.stage.full ^ value.mask)
    witness_world = (missing & -missing).bit_length() - 1
    return Verdict(REFUTED, text, witness=state.world_label(witness_world),
                   world_count=state.world_count)


def check_independence(state: ModelState, psi: Formula, phi: Formula) -> bool:
    """Whether the conditioned value of ``psi`` against ``phi`` is ``psi``
    itself, as a set equation at the evaluation stage."""
    if state.atoms is None:
        raise ModelUsageError("model has no atom assignment; formulas unavailable")
    ctx = state.atoms
    ev = _Evaluator(state)
    conditioned = ev.run(Cond(desugar(psi, ctx), desugar(phi, ctx)))
    plain = ev.run(desugar(psi, ctx))
    return conditioned == plain
