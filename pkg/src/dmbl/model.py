"""Recursive construction of the free conditional model.

A :class:`ModelState` is a growing tower of world stages.  Stage 0 is
the classical minterm table (or an arbitrary labeled table in
generalized mode).  Processing a nontrivial world set ``b`` (a "base")
appends a stage whose worlds are ordered pairs of current-stage worlds:
one block pairs the inside of ``b`` with the outside, the other block is
its swap image.  That step defines the conditioning function ``f``
against ``b`` and against its complement for *every* set of the new
stage; everything older is carried forward through an injective Boolean
morphism, so earlier answers never change.

Two scheduling modes:

* ``faithful`` walks the cyclic task list: complement pairs in a fixed
  canonical order, every processed pair re-listed at the tail, new sets
  of each stage queued in between.  This realizes the construction
  verbatim (needed for golden reproductions) but visits every set of
  every stage, so deep queries are impractical.
* ``query`` (default) processes exactly the bases a query needs,
  innermost first.  All algebraic invariants of the step are order
  independent, so the result is still a conditional model.

World growth is intrinsically explosive (re-pairing squares set sizes),
so every step is checked against ``max_worlds`` first and refused with
:class:`GuardExceeded`, leaving the state untouched.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .algebra import (
    ForwardRecord, Stage, StageSet, bits, build_stage0, forward_mask,
    mask_of, minterm_mask, swap_mask, world_expr,
)
from .formula import AtomContext

__all__ = [
    "DEFAULT_MAX_WORLDS", "GuardExceeded", "UndefinedConditional",
    "ModelUsageError", "ProcessingRecord", "TaskList", "ModelState",
    "init_stage0", "init_generalized",
]

DEFAULT_MAX_WORLDS = 100_000

# Materializing task-list segments enumerates subsets; cap the work.
_TASK_ENUM_LIMIT = 1 << 20


class GuardExceeded(RuntimeError):
    """A step would overflow the world budget; the state was not modified."""

    def __init__(self, needed: int, limit: int):
        super().__init__(f"step needs {needed} worlds, budget is {limit}")
        self.needed = needed
        self.limit = limit


class UndefinedConditional(LookupError):
    """f(B, A) requested where the construction has not defined it."""


class ModelUsageError(ValueError):
    pass


@dataclass
class ProcessingRecord:
    """One construction step: its base, case data and pairing blocks.

    ``pis[k]``/``gammas[k]`` are the k-th contributing index entry's
    inside/outside parts at stage ``step`` (entries whose product would
    be empty are dropped; they add no worlds).  ``tokens[k]`` keeps the
    revisit entry's originating world pair for reporting.  The two
    blocks live at stage ``step + 1``.
    """

    step: int
    base_mask: int
    case: str                  # "case1" (fresh) | "case0" (revisit)
    nu: int | None
    tokens: list | None
    pis: list
    gammas: list
    pi_gamma_block: int
    gamma_pi_block: int

    @property
    def new_size(self) -> int:
        return sum(2 * p.bit_count() * g.bit_count()
                   for p, g in zip(self.pis, self.gammas))


# ---------------------------------------------------------------------------
# Task list (faithful schedule)

@dataclass
class _Segment:
    """A run of complement pairs, all expressed at one origin stage.

    ``reps`` lists the even-slot members explicitly; a lazy segment
    (``reps is None``) stands for the canonical enumeration of the
    origin stage's *new* pairs: those that are not forward images of the
    previous stage.  ``pos`` counts pairs already consumed.
    """

    stage: int
    reps: list | None
    pos: int = 0


@dataclass
class TaskList:
    """Cyclic construction queue: complement pairs, two slots each.

    Slot ``start`` always holds the next base; ``start + 1`` its
    complement.  Even slots pair with their odd neighbours, and each
    processed pair reappears in the last two slots of the refreshed
    list.
    """

    start: int = 0
    segments: list = field(default_factory=list)

    def pair_counts(self, state: "ModelState") -> list[int]:
        out = []
        for seg in self.segments:
            if seg.reps is not None:
                out.append(len(seg.reps) - seg.pos)
            else:
                out.append(state._new_pair_count(seg.stage) - seg.pos)
        return out

    def end(self, state: "ModelState") -> int:
        return self.start + 2 * sum(self.pair_counts(state))

    def peek(self, state: "ModelState"):
        """(origin stage, even-slot member mask) of the front pair."""
        for seg in self.segments:
            if seg.reps is not None:
                if seg.pos < len(seg.reps):
                    return seg.stage, seg.reps[seg.pos]
            else:
                rep = state._nth_new_pair(seg.stage, seg.pos)
                if rep is not None:
                    return seg.stage, rep
        raise ModelUsageError("task list is empty")

    def advance(self, state: "ModelState"):
        for seg in self.segments:
            if seg.reps is not None:
                if seg.pos < len(seg.reps):
                    seg.pos += 1
                    break
            else:
                if state._nth_new_pair(seg.stage, seg.pos) is not None:
                    seg.pos += 1
                    break
        else:
            raise ModelUsageError("task list is empty")
        self.start += 2
        while self.segments and self._exhausted(state, self.segments[0]):
            self.segments.pop(0)

    def _exhausted(self, state, seg) -> bool:
        if seg.reps is not None:
            return seg.pos >= len(seg.reps)
        return state._nth_new_pair(seg.stage, seg.pos) is None

    def slots(self, state: "ModelState", limit: int = 4096):
        """Materialize remaining (slot, mask-at-current-stage) entries.

        For inspection and golden comparisons only; refuses to expand
        more than ``limit`` slots.
        """
        out = []
        slot = self.start
        for seg in self.segments:
            if seg.reps is not None:
                reps = seg.reps[seg.pos:]
            else:
                reps = state._new_pairs_list(seg.stage, seg.pos, limit)
            for rep in reps:
                cur = state.forward_to_current(rep, seg.stage)
                full = state.stage.full
                out.append((slot, cur))
                out.append((slot + 1, full ^ cur))
                slot += 2
                if len(out) > limit:
                    raise ModelUsageError(f"task list longer than {limit} slots")
        return out


# ---------------------------------------------------------------------------
# Model state

class ModelState:
    """The partial model: stage tables, forwarding, f-table and schedule."""

    def __init__(self, *, atoms=None, stage0: Stage, h_masks=None,
                 schedule="query", max_worlds=DEFAULT_MAX_WORLDS,
                 tasks=None, generalized=False):
        if stage0.size < 2:
            raise ModelUsageError("stage 0 needs at least two worlds")
        if max_worlds < stage0.size:
            raise GuardExceeded(stage0.size, max_worlds)
        if schedule not in ("query", "faithful"):
            raise ModelUsageError(f"unknown schedule {schedule!r}")
        self.atoms: AtomContext | None = atoms
        self.stages: list[Stage] = [stage0]
        self.forwards: list[ForwardRecord] = []
        self.steps: list[ProcessingRecord] = []
        self.history: list[int] = []     # per step, base mask at current stage
        self.h_masks = h_masks           # per atom, at current stage
        self.masses = None               # per current-stage world, field elements
        self.mass_positive = False
        self.max_worlds = max_worlds
        self.schedule = schedule
        self.tasks: TaskList | None = tasks
        self.generalized = generalized
        self._composed: dict[int, list] = {}   # origin stage -> images at current

    # -- views ------------------------------------------------------------

    @property
    def stage(self) -> Stage:
        return self.stages[-1]

    @property
    def stage_index(self) -> int:
        return len(self.stages) - 1

    @property
    def world_count(self) -> int:
        return self.stage.size

    def stage_set(self, mask: int) -> StageSet:
        return StageSet(self.stage_index, mask)

    def atom_mask(self, name: str) -> int:
        if self.h_masks is None:
            raise ModelUsageError("model has no atom assignment")
        return self.h_masks[self.atoms.index(name)]

    def world_label(self, world: int, stage_index=None) -> str:
        k = self.stage_index if stage_index is None else stage_index
        return world_expr(self.stages, k, world)

    # -- forwarding -------------------------------------------------------

    def forward_to_current(self, mask: int, from_stage: int) -> int:
        for k in range(from_stage, self.stage_index):
            mask = forward_mask(self.forwards[k], mask)
        return mask

    def _blocks_at_current(self, origin: int) -> list:
        """Per-world forward images of stage ``origin`` at the current stage."""
        if origin == self.stage_index:
            return [1 << w for w in range(self.stage.size)]
        blocks = self._composed.get(origin)
        if blocks is None:
            rec = self.forwards[origin]
            blocks = [rec.image_mask(w) for w in range(self.stages[origin].size)]
            start = origin + 1
        else:
            return blocks
        for k in range(start, self.stage_index):
            rec = self.forwards[k]
            blocks = [forward_mask(rec, b) for b in blocks]
        self._composed[origin] = blocks
        return blocks

    def _advance_composed(self):
        rec = self.forwards[-1]
        for origin, blocks in self._composed.items():
            self._composed[origin] = [forward_mask(rec, b) for b in blocks]

    # -- case classification and coverage ----------------------------------

    def classify_case(self, base: StageSet | int):
        """Return ``("case1", None, mask)`` or ``("case0", nu, oriented mask)``.

        A revisit matches when some earlier step's base/complement pair,
        forwarded to the current stage, equals this base's pair; the
        orientation snaps to the earlier base.
        """
        mask = self._base_mask(base)
        full = self.stage.full
        for m in range(len(self.steps) - 1, -1, -1):
            fwd = self.history[m]
            if fwd == mask or fwd == full ^ mask:
                return "case0", m, fwd
        return "case1", None, mask

    def covered(self, base: StageSet | int) -> bool:
        """True when f(B, base) is defined for every current-stage B."""
        mask = self._base_mask(base)
        full = self.stage.full
        if mask == 0 or mask == full:
            return True
        case, nu, _ = self.classify_case(mask)
        if case == "case1":
            return False
        # Total coverage needs the forwarding from the processing stage to
        # be onto, which (sizes never shrink) means equal world counts.
        return self.stages[nu + 1].size == self.stage.size

    def _base_mask(self, base) -> int:
        if isinstance(base, StageSet):
            if base.stage != self.stage_index:
                raise ModelUsageError(
                    f"set at stage {base.stage}, model at {self.stage_index}")
            return base.mask
        return int(base)

    # -- the construction step ---------------------------------------------

    def process_base(self, base: StageSet | int) -> ProcessingRecord:
        """Append one stage, conditioning on ``base`` (and its complement)."""
        mask = self._base_mask(base)
        full = self.stage.full
        if mask == 0 or mask == full:
            raise ModelUsageError("cannot process a trivial base")
        if self.tasks is not None:
            front_stage, front_rep = self.tasks.peek(self)
            if self.forward_to_current(front_rep, front_stage) != mask:
                raise ModelUsageError(
                    "faithful schedule processes the task-list front only")

        n = self.stage_index
        case, nu, oriented = self.classify_case(mask)
        if case == "case1":
            tokens = None
            pis = [oriented]
            gammas = [full ^ oriented]
        else:
            tokens, pis, gammas = [], [], []
            prior = self.steps[nu]
            stage_after = nu + 1
            blocks = self._blocks_at_current(stage_after)
            inside = list(bits(prior.pi_gamma_block))
            outside = list(bits(prior.gamma_pi_block))
            f_against_base = {w: self.lookup_f(blocks[w], oriented) for w in inside}
            f_against_compl = {w2: self.lookup_f(blocks[w2], full ^ oriented)
                               for w2 in outside}
            for w in inside:
                for w2 in outside:
                    pi = f_against_compl[w2] & blocks[w]
                    gamma = f_against_base[w] & blocks[w2]
                    if pi and gamma:
                        tokens.append((w, w2))
                        pis.append(pi)
                        gammas.append(gamma)

        needed = sum(2 * p.bit_count() * g.bit_count() for p, g in zip(pis, gammas))
        if needed > self.max_worlds:
            raise GuardExceeded(needed, self.max_worlds)

        record = self._commit_step(n, oriented, case, nu, tokens, pis, gammas)
        return record

    def _commit_step(self, n, oriented, case, nu, tokens, pis, gammas):
        old = self.stage
        runs: list = [None] * old.size
        payloads = []
        masses_new = [] if self.masses is not None else None

        def block_sum(mask):
            return sum(self.masses[w] for w in bits(mask))

        pi_totals = [block_sum(p) for p in pis] if masses_new is not None else None
        gamma_totals = [block_sum(g) for g in gammas] if masses_new is not None else None
        if masses_new is not None:
            for total in itertools.chain(pi_totals, gamma_totals):
                if not total:
                    raise ModelUsageError(
                        "zero-mass part during a step; use the epsilon-smoothed path "
                        "for distributions with zero weights")

        # Inside-outside block first, swapped block second; left factor
        # outer, right factor inner.  Each source world's image is then
        # one contiguous run.
        for k, (pi, gamma) in enumerate(zip(pis, gammas)):
            gs = list(bits(gamma))
            for x in bits(pi):
                lo = len(payloads)
                for y in gs:
                    payloads.append((x, y))
                    if masses_new is not None:
                        masses_new.append(self.masses[x] * self.masses[y]
                                          / gamma_totals[k])
                runs[x] = (lo, len(payloads))
        split = len(payloads)
        for k, (pi, gamma) in enumerate(zip(pis, gammas)):
            ps = list(bits(pi))
            for x in bits(gamma):
                lo = len(payloads)
                for y in ps:
                    payloads.append((x, y))
                    if masses_new is not None:
                        masses_new.append(self.masses[x] * self.masses[y]
                                          / pi_totals[k])
                runs[x] = (lo, len(payloads))

        size = len(payloads)
        pair_index = {p: i for i, p in enumerate(payloads)}
        swap = [pair_index[(y, x)] for (x, y) in payloads]
        new_stage = Stage(index=old.index + 1, payloads=payloads, swap=swap,
                          pair_index=pair_index)
        rec = ForwardRecord(source_stage=old.index, target_size=size, runs=runs)
        record = ProcessingRecord(
            step=n, base_mask=oriented, case=case, nu=nu, tokens=tokens,
            pis=pis, gammas=gammas,
            pi_gamma_block=(1 << split) - 1,
            gamma_pi_block=((1 << size) - 1) ^ ((1 << split) - 1),
        )

        self.stages.append(new_stage)
        self.forwards.append(rec)
        self.steps.append(record)
        self.history = [forward_mask(rec, h) for h in self.history]
        self.history.append(record.pi_gamma_block)
        if self.h_masks is not None:
            self.h_masks = [forward_mask(rec, h) for h in self.h_masks]
        if masses_new is not None:
            self.masses = masses_new
        self._advance_composed()
        return record

    # -- faithful schedule ---------------------------------------------------

    def faithful_step(self) -> ProcessingRecord:
        """Process the task-list front and refresh the list."""
        if self.tasks is None:
            raise ModelUsageError("no task list; state uses the query schedule")
        origin, rep = self.tasks.peek(self)
        base = self.forward_to_current(rep, origin)
        record = self.process_base(base)            # guard may fire first
        self.tasks.advance(self)
        new_stage = self.stage_index
        self.tasks.segments.append(_Segment(stage=new_stage, reps=None))
        self.tasks.segments.append(
            _Segment(stage=new_stage, reps=[record.pi_gamma_block]))
        return record

    def ensure_conditioned(self, base: StageSet | int) -> int:
        """Make f(., base) total for the current stage; returns steps taken."""
        mask = self._base_mask(base)
        taken = 0
        if self.covered(mask):
            return taken
        if self.schedule == "faithful":
            while not self.covered(mask):
                from_stage = self.stage_index
                self.faithful_step()
                mask = self.forward_to_current(mask, from_stage)
                taken += 1
            return taken
        self.process_base(mask)
        return 1

    # -- conditioning lookups -------------------------------------------------

    def lookup_f(self, b: StageSet | int, a: StageSet | int) -> int:
        """The conditional set f(B, A) at the current stage.

        A must be trivial or already processed with B expressible at the
        processing stage; otherwise call ``ensure_conditioned`` first.
        """
        b_mask = self._base_mask(b)
        a_mask = self._base_mask(a)
        full = self.stage.full
        if a_mask == 0 or a_mask == full:
            return b_mask
        case, nu, oriented = self.classify_case(a_mask)
        if case == "case1":
            raise UndefinedConditional(
                "base never processed; call ensure_conditioned first")
        record = self.steps[nu]
        stage_after = nu + 1
        target = self.stages[stage_after]

        if stage_after == self.stage_index:
            c_mask = b_mask
        else:
            blocks = self._blocks_at_current(stage_after)
            c_mask = 0
            for w in range(target.size):
                part = b_mask & blocks[w]
                if part == blocks[w]:
                    c_mask |= 1 << w
                elif part:
                    raise UndefinedConditional(
                        "set not expressible at the base's processing stage; "
                        "call ensure_conditioned first")

        block = record.pi_gamma_block if a_mask == oriented else record.gamma_pi_block
        inside = c_mask & block
        value = inside | swap_mask(target, inside)
        return self.forward_to_current(value, stage_after)

    # -- measures --------------------------------------------------------------

    def attach_masses(self, masses: list):
        if self.stage_index != 0:
            raise ModelUsageError("attach a distribution before any processing step")
        if len(masses) != self.stage.size:
            raise ModelUsageError(
                f"{len(masses)} masses for {self.stage.size} worlds")
        self.masses = list(masses)
        self.mass_positive = all(_positive(m) for m in masses)

    def measure_mask(self, mask: int):
        if self.masses is None:
            raise ModelUsageError("no distribution attached")
        total = None
        for w in bits(mask):
            total = self.masses[w] if total is None else total + self.masses[w]
        if total is None:
            return 0 * self.masses[0] if self.masses else 0
        return total

    # -- task-list enumeration helpers ------------------------------------------

    def _new_pair_count(self, k: int) -> int:
        pairs = (1 << (self.stages[k].size - 1)) - 1
        if k == 0:
            return pairs
        return pairs - ((1 << (self.stages[k - 1].size - 1)) - 1)

    def _iter_new_pairs(self, k: int):
        """Canonical even-slot members of stage k's new pairs.

        Order: ascending member cardinality, then lexicographic on
        sorted world indices; for half-size ties the member containing
        world 0 represents the pair.  Pairs that are forward images of
        stage k-1 are skipped (they were already listed there).
        """
        size = self.stages[k].size
        rec = self.forwards[k - 1] if k > 0 else None
        seen = 0
        for c in range(1, size // 2 + 1):
            for combo in itertools.combinations(range(size), c):
                seen += 1
                if seen > _TASK_ENUM_LIMIT:
                    raise ModelUsageError("task-list enumeration too large")
                if 2 * c == size and combo[0] != 0:
                    continue
                mask = mask_of(combo)
                if rec is not None and rec.is_image(mask):
                    continue
                yield mask

    def _nth_new_pair(self, k: int, pos: int):
        for i, mask in enumerate(self._iter_new_pairs(k)):
            if i == pos:
                return mask
        return None

    def _new_pairs_list(self, k: int, pos: int, limit: int):
        out = []
        for i, mask in enumerate(self._iter_new_pairs(k)):
            if i >= pos:
                out.append(mask)
            if len(out) > limit:
                break
        return out

    # -- reporting ----------------------------------------------------------------

    def stats(self) -> dict:
        return {
            "stages": len(self.stages),
            "worldCount": self.world_count,
            "steps": [
                {"step": r.step, "case": r.case, "nu": r.nu,
                 "baseSize": r.base_mask.bit_count(),
                 "stageSize": self.stages[r.step + 1].size}
                for r in self.steps
            ],
            "schedule": self.schedule,
            "maxWorlds": self.max_worlds,
        }


def _positive(m) -> bool:
    gt = getattr(m, "positive_near_zero", None)
    if gt is not None:
        return gt()
    return m > 0


# ---------------------------------------------------------------------------
# Initialization

def init_stage0(ctx: AtomContext, *, schedule="query",
                max_worlds=DEFAULT_MAX_WORLDS) -> ModelState:
    """Standard initialization from an atom context: minterm worlds,
    atom assignment sets, and (faithful mode) the canonical task list."""
    stage0 = build_stage0(len(ctx))
    h = [minterm_mask(len(ctx), i) for i in range(len(ctx))]
    tasks = TaskList(segments=[_Segment(stage=0, reps=None)]) \
        if schedule == "faithful" else None
    return ModelState(atoms=ctx, stage0=stage0, h_masks=h, schedule=schedule,
                      max_worlds=max_worlds, tasks=tasks)


def init_generalized(labels, *, schedule="query", task_order=None,
                     atom_assign=None, max_worlds=DEFAULT_MAX_WORLDS) -> ModelState:
    """Generalized initialization from labeled stage-0 worlds.

    ``task_order`` (faithful mode) lists the even-slot member of each
    complement pair, in slot order, and must cover every nontrivial
    pair exactly once.  ``atom_assign`` optionally maps atom names to
    label sets; without it formulas cannot be evaluated but the set
    machinery is fully usable.
    """
    labels = list(labels)
    if len(labels) < 2:
        raise ModelUsageError("generalized mode needs at least two worlds")
    if len(set(labels)) != len(labels):
        raise ModelUsageError("world labels must be distinct")
    stage0 = Stage(index=0, payloads=labels)
    index = {lab: i for i, lab in enumerate(labels)}

    atoms = None
    h = None
    if atom_assign is not None:
        atoms = AtomContext(tuple(atom_assign.keys()))
        h = []
        for name in atoms.names:
            members = atom_assign[name]
            h.append(mask_of(index[lab] for lab in members))

    tasks = None
    if schedule == "faithful":
        if task_order is None:
            tasks = TaskList(segments=[_Segment(stage=0, reps=None)])
        else:
            reps = [mask_of(index[lab] for lab in member) for member in task_order]
            full = stage0.full
            want = (1 << (stage0.size - 1)) - 1
            pairs = {min(r, full ^ r) for r in reps}
            if len(reps) != want or len(pairs) != want or any(
                    r in (0, full) for r in reps):
                raise ModelUsageError(
                    "task order must list every nontrivial complement pair once")
            tasks = TaskList(segments=[_Segment(stage=0, reps=reps)])

    return ModelState(atoms=atoms, stage0=stage0, h_masks=h, schedule=schedule,
                      max_worlds=max_worlds, tasks=tasks, generalized=True)
