"""Finite Boolean algebra of construction-stage worlds.

World sets are int bitmasks over a stage's world indices; a
:class:`StageSet` tags the mask with its stage so cross-stage mixing
fails loudly.  Stage-0 worlds are classical minterm rows (all-true
first) or opaque labels in generalized mode; every later stage's worlds
are ordered pairs of previous-stage world indices, interned pair-block
first, swapped block second, so indices are reproducible.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

__all__ = [
    "StageSet", "Stage", "ForwardRecord",
    "bits", "mask_of", "complement", "swap_image", "forward",
    "minterm_mask", "build_stage0", "world_expr",
]


def bits(mask: int):
    """Yield set bit positions, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(indices) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


@dataclass(frozen=True)
class StageSet:
    """A subset of one stage's worlds."""

    stage: int
    mask: int

    def __and__(self, other: "StageSet") -> "StageSet":
        self._check(other)
        return StageSet(self.stage, self.mask & other.mask)

    def __or__(self, other: "StageSet") -> "StageSet":
        self._check(other)
        return StageSet(self.stage, self.mask | other.mask)

    def __len__(self):
        return self.mask.bit_count()

    def __contains__(self, world: int):
        return bool(self.mask >> world & 1)

    def indices(self) -> list[int]:
        return list(bits(self.mask))

    def _check(self, other):
        if self.stage != other.stage:
            raise ValueError(f"stage mismatch: {self.stage} vs {other.stage}")


@dataclass
class Stage:
    """One stage's world table.

    ``payloads[i]`` is a bit row (standard stage 0), a label string
    (generalized stage 0) or a ``(left, right)`` index pair into the
    previous stage.  ``swap[i]`` is the index of the pair with swapped
    components; it exists for every world of every stage above 0.
    """

    index: int
    payloads: list
    swap: list | None = None
    pair_index: dict = field(default_factory=dict, repr=False)

    @property
    def size(self) -> int:
        return len(self.payloads)

    @property
    def full(self) -> int:
        return (1 << self.size) - 1


@dataclass
class ForwardRecord:
    """Forward images of one construction step's source worlds.

    Thanks to the interning order each source world's image is one
    contiguous index range ``[lo, hi)`` at the next stage; images of
    distinct worlds are disjoint and together cover the next stage.
    """

    source_stage: int
    target_size: int
    runs: list  # per source world, (lo, hi)

    def image_mask(self, world: int) -> int:
        lo, hi = self.runs[world]
        return (1 << hi) - (1 << lo)

    def is_image(self, mask: int) -> bool:
        """True when ``mask`` (at the target stage) is a union of world images."""
        for lo, hi in self.runs:
            block = (1 << hi) - (1 << lo)
            part = mask & block
            if part and part != block:
                return False
        return True

    def preimage(self, mask: int):
        """Source mask whose image is ``mask``, or None when not representable."""
        src = 0
        for w, (lo, hi) in enumerate(self.runs):
            block = (1 << hi) - (1 << lo)
            part = mask & block
            if part == block:
                src |= 1 << w
            elif part:
                return None
        return src


def complement(stage: Stage, s: StageSet) -> StageSet:
    """Set difference within the stage's full world table."""
    if s.stage != stage.index:
        raise ValueError(f"stage mismatch: set at {s.stage}, table at {stage.index}")
    return StageSet(s.stage, stage.full ^ s.mask)


def swap_image(stage: Stage, s: StageSet) -> StageSet:
    """Image under the pair swap (x, y) -> (y, x)."""
    if s.stage != stage.index:
        raise ValueError(f"stage mismatch: set at {s.stage}, table at {stage.index}")
    if stage.swap is None:
        raise ValueError("stage-0 worlds have no swap partner")
    return StageSet(s.stage, swap_mask(stage, s.mask))


def swap_mask(stage: Stage, mask: int) -> int:
    out = 0
    swap = stage.swap
    for w in bits(mask):
        out |= 1 << swap[w]
    return out


def forward(rec: ForwardRecord, s: StageSet) -> StageSet:
    """Union of the members' forward images, one stage up."""
    if s.stage != rec.source_stage:
        raise ValueError(f"stage mismatch: set at {s.stage}, record at {rec.source_stage}")
    return StageSet(s.stage + 1, forward_mask(rec, s.mask))


def forward_mask(rec: ForwardRecord, mask: int) -> int:
    out = 0
    for w in bits(mask):
        lo, hi = rec.runs[w]
        out |= (1 << hi) - (1 << lo)
    return out


def build_stage0(num_atoms: int) -> Stage:
    """Standard stage 0: one world per minterm, all-atoms-true first.

    Enumeration is itertools.product((1, 0), ...) so that the canonical
    pair order starts the task list at the first atom's assignment set.
    """
    payloads = list(itertools.product((1, 0), repeat=num_atoms))
    return Stage(index=0, payloads=payloads)


def minterm_mask(num_atoms: int, atom_index: int) -> int:
    """Mask of standard stage-0 worlds whose ``atom_index`` bit is 1."""
    if not 0 <= atom_index < num_atoms:
        raise KeyError(f"atom index {atom_index} out of range")
    mask = 0
    for w, row in enumerate(itertools.product((1, 0), repeat=num_atoms)):
        if row[atom_index] == 1:
            mask |= 1 << w
    return mask


def world_expr(stages: list, stage_index: int, world: int) -> str:
    """Render a world as a nested pair expression over stage-0 labels."""
    payload = stages[stage_index].payloads[world]
    if stage_index == 0:
        if isinstance(payload, str):
            return payload
        return "".join(str(b) for b in payload)
    left, right = payload
    return f"({world_expr(stages, stage_index - 1, left)},{world_expr(stages, stage_index - 1, right)})"
