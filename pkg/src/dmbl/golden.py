"""Golden reproduction scenario: the three-world worked construction.

A generalized model over labeled worlds ``a, b, c`` with the explicit
task order ``{a,b}|c, {b,c}|a, {c,a}|b`` and masses 1/5, 3/10, 1/2; one
faithful step then reproduces a fully worked-out stage: the four pair
worlds, the forward images, the conditioning table entries, the new
masses and the inference identity, every value compared exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import bits, mask_of
from .model import ModelState, init_generalized

__all__ = ["GoldenItem", "golden_report", "build_golden_state"]

LABELS = ("a", "b", "c")
TASK_ORDER = [("a", "b"), ("b", "c"), ("c", "a")]
WEIGHTS = {"a": Fraction(1, 5), "b": Fraction(3, 10), "c": Fraction(1, 2)}

EXPECTED_WORLDS = ["(a,c)", "(b,c)", "(c,a)", "(c,b)"]
EXPECTED_IMAGES = {"a": ["(a,c)"], "b": ["(b,c)"], "c": ["(c,a)", "(c,b)"]}
EXPECTED_MASSES = {"(a,c)": Fraction(1, 5), "(b,c)": Fraction(3, 10),
                   "(c,a)": Fraction(1, 5), "(c,b)": Fraction(3, 10)}
# f(B, A) rows: (B as stage-0 labels or a pair world, A side, expected worlds)
EXPECTED_COND = [
    (("a",), "base", ["(a,c)", "(c,a)"]),
    (("b",), "base", ["(b,c)", "(c,b)"]),
    (("c",), "compl", ["(a,c)", "(b,c)", "(c,a)", "(c,b)"]),
    ("(c,a)", "compl", ["(a,c)", "(c,a)"]),
    ("(c,b)", "compl", ["(b,c)", "(c,b)"]),
]
# Refreshed task list: forwarded unprocessed pairs, the new sets of the
# pair stage, then the processed pair re-listed last.
EXPECTED_TASK_HEAD = [["(b,c)", "(c,a)", "(c,b)"], ["(a,c)"],
                      ["(a,c)", "(c,a)", "(c,b)"], ["(b,c)"]]
EXPECTED_TASK_TAIL = [["(a,c)", "(b,c)"], ["(c,a)", "(c,b)"]]
EXPECTED_NEW_PAIR_COUNT = 4


@dataclass
class GoldenItem:
    name: str
    expected: str
    got: str

    @property
    def ok(self) -> bool:
        return self.expected == self.got


def build_golden_state() -> ModelState:
    state = init_generalized(
        LABELS, schedule="faithful", task_order=TASK_ORDER,
        atom_assign={lab: {lab} for lab in LABELS})
    state.attach_masses([WEIGHTS[lab] for lab in LABELS])
    state.faithful_step()
    return state


def _worlds(state, mask) -> list:
    return [state.world_label(w) for w in bits(mask)]


def golden_report(state: ModelState | None = None) -> list[GoldenItem]:
    """Compare every scripted value on a freshly built (or given) state.

    A loaded state has no task list; the task-list items are then
    skipped (the dump format does not carry it)."""
    fresh = state is None
    if fresh:
        state = build_golden_state()
    items = []

    got_worlds = [state.world_label(w) for w in range(state.stage.size)]
    items.append(GoldenItem("pair-stage worlds", str(EXPECTED_WORLDS),
                            str(got_worlds)))

    label_index = {lab: i for i, lab in enumerate(LABELS)}
    for lab, want in EXPECTED_IMAGES.items():
        got = _worlds(state, state.forward_to_current(1 << label_index[lab], 0))
        items.append(GoldenItem(f"forward image of {lab}", str(want), str(got)))

    for w, lab in enumerate(got_worlds):
        want = EXPECTED_MASSES.get(lab)
        items.append(GoldenItem(f"mass of {lab}", str(want),
                                str(state.masses[w])))

    base = state.forward_to_current(mask_of(label_index[l] for l in ("a", "b")), 0)
    compl = state.stage.full ^ base
    pair_of = {state.world_label(w): w for w in range(state.stage.size)}
    for b_spec, side, want in EXPECTED_COND:
        if isinstance(b_spec, str):
            b_mask = 1 << pair_of[b_spec]
            b_name = b_spec
        else:
            b_mask = state.forward_to_current(
                mask_of(label_index[l] for l in b_spec), 0)
            b_name = "{" + ",".join(b_spec) + "}"
        ante = base if side == "base" else compl
        got = _worlds(state, state.lookup_f(b_mask, ante))
        items.append(GoldenItem(
            f"cond({b_name} | {'base' if side == 'base' else 'complement'})",
            str(want), str(got)))

    bayes_ok = True
    for ante in (base, compl):
        pa = state.measure_mask(ante)
        for b in range(1 << state.stage.size):
            lhs = state.measure_mask(state.lookup_f(b, ante)) * pa
            if lhs != state.measure_mask(b & ante):
                bayes_ok = False
    items.append(GoldenItem("inference identity over all sets of the pair stage",
                            "exact", "exact" if bayes_ok else "violated"))

    if state.tasks is not None:
        slots = state.tasks.slots(state)
        got_head = [sorted(_worlds(state, m)) for _, m in slots[:4]]
        got_tail = [sorted(_worlds(state, m)) for _, m in slots[-2:]]
        items.append(GoldenItem("task list head (forwarded pairs)",
                                str([sorted(x) for x in EXPECTED_TASK_HEAD]),
                                str(got_head)))
        items.append(GoldenItem("task list tail (re-listed pair)",
                                str([sorted(x) for x in EXPECTED_TASK_TAIL]),
                                str(got_tail)))
        new_pairs = (len(slots) - 6) // 2
        items.append(GoldenItem("new pair count in refreshed list",
                                str(EXPECTED_NEW_PAIR_COUNT), str(new_pairs)))
    return items
