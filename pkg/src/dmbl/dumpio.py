"""Line-oriented model dump format, version ``dmbl-model v1``.

Layout::

    dmbl-model v1
    schedule: query
    maxworlds: 100000
    atoms: p q                  # or: worlds: a b c
    assign p: a b               # generalized mode only, one per atom
    stage 0: 11 10 01 00        # worlds in index order
    stage 1: (11,01) (11,00) ...# nested pair expressions over stage-0 labels
    step 0: base 0,1 case1      # base as world indices at the step's stage
    step 0 entry 0: pi 0,1 gamma 2,3
    step 1: base 0,3 case0 nu 0
    mass 0: 1/5                 # final-stage masses, exact rationals

A dump replays deterministically: the loader re-runs each step from its
entries and verifies the reconstructed world tables against the dumped
stage lines bit-exactly.  The task list is not part of the format, so a
loaded state always uses the query schedule.  Smoothed (rational
function) measures are not dumpable.
"""

from __future__ import annotations

from fractions import Fraction

from .algebra import bits, mask_of
from .formula import AtomContext
from .model import ModelState, init_generalized, init_stage0

__all__ = ["DumpFormatError", "dump_model", "load_model"]

_HEADER = "dmbl-model v1"


class DumpFormatError(ValueError):
    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


def _indices(mask: int) -> str:
    return ",".join(str(i) for i in bits(mask)) if mask else "-"


def _parse_indices(text: str, lineno: int) -> int:
    if text == "-":
        return 0
    try:
        return mask_of(int(t) for t in text.split(","))
    except ValueError:
        raise DumpFormatError(f"bad index list {text!r}", lineno) from None


def dump_model(state: ModelState) -> str:
    out = [_HEADER]
    out.append(f"schedule: {state.schedule}")
    out.append(f"maxworlds: {state.max_worlds}")
    if state.generalized:
        out.append("worlds: " + " ".join(state.stages[0].payloads))
        if state.atoms is not None:
            for i, name in enumerate(state.atoms.names):
                members = [state.stages[0].payloads[w]
                           for w in bits(_h_at_stage0(state, i))]
                out.append(f"assign {name}: " + " ".join(members))
    else:
        out.append("atoms: " + " ".join(state.atoms.names))
    for k in range(len(state.stages)):
        worlds = " ".join(state.world_label(w, k)
                          for w in range(state.stages[k].size))
        out.append(f"stage {k}: {worlds}")
    for rec in state.steps:
        line = f"step {rec.step}: base {_indices(rec.base_mask)} {rec.case}"
        if rec.case == "case0":
            line += f" nu {rec.nu}"
        out.append(line)
        for j, (pi, gamma) in enumerate(zip(rec.pis, rec.gammas)):
            out.append(f"step {rec.step} entry {j}: "
                       f"pi {_indices(pi)} gamma {_indices(gamma)}")
    if state.masses is not None:
        for w, m in enumerate(state.masses):
            if not isinstance(m, (Fraction, int)):
                raise DumpFormatError("smoothed measures are not dumpable")
            out.append(f"mass {w}: {Fraction(m)}")
    return "\n".join(out) + "\n"


def _h_at_stage0(state: ModelState, atom_index: int) -> int:
    # h is maintained at the current stage; recover the stage-0 set by
    # walking the forward records backwards (images are injective).
    mask = state.h_masks[atom_index]
    for rec in reversed(state.forwards):
        pre = rec.preimage(mask)
        if pre is None:
            raise DumpFormatError("atom assignment is not a stage-0 set")
        mask = pre
    return mask


def load_model(text: str) -> ModelState:
    lines = [(n, raw.split("#", 1)[0].strip())
             for n, raw in enumerate(text.splitlines(), start=1)]
    lines = [(n, s) for n, s in lines if s]
    if not lines:
        raise DumpFormatError("empty dump")
    pos = 0

    def take():
        nonlocal pos
        if pos >= len(lines):
            raise DumpFormatError("unexpected end of file",
                                  lines[-1][0] if lines else 0)
        item = lines[pos]
        pos += 1
        return item

    def peek():
        return lines[pos] if pos < len(lines) else (None, "")

    lineno, header = take()
    if header != _HEADER:
        raise DumpFormatError(f"bad header {header!r}", lineno)

    schedule = "query"
    max_worlds = None
    while peek()[1].startswith(("schedule:", "maxworlds:")):
        lineno, line = take()
        key, _, value = line.partition(":")
        if key == "schedule":
            schedule = value.strip()
        else:
            try:
                max_worlds = int(value)
            except ValueError:
                raise DumpFormatError(f"bad maxworlds {value!r}", lineno) from None

    lineno, decl = take()
    kwargs = {} if max_worlds is None else {"max_worlds": max_worlds}
    if decl.startswith("atoms:"):
        names = tuple(decl[len("atoms:"):].split())
        if not names:
            raise DumpFormatError("empty atom declaration", lineno)
        state = init_stage0(AtomContext(names), **kwargs)
    elif decl.startswith("worlds:"):
        labels = decl[len("worlds:"):].split()
        assign = {}
        while peek()[1].startswith("assign "):
            lineno2, line = take()
            head, _, members = line.partition(":")
            assign[head[len("assign "):].strip()] = set(members.split())
        state = init_generalized(labels, atom_assign=assign or None, **kwargs)
    else:
        raise DumpFormatError("expected 'atoms:' or 'worlds:' declaration", lineno)

    # Stage 0 listing must match the freshly initialized table.
    lineno, line = take()
    expect0 = " ".join(state.world_label(w, 0) for w in range(state.stages[0].size))
    if line != f"stage 0: {expect0}":
        raise DumpFormatError("stage 0 listing does not match the declaration", lineno)

    stage_lines = []
    while peek()[1].startswith("stage "):
        stage_lines.append(take())

    step_no = 0
    while peek()[1].startswith("step "):
        lineno, line = take()
        body = line[len("step "):]
        head, _, rest = body.partition(":")
        if head.strip() != str(step_no):
            raise DumpFormatError(f"expected step {step_no}", lineno)
        parts = rest.split()
        if len(parts) < 3 or parts[0] != "base":
            raise DumpFormatError("malformed step line", lineno)
        base = _parse_indices(parts[1], lineno)
        case = parts[2]
        nu = None
        if case == "case0":
            if len(parts) != 5 or parts[3] != "nu":
                raise DumpFormatError("case0 step needs 'nu <index>'", lineno)
            nu = int(parts[4])
        elif case != "case1":
            raise DumpFormatError(f"unknown case tag {case!r}", lineno)

        tokens = None
        pis, gammas = [], []
        while peek()[1].startswith(f"step {step_no} entry "):
            lineno2, eline = take()
            fields = eline.split(":", 1)[1].split()
            if len(fields) != 4 or fields[0] != "pi" or fields[2] != "gamma":
                raise DumpFormatError("malformed entry line", lineno2)
            pis.append(_parse_indices(fields[1], lineno2))
            gammas.append(_parse_indices(fields[3], lineno2))
        if not pis:
            raise DumpFormatError(f"step {step_no} has no entries", lineno)
        state._commit_step(step_no, base, case, nu, tokens, pis, gammas)

        if step_no >= len(stage_lines):
            raise DumpFormatError(f"missing stage {step_no + 1} listing", lineno)
        sl_no, sl = stage_lines[step_no]
        rebuilt = " ".join(state.world_label(w)
                           for w in range(state.stage.size))
        if sl != f"stage {step_no + 1}: {rebuilt}":
            raise DumpFormatError(
                f"stage {step_no + 1} listing does not match the replayed step", sl_no)
        step_no += 1

    if step_no != len(stage_lines):
        raise DumpFormatError("more stage listings than steps",
                              stage_lines[step_no][0])

    masses = {}
    while peek()[1].startswith("mass "):
        lineno, line = take()
        head, _, value = line.partition(":")
        try:
            w = int(head[len("mass "):])
            masses[w] = Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise DumpFormatError("malformed mass line", lineno) from None
    if pos != len(lines):
        raise DumpFormatError(f"unrecognized line {lines[pos][1]!r}", lines[pos][0])
    if masses:
        if sorted(masses) != list(range(state.stage.size)):
            raise DumpFormatError("mass lines do not cover the final stage")
        ordered = [masses[w] for w in range(state.stage.size)]
        if sum(ordered) != 1:
            raise DumpFormatError(f"masses sum to {sum(ordered)}, expected 1")
        state.masses = ordered
        state.mass_positive = all(m > 0 for m in ordered)

    state.schedule = "query"
    return state
