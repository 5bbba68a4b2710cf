"""Command-line front end.

Commands: ``check``, ``prob``, ``indep``, ``lewis-demo``, ``appendix-f``,
``regress``, ``dump``, ``load``.  Exit codes: 0 success / proved, 1
refuted, 2 usage or parse errors, 3 world-guard trip, 4 degenerate
distribution without ``--epsilon``.

``--json`` reports are byte-deterministic for identical inputs and
seed: keys are sorted and wall times are excluded.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from .dumpio import DumpFormatError, dump_model, load_model
from .evaluator import Verdict, check_independence, verdict
from .formula import AtomContext, ParseError, parse, render
from .golden import golden_report
from .lewis import lewis_demo
from .model import (DEFAULT_MAX_WORLDS, GuardExceeded, ModelUsageError,
                    init_stage0)
from .probability import (DegenerateDistribution, DistributionError, attach,
                          epsilon_prob, load_distribution, prob)
from .ratfn import RationalFn, limit_at_zero
from .suites import (axiom_suite, classical_suite, construction_suite,
                     necessitation_check, nondistortion_suite,
                     probability_suite, uniqueness_check)

EXIT_OK, EXIT_REFUTED, EXIT_USAGE, EXIT_GUARD, EXIT_DEGENERATE = 0, 1, 2, 3, 4

_ATOM_ALPHABET = "pqrstuvwxyz"


def _emit(args, payload: dict, human: str) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True, default=str))
    else:
        print(human)


def _context_for(args, text_atoms) -> AtomContext:
    if getattr(args, "atoms", None):
        names = tuple(_ATOM_ALPHABET[:args.atoms])
    else:
        names = tuple(sorted(text_atoms)) or ("p",)
    return AtomContext(names)


def _build_state(args, ctx):
    return init_stage0(ctx, schedule=args.schedule, max_worlds=args.max_worlds)


class _UsageError(SystemExit):
    def __init__(self):
        super().__init__(EXIT_USAGE)


def _parse_formula(args, text, ctx):
    try:
        return parse(text, ctx)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        raise _UsageError() from None


def cmd_check(args) -> int:
    from .formula import atoms_of
    try:
        pre = parse(args.formula, AtomContext(tuple(_ATOM_ALPHABET)))
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_USAGE
    ctx = _context_for(args, atoms_of(pre))
    f = _parse_formula(args, args.formula, ctx)
    state = _build_state(args, ctx)
    v = verdict(state, f)
    payload = {"verdict": v.status, "witness": v.witness,
               "values": None, "worldCount": v.world_count}
    lines = [f"{v.status}: {render(f)}"]
    if v.status == "refuted":
        lines.append(f"counter-world: {v.witness}")
    if v.status == "valid-in-model":
        lines.append("note: modal formulas are sound in the model; "
                     "validity here does not imply provability")
    if v.status == "inconclusive":
        lines.append(f"world guard: needed {v.guard['needed']}, "
                     f"budget {v.guard['limit']}")
        payload["guard"] = v.guard
    _emit(args, payload, "\n".join(lines))
    if args.dump:
        with open(args.dump, "w") as fh:
            fh.write(dump_model(state))
    return v.exit_code


def cmd_prob(args) -> int:
    try:
        with open(args.dist) as fh:
            dist = load_distribution(fh.read())
    except OSError as e:
        print(f"cannot read distribution: {e}", file=sys.stderr)
        return EXIT_USAGE
    except DistributionError as e:
        print(f"distribution error: {e}", file=sys.stderr)
        return EXIT_USAGE

    ctx = AtomContext(dist.names)
    f = _parse_formula(args, args.formula, ctx)
    try:
        if args.epsilon:
            value = epsilon_prob(dist, f, ctx if not dist.generalized else None,
                                 schedule=args.schedule, max_worlds=args.max_worlds)
            state = None
        else:
            from .probability import _fresh_state
            state = _fresh_state(dist, ctx if not dist.generalized else None,
                                 args.schedule, args.max_worlds)
            attach(state, dist)
            value = prob(state, f)
    except DegenerateDistribution as e:
        print(f"degenerate distribution: {e}", file=sys.stderr)
        return EXIT_DEGENERATE
    except GuardExceeded as g:
        _emit(args, {"verdict": "inconclusive", "witness": None, "values": None,
                     "worldCount": None,
                     "guard": {"needed": g.needed, "limit": g.limit}},
              f"inconclusive: world guard ({g.needed} > {g.limit})")
        return EXIT_GUARD
    _emit(args, {"verdict": None, "witness": None,
                 "values": {"prob": str(value)},
                 "worldCount": state.world_count if state else None},
          str(value))
    if args.dump and state is not None:
        with open(args.dump, "w") as fh:
            fh.write(dump_model(state))
    return EXIT_OK


def cmd_indep(args) -> int:
    from .formula import atoms_of
    probe = AtomContext(tuple(_ATOM_ALPHABET))
    try:
        psi_pre = parse(args.psi, probe)
        phi_pre = parse(args.phi, probe)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_USAGE
    ctx = _context_for(args, atoms_of(psi_pre) | atoms_of(phi_pre))
    psi = _parse_formula(args, args.psi, ctx)
    phi = _parse_formula(args, args.phi, ctx)
    state = _build_state(args, ctx)
    try:
        result = check_independence(state, psi, phi)
    except GuardExceeded as g:
        _emit(args, {"verdict": "inconclusive", "witness": None, "values": None,
                     "worldCount": state.world_count,
                     "guard": {"needed": g.needed, "limit": g.limit}},
              f"inconclusive: world guard ({g.needed} > {g.limit})")
        return EXIT_GUARD
    _emit(args, {"verdict": "independent" if result else "dependent",
                 "witness": None, "values": None,
                 "worldCount": state.world_count},
          f"{'independent' if result else 'dependent'}: "
          f"indep({render(psi)}, {render(phi)})")
    return EXIT_OK


def cmd_lewis(args) -> int:
    dist = None
    if args.dist:
        try:
            with open(args.dist) as fh:
                dist = load_distribution(fh.read())
        except (OSError, DistributionError) as e:
            print(f"distribution error: {e}", file=sys.stderr)
            return EXIT_USAGE
        if not dist.strictly_positive:
            print("degenerate distribution: the demonstration needs strictly "
                  "positive weights", file=sys.stderr)
            return EXIT_DEGENERATE
    report = lewis_demo(dist, max_worlds=args.max_worlds)
    payload = {
        "verdict": "gap-found" if report.ok else "no-gap",
        "witness": None,
        "values": None,
        "worldCount": None,
        "tested": report.tested,
        "witnesses": len(report.witnesses),
        "bayesChecked": report.bayes_checked,
        "bayesAllEqual": report.bayes_all_equal,
        "guardTrips": report.guard_trips,
    }
    lines = [f"triples tested: {report.tested}",
             f"triviality gaps found: {len(report.witnesses)}",
             f"inference identity verified on all tested triples: "
             f"{report.bayes_all_equal}"]
    if report.witnesses:
        w = report.witnesses[0]
        payload["witness"] = {"A": w.a, "B": w.b, "C": w.c,
                              "condOfCond": str(w.cond_of_cond),
                              "collapsed": str(w.collapsed)}
        payload["values"] = {"condOfCond": str(w.cond_of_cond),
                             "collapsed": str(w.collapsed)}
        lines.append(f"witness: A={w.a}  B={w.b}  C={w.c}")
        lines.append(f"  P((B|A) /\\ C)/P(C) = {w.cond_of_cond}")
        lines.append(f"  P(B | A /\\ C)     = {w.collapsed}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if report.ok else EXIT_REFUTED


def cmd_appendix_f(args) -> int:
    items = golden_report()
    ok = all(i.ok for i in items)
    payload = {"verdict": "pass" if ok else "fail",
               "witness": None, "values": None, "worldCount": 4,
               "items": [{"name": i.name, "expected": i.expected,
                          "got": i.got, "ok": i.ok} for i in items]}
    lines = [f"{'ok  ' if i.ok else 'FAIL'} {i.name}: {i.got}"
             + ("" if i.ok else f"  (expected {i.expected})") for i in items]
    lines.append(f"{sum(i.ok for i in items)}/{len(items)} values reproduced")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if ok else EXIT_REFUTED


def cmd_regress(args) -> int:
    t0 = time.time()
    atoms = args.atoms or 2
    checks = []
    peak = 0
    for i in range(args.runs):
        for schedule in ("query", "faithful"):
            rep = construction_suite(args.seed + i, atoms=atoms,
                                     schedule=schedule,
                                     max_worlds=min(args.max_worlds, 4000))
            peak = max(peak, rep.world_peak)
            for c in rep.failures():
                checks.append((f"{rep.scenario}: {c.name}", "fail", c.detail))
    checks.append(("construction invariants", "pass" if not checks else "fail",
                   f"{2 * args.runs} seeded runs"))

    ax = axiom_suite(max_depth=args.depth)
    peak = max(peak, ax.world_peak)
    for c in ax.checks:
        checks.append((c.name, c.status, c.detail))
    checks.append(_tuple(necessitation_check(args.depth)))
    checks.append(_tuple(uniqueness_check()))

    cl = classical_suite(args.seed, count=2000, atoms=min(atoms + 1, 3))
    for c in cl.checks:
        checks.append((c.name, c.status, c.detail))
    nd = nondistortion_suite(args.seed, dists=10)
    for c in nd.checks:
        checks.append((c.name, c.status, c.detail))
    pr = probability_suite(args.seed, dists=5)
    for c in pr.checks:
        checks.append((c.name, c.status, c.detail))

    failed = [c for c in checks if c[1] == "fail"]
    payload = {
        "verdict": "pass" if not failed else "fail",
        "witness": failed[0][0] if failed else None,
        "values": None,
        "worldCount": peak,
        "checks": [{"name": n, "status": s, "detail": d} for n, s, d in checks],
        "seed": args.seed,
    }
    lines = [f"{s:12} {n}" + (f"  [{d}]" if d else "") for n, s, d in checks]
    lines.append(f"world peak: {peak}   elapsed: {time.time() - t0:.1f}s")
    lines.append(f"result: {'pass' if not failed else 'fail'}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if not failed else EXIT_REFUTED


def _tuple(check):
    return (check.name, check.status, check.detail)


def cmd_dump(args) -> int:
    if args.dist:
        try:
            with open(args.dist) as fh:
                dist = load_distribution(fh.read())
        except (OSError, DistributionError) as e:
            print(f"distribution error: {e}", file=sys.stderr)
            return EXIT_USAGE
        from .probability import _fresh_state
        state = _fresh_state(dist, None, args.schedule, args.max_worlds)
        attach(state, dist)
        ctx = state.atoms
    else:
        ctx = AtomContext(tuple(_ATOM_ALPHABET[:args.atoms or 2]))
        state = _build_state(args, ctx)
    if args.formula:
        f = _parse_formula(args, args.formula, ctx)
        try:
            from .evaluator import evaluate
            evaluate(state, f)
        except GuardExceeded as g:
            print(f"inconclusive: world guard ({g.needed} > {g.limit})",
                  file=sys.stderr)
            return EXIT_GUARD
    try:
        text = dump_model(state)
    except DumpFormatError as e:
        print(f"dump error: {e}", file=sys.stderr)
        return EXIT_USAGE
    with open(args.path, "w") as fh:
        fh.write(text)
    print(f"wrote {args.path}: {state.world_count} worlds, "
          f"{len(state.steps)} steps")
    return EXIT_OK


def cmd_load(args) -> int:
    try:
        with open(args.path) as fh:
            state = load_model(fh.read())
    except OSError as e:
        print(f"cannot read dump: {e}", file=sys.stderr)
        return EXIT_USAGE
    except DumpFormatError as e:
        print(f"dump format error: {e}", file=sys.stderr)
        return EXIT_USAGE
    stats = state.stats()
    _emit(args, {"verdict": "loaded", "witness": None, "values": None,
                 "worldCount": stats["worldCount"], "stats": stats},
          "\n".join([f"stages: {stats['stages']}",
                     f"worlds: {stats['worldCount']}",
                     f"steps: {len(stats['steps'])}",
                     f"measure: {'attached' if state.masses else 'none'}"]))
    return EXIT_OK


def _add_common(p, *, dist=False, seed=False):
    p.add_argument("--atoms", type=int, default=None,
                   help="number of atoms (names p, q, r, ...)")
    p.add_argument("--schedule", choices=("query", "faithful"),
                   default="query", help="base-processing schedule")
    p.add_argument("--max-worlds", type=int, default=DEFAULT_MAX_WORLDS,
                   help="world guard for construction steps")
    p.add_argument("--json", action="store_true",
                   help="machine-readable report on stdout")
    if dist:
        p.add_argument("--dist", help="distribution file")
    if seed:
        p.add_argument("--seed", type=int, default=0)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="dmbl",
        description="Exact conditional-model engine for the logic DmBL*: "
                    "build the free model, check formulas, extend "
                    "probabilities, demonstrate triviality avoidance.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="evaluate a formula and report a verdict")
    p.add_argument("formula")
    p.add_argument("--dump", help="write the final model state to a file")
    _add_common(p)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("prob", help="exact probability of a formula")
    p.add_argument("formula")
    p.add_argument("--epsilon", action="store_true",
                   help="smoothed path for distributions with zero weights")
    p.add_argument("--dump", help="write the final model state to a file")
    _add_common(p, dist=True)
    p.set_defaults(fn=cmd_prob)

    p = sub.add_parser("indep", help="check logical independence of two formulas")
    p.add_argument("psi")
    p.add_argument("phi")
    _add_common(p)
    p.set_defaults(fn=cmd_indep)

    p = sub.add_parser("lewis-demo",
                       help="find an exact triviality-gap witness")
    _add_common(p, dist=True)
    p.set_defaults(fn=cmd_lewis)

    p = sub.add_parser("appendix-f",
                       help="reproduce the three-world golden construction")
    _add_common(p)
    p.set_defaults(fn=cmd_appendix_f)

    p = sub.add_parser("regress", help="run the full regression suites")
    p.add_argument("--depth", type=int, default=2,
                   help="conditional depth bound for instantiations")
    p.add_argument("--runs", type=int, default=3,
                   help="randomized construction runs per schedule")
    _add_common(p, seed=True)
    p.set_defaults(fn=cmd_regress)

    p = sub.add_parser("dump", help="build a model and write its dump")
    p.add_argument("path")
    p.add_argument("--formula", help="evaluate this formula before dumping")
    _add_common(p, dist=True)
    p.set_defaults(fn=cmd_dump)

    p = sub.add_parser("load", help="load a dump and print its statistics")
    p.add_argument("path")
    _add_common(p)
    p.set_defaults(fn=cmd_load)

    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except ModelUsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
