"""Command-line interface: inference, explanations, reference tables,
and self-tests."""
from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional, Sequence

from .lattice import MAX_FINITE_DEFAULT, RankInterval, RankKind
from . import catalog as _catalog
from . import dsl
from . import engine as _engine
from . import model as _model
from . import oracle as _oracle
from . import rules as _rules
from . import topology


def _status(interval: RankInterval) -> str:
    if interval.is_exact:
        return "exact"
    if interval.is_top:
        return "unknown"
    return "bounded"


def _rank_cell(interval: RankInterval) -> str:
    return f"{interval.lo} {interval.hi} {_status(interval)}"


def _render_row(algebra: str, state: _engine.RankState) -> str:
    cells = " | ".join(
        f"{kind.value} {_rank_cell(state.interval(algebra, kind))}"
        for kind in RankKind)
    return f"{algebra}: {cells}"


def _json_document(model: _model.Model, state: _engine.RankState,
                   shown: Sequence[str], diagnostics: Sequence[str],
                   include_trace: bool) -> dict:
    algebras = []
    for name in shown:
        ranks = {}
        for kind in RankKind:
            interval = state.interval(name, kind)
            ranks[kind.value] = {
                "lo": interval.lo.to_json(),
                "hi": interval.hi.to_json(),
                "status": _status(interval),
            }
        flags = {
            flag: state.flags.get((name, flag))
            for flag in dsl.FLAG_NAMES
        }
        algebras.append({"id": name, "ranks": ranks, "flags": flags})
    return {
        "algebras": algebras,
        "trace": [step.to_json() for step in state.trace] if include_trace else [],
        "diagnostics": list(diagnostics),
    }


def _load(path: str) -> _model.Model:
    with open(path, "r", encoding="utf-8") as handle:
        text = handle.read()
    return _model.build_model(dsl.parse(text))


def _visible_algebras(model: _model.Model) -> List[str]:
    shown = list(model.queries)
    if not shown:
        shown = [name for name in model.algebra_order
                 if not model.algebras[name].generated]
    return shown


def _print_contradiction(conflict: _engine.Contradiction, out) -> None:
    print(f"CONTRADICTION: {conflict}", file=out)
    print("minimal trace slice:", file=out)
    for step in conflict.slice_steps:
        print(f"  {step.describe()}", file=out)


def cmd_infer(args) -> int:
    try:
        model = _load(args.path)
    except (OSError, dsl.ParseError, _model.ModelError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    diagnostics = [str(d) for d in _model.validate(model)]
    constraints = _rules.instantiate_rules(model)
    try:
        state = _engine.propagate(constraints, model, cap=args.max_finite)
    except _engine.Contradiction as conflict:
        _print_contradiction(conflict, sys.stderr)
        return 2
    shown = _visible_algebras(model)
    reports = _engine.check_assertions(model, state)
    failed = [r for r in reports if r.status == "FAIL"]

    if args.json:
        doc = _json_document(model, state, shown, diagnostics, args.trace)
        doc["assertions"] = [r.describe() for r in reports]
        print(json.dumps(doc, indent=2))
    else:
        for name in shown:
            print(_render_row(name, state))
        for report in reports:
            print(report.describe())
        for diagnostic in diagnostics:
            print(diagnostic, file=sys.stderr)
        if args.trace:
            print("trace:")
            for step in state.trace:
                print(f"  {step.describe()}")

    if failed:
        # replay with the failed assertion as a constraint to obtain a
        # minimal contradictory trace slice
        for report in failed:
            extra = _rules.assertion_constraint(
                report.algebra, report.rank, report.relation, report.value)
            try:
                _engine.propagate(list(constraints) + [extra], model,
                                  cap=args.max_finite)
            except _engine.Contradiction as conflict:
                _print_contradiction(conflict, sys.stderr)
        return 2
    return 0


def cmd_explain(args) -> int:
    try:
        model = _load(args.path)
    except (OSError, dsl.ParseError, _model.ModelError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        rank = RankKind(args.rank)
    except ValueError:
        print(f"error: unknown rank {args.rank!r}", file=sys.stderr)
        return 1
    if args.algebra not in model.algebras:
        print(f"error: unknown algebra {args.algebra!r}", file=sys.stderr)
        return 1
    constraints = _rules.instantiate_rules(model)
    try:
        state = _engine.propagate(constraints, model, cap=args.max_finite)
    except _engine.Contradiction as conflict:
        _print_contradiction(conflict, sys.stderr)
        return 2
    interval = state.interval(args.algebra, rank)
    print(f"{rank.value}({args.algebra}) = {interval}")
    for side in ("lo", "hi"):
        print(f"{side} bound:")
        try:
            tree = _engine.explain(state, model, args.algebra, rank, side)
        except _engine.NoDerivation as exc:
            print(f"  {exc}")
        else:
            print(tree.render(indent=2))
    return 0


def _parse_range(text: str):
    parts = text.split("..")
    if len(parts) != 2:
        raise ValueError(f"malformed range {text!r}; expected A..B")
    lo, hi = int(parts[0]), int(parts[1])
    if lo < 1 or hi < lo:
        raise ValueError(f"malformed range {text!r}")
    return lo, hi


def cmd_catalog(args) -> int:
    did_something = False
    if args.spheres:
        try:
            lo, hi = _parse_range(args.spheres)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        print("d csr gsr")
        for d in range(lo, hi + 1):
            print(f"{d} {topology.csr_sphere(d)} "
                  f"{topology.gsr_sphere_via_table(d)}")
        did_something = True
    if args.rules:
        for desc in _rules.rule_catalog():
            print(f"{desc.rule_id}: {desc.statement}  [{desc.citation}]  "
                  f"(applies to: {desc.applicability})")
        did_something = True
    if args.named:
        for line in named_catalog_lines():
            print(line)
        did_something = True
    if not did_something:
        print("error: choose one of --spheres A..B, --rules, --named",
              file=sys.stderr)
        return 1
    return 0


def named_catalog_lines() -> List[str]:
    """One summary block per built-in algebra: computed ranks + citations."""
    lines: List[str] = []
    for name, arg in _catalog.DISPLAY_ENTRIES:
        suffix = f"({arg})" if arg is not None else ""
        text = f"algebra {name} = {name}{suffix}\n"
        model = _model.build_model(dsl.parse(text))
        constraints = _rules.instantiate_rules(model)
        state = _engine.propagate(constraints, model)
        cells = []
        for kind in RankKind:
            interval = state.interval(name, kind)
            if interval.is_exact:
                cells.append(f"{kind.value}={interval.lo}")
            else:
                cells.append(f"{kind.value}={interval.lo}..{interval.hi}")
        label = f"{name}{suffix}"
        lines.append(f"{label}: {' '.join(cells)}")
        for assumption in model.assumptions:
            if assumption.origin == "catalog":
                lines.append(f"    {assumption.rank.value}"
                             f"({assumption.algebra}) {assumption.relation} "
                             f"{assumption.value}  [{assumption.citation}]")
        for (algebra, flag), note in sorted(model.flag_notes.items()):
            lines.append(f"    {flag}({algebra})  [{note}]")
    return lines


def cmd_selftest(args) -> int:
    ok = True

    report = _oracle.sphere_crosscheck(200)
    print(report.describe())
    ok = ok and report.passed

    import math
    winding_ok = True
    n = 1024
    for k in range(-3, 4):
        samples = [complex(math.cos(2 * math.pi * k * t / n),
                           math.sin(2 * math.pi * k * t / n))
                   for t in range(n)]
        if _oracle.winding_number(samples) != k:
            winding_ok = False
    print(f"winding witness for degrees -3..3: "
          f"{'PASS' if winding_ok else 'FAIL'}")
    ok = ok and winding_ok

    fixed_models = (
        "algebra T = toeplitz\n",
        "algebra T2 = toeplitz_n(2)\n",
        "algebra O2 = cuntz(2)\n",
        "algebra Oinf = cuntz_inf\n",
    )
    sound_ok = True
    for text in fixed_models:
        model = _model.build_model(dsl.parse(text))
        result = _oracle.soundness_check(model, cap=4)
        if not result.passed:
            sound_ok = False
        print(f"{text.split()[1]}: {result.describe()}")
    for seed in range(args.seed, args.seed + 25):
        model = _oracle.random_model(seed)
        result = _oracle.soundness_check(model, cap=5)
        if not result.passed:
            sound_ok = False
            print(f"seed {seed}: {result.describe()}")
    print(f"random-model soundness: {'PASS' if sound_ok else 'FAIL'}")
    ok = ok and sound_ok

    print(f"selftest: {'PASS' if ok else 'FAIL'}")
    return 0 if ok else 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stablerank",
        description="Compositional bounds for the four stable ranks of "
                    "Banach and C*-algebras, with proof traces.")
    sub = parser.add_subparsers(dest="command", required=True)

    infer = sub.add_parser("infer", help="run inference on a .bra file")
    infer.add_argument("path")
    infer.add_argument("--json", action="store_true")
    infer.add_argument("--trace", action="store_true")
    infer.add_argument("--max-finite", type=int, default=MAX_FINITE_DEFAULT)
    infer.set_defaults(func=cmd_infer)

    explain = sub.add_parser("explain", help="explain a computed bound")
    explain.add_argument("path")
    explain.add_argument("algebra")
    explain.add_argument("rank", help="bsr | tsr | csr | gsr")
    explain.add_argument("--max-finite", type=int, default=MAX_FINITE_DEFAULT)
    explain.set_defaults(func=cmd_explain)

    cat = sub.add_parser("catalog", help="print reference tables")
    cat.add_argument("--spheres", metavar="A..B")
    cat.add_argument("--rules", action="store_true")
    cat.add_argument("--named", action="store_true")
    cat.set_defaults(func=cmd_catalog)

    selftest = sub.add_parser("selftest", help="run the oracle self-tests")
    selftest.add_argument("--seed", type=int, default=0)
    selftest.set_defaults(func=cmd_selftest)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
