"""Command-line front end.

Subcommands: check, eval, reduct, lfp, stable verify, stable search,
transform, equiv.  Inputs are .malp program files and interpretation
JSON objects {atom: number}; reports go to stdout as JSON (default) or
aligned tables, diagnostics to stderr.  Exit codes: 0 success, 1
input or validation error, 2 enumeration budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .lattice import DEFAULT_TOL, eval_implication, lattice_grid
from .parser import parse_program, serialize_program
from .program import (
    MalpError,
    Program,
    ProgramClass,
    eval_body,
    polarity_of,
    validate_program,
)
from .semantics import (
    DEFAULT_MAX_ITER,
    FixpointTrace,
    StableSearchConfig,
    find_stable_models,
    is_model,
    is_stable,
    least_model,
    reduct,
    require_total,
    satisfies,
    stable_operator,
)
from .transform import (
    BudgetExceeded,
    check_continuity,
    eliminate_constraints_fc,
    eliminate_constraints_janssen,
    record_from_json,
    to_manlp,
    verify_equivalence,
)


def _emit(data: dict, output: str) -> None:
    if output == "json":
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        for line in _as_table(data):
            print(line)


def _as_table(data: dict, prefix: str = "") -> list[str]:
    lines = []
    for key, value in data.items():
        if isinstance(value, dict):
            lines.append(f"{prefix}{key}:")
            lines.extend(_as_table(value, prefix + "  "))
        elif isinstance(value, list):
            lines.append(f"{prefix}{key}: {json.dumps(value)}")
        else:
            lines.append(f"{prefix}{key}: {value}")
    return lines


def _trace_table(atoms: tuple[str, ...], trace: FixpointTrace) -> list[str]:
    width = max([len(a) for a in atoms] + [10])
    header = " " * 8 + "".join(a.rjust(width + 2) for a in atoms)
    lines = [header]
    for k, row in enumerate(trace.iterates):
        label = "I_bot" if k == 0 else f"T^{k}"
        cells = "".join(f"{row[a]:.6g}".rjust(width + 2) for a in atoms)
        lines.append(label.ljust(8) + cells)
    lines.append(f"converged: {trace.converged} after {trace.iterations} iterations")
    return lines


def _load_program(path: str, allow_repeats: bool) -> Program:
    return parse_program(Path(path).read_text(encoding="utf-8"), allow_repeats=allow_repeats)


def _load_interpretation(path: str, program: Program) -> dict[str, float]:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(data, dict):
        raise MalpError("interpretation file must hold a JSON object {atom: number}")
    I = {k: float(v) for k, v in data.items()}
    require_total(I, program)
    return I


def _interp_json(I: dict[str, float]) -> dict:
    return {k: I[k] for k in sorted(I)}


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER)
    p.add_argument("--output", choices=("json", "table"), default="json")
    p.add_argument("--allow-repeats", action="store_true",
                   help="accept duplicate same-polarity body atoms")


def cmd_check(args) -> int:
    program = parse_program(Path(args.file).read_text(encoding="utf-8"),
                            allow_repeats=args.allow_repeats, validate=False)
    report = validate_program(program, allow_repeats=args.allow_repeats, tol=args.tol)
    if not report.ok:
        for issue in report.issues:
            print(str(issue), file=sys.stderr)
    continuity = check_continuity(program)
    polarity = [
        {atom: pol.value for atom, pol in sorted(polarity_of(r.body).items())}
        for r in program.rules
    ]
    _emit({
        "valid": report.ok,
        "class": report.program_class.value,
        "atoms": list(program.atoms()),
        "rules": len(program.rules),
        "polarity": polarity,
        "continuity": continuity.to_json(),
        "errors": [str(i) for i in report.issues],
    }, args.output)
    return 0 if report.ok else 1


def cmd_eval(args) -> int:
    program = _load_program(args.file, args.allow_repeats)
    I = _load_interpretation(args.interpretation, program)
    rows = []
    for idx, rule in enumerate(program.rules):
        body_value = eval_body(rule.body, I, args.tol)
        head_value = rule.head.value if rule.is_constraint else I[rule.head.name]
        rows.append({
            "rule": idx,
            "body": body_value,
            "implication": eval_implication(rule.impl, head_value, body_value),
            "satisfied": satisfies(I, rule, args.tol),
        })
    _emit({"model": is_model(I, program, args.tol), "rules": rows}, args.output)
    return 0


def cmd_reduct(args) -> int:
    program = _load_program(args.file, args.allow_repeats)
    I = _load_interpretation(args.interpretation, program)
    text = serialize_program(reduct(program, I, args.tol))
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(json.dumps({"written": args.out, "rules": len(program.rules)}))
    else:
        sys.stdout.write(text)
    return 0


def cmd_lfp(args) -> int:
    program = _load_program(args.file, args.allow_repeats)
    if program.classify() is not ProgramClass.POSITIVE:
        print("note: program is not positive; the fixpoint is not guaranteed "
              "to be a least model", file=sys.stderr)
    value, trace = least_model(program, args.tol, args.max_iter)
    if args.output == "table":
        for line in _trace_table(program.atoms(), trace):
            print(line)
    else:
        _emit({"least_model": _interp_json(value), "trace": trace.to_json()}, "json")
    return 0


def cmd_stable_verify(args) -> int:
    program = _load_program(args.file, args.allow_repeats)
    I = _load_interpretation(args.interpretation, program)
    verdict = is_stable(program, I, args.tol, args.max_iter)
    _, trace = stable_operator(program, I, args.tol, args.max_iter)
    result = {True: True, False: False, None: "indeterminate"}[verdict]
    if args.output == "table":
        print(f"stable: {result}")
        for line in _trace_table(program.atoms(), trace):
            print(line)
    else:
        _emit({"stable": result, "trace": trace.to_json()}, "json")
    return 0


def cmd_stable_search(args) -> int:
    program = _load_program(args.file, args.allow_repeats)
    if args.grid is not None:
        points = len(lattice_grid(args.grid)) ** len(program.atoms())
        if points > args.budget:
            raise BudgetExceeded(f"{points} grid points exceed the budget of {args.budget}")
    cfg = StableSearchConfig(
        mode="grid" if args.grid is not None else "iterate",
        grid_step=args.grid if args.grid is not None else 0.5,
        seeds=args.seeds,
        tol=args.tol,
        max_iter=args.max_iter,
        rng_seed=args.rng_seed,
    )
    models = find_stable_models(program, cfg)
    _emit({
        "mode": cfg.mode,
        "count": len(models),
        "stable_models": [_interp_json(m) for m in models],
    }, args.output)
    return 0


_TRANSFORMS = {
    "fc": eliminate_constraints_fc,
    "janssen": eliminate_constraints_janssen,
}


def cmd_transform(args) -> int:
    program = _load_program(args.file, args.allow_repeats)
    if args.method == "manlp":
        rec = to_manlp(program, args.neg)
    else:
        rec = _TRANSFORMS[args.method](program, args.impl, args.conj, args.neg)
    stem = Path(args.file).with_suffix("")
    out_path = Path(args.out) if args.out else Path(f"{stem}.{args.method}.malp")
    rec_path = Path(args.record) if args.record else Path(f"{stem}.{args.method}.record.json")
    out_path.write_text(serialize_program(rec.target), encoding="utf-8")
    rec_path.write_text(json.dumps(rec.to_json(), indent=2, sort_keys=True) + "\n",
                        encoding="utf-8")
    _emit({
        "method": args.method,
        "source_rules": len(rec.source.rules),
        "target_rules": len(rec.target.rules),
        "target_class": rec.target.classify().value,
        "fresh_atoms": [a.to_json() for a in rec.fresh_atoms],
        "target_file": str(out_path),
        "record_file": str(rec_path),
    }, args.output)
    return 0


def cmd_equiv(args) -> int:
    source = _load_program(args.source, args.allow_repeats)
    target = _load_program(args.target, args.allow_repeats)
    data = json.loads(Path(args.record).read_text(encoding="utf-8"))
    rec = record_from_json(data, source, target)
    report = verify_equivalence(source, rec, args.grid, args.tol,
                                max_points=args.budget, max_iter=args.max_iter)
    _emit(report.to_json(), args.output)
    return 0


class _ArgumentParser(argparse.ArgumentParser):
    # usage problems are input errors (exit 1); 2 is reserved for budgets
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="emalp",
        description="Weighted rule programs on [0, 1]: parsing, stable models, transformations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="parse, validate, classify, and report continuity")
    p.add_argument("file")
    _add_common(p)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("eval", help="check whether an interpretation is a model")
    p.add_argument("file")
    p.add_argument("-i", "--interpretation", required=True)
    _add_common(p)
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("reduct", help="emit the reduct with respect to an interpretation")
    p.add_argument("file")
    p.add_argument("-i", "--interpretation", required=True)
    p.add_argument("-o", "--out")
    _add_common(p)
    p.set_defaults(fn=cmd_reduct)

    p = sub.add_parser("lfp", help="least model of a positive program, with trace")
    p.add_argument("file")
    _add_common(p)
    p.set_defaults(fn=cmd_lfp)

    p = sub.add_parser("stable", help="verify or search for stable models")
    stable_sub = p.add_subparsers(dest="subcommand", required=True)
    v = stable_sub.add_parser("verify")
    v.add_argument("file")
    v.add_argument("-i", "--interpretation", required=True)
    _add_common(v)
    v.set_defaults(fn=cmd_stable_verify)
    s = stable_sub.add_parser("search")
    s.add_argument("file")
    s.add_argument("--grid", type=float, default=None, help="grid step for exhaustive search")
    s.add_argument("--seeds", type=int, default=16)
    s.add_argument("--rng-seed", type=int, default=0)
    s.add_argument("--budget", type=int, default=2_000_000)
    _add_common(s)
    s.set_defaults(fn=cmd_stable_search)

    p = sub.add_parser("transform", help="rewrite a program, writing target and record")
    p.add_argument("file")
    p.add_argument("--method", choices=("fc", "janssen", "manlp"), required=True)
    p.add_argument("--impl", choices=("godel", "product", "lukasiewicz"), default="lukasiewicz")
    p.add_argument("--conj", choices=("godel", "product", "lukasiewicz"), default="godel")
    p.add_argument("--neg", choices=("neg1", "neg2"), default="neg1")
    p.add_argument("-o", "--out")
    p.add_argument("--record")
    _add_common(p)
    p.set_defaults(fn=cmd_transform)

    p = sub.add_parser("equiv", help="grid-exhaustive stable-model equivalence check")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--record", required=True)
    p.add_argument("--grid", type=float, required=True)
    p.add_argument("--budget", type=int, default=2_000_000)
    _add_common(p)
    p.set_defaults(fn=cmd_equiv)

    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # --help, or a usage error routed to exit 1
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except BudgetExceeded as exc:
        print(str(exc), file=sys.stderr)
        return 2
    except (MalpError, OSError, json.JSONDecodeError) as exc:
        print(str(exc), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
