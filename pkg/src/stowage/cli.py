"""Command-line front end: ``stowage gen|solve|bench|render|oracle``.

Exit codes: 0 ok, 1 some bench rows failed, 2 usage or validation error,
3 infeasible instance, 4 exact oracle size guard exceeded.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
import typing
from pathlib import Path

from . import bench, instances, oracle, render
from .heuristics import ALGORITHMS, ITERATION_FIELD, PARAM_TYPES, solve
from .model import InfeasibleInstanceError, InstanceError, MalformedSolutionError

EXIT_OK, EXIT_ROWS_FAILED, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_GUARD = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


def _coerce(annotation, raw: str):
    args = typing.get_args(annotation) or (annotation,)
    if raw.lower() == "none" and type(None) in args:
        return None
    for kind in (int, float):
        if kind in args:
            try:
                return kind(raw)
            except ValueError:
                continue
    raise UsageError(f"cannot read {raw!r} as {annotation}")


def build_params(algorithm: str, pairs: list[str], iterations: int | None):
    """Build the parameter record for ``algorithm`` from ``key=value`` pairs.

    A key may be prefixed ``<alg>.`` to target one algorithm; unprefixed keys
    apply to every algorithm that has the field and are ignored otherwise.
    """
    cls = PARAM_TYPES[algorithm]
    hints = typing.get_type_hints(cls)
    fields = {f.name for f in dataclasses.fields(cls)}
    values = {}
    for pair in pairs:
        key, sep, raw = pair.partition("=")
        if not sep:
            raise UsageError(f"--param expects key=value, got {pair!r}")
        target, dot, name = key.partition(".")
        if dot:
            if target not in PARAM_TYPES:
                raise UsageError(f"unknown algorithm prefix {target!r} in {pair!r}")
            if target != algorithm:
                continue
        else:
            name = key
            if name not in fields and not any(
                name in {f.name for f in dataclasses.fields(c)} for c in PARAM_TYPES.values()
            ):
                raise UsageError(f"unknown parameter {name!r}")
        if name not in fields:
            if dot:
                raise UsageError(f"{algorithm} has no parameter {name!r}")
            continue
        values[name] = _coerce(hints[name], raw)
    if iterations is not None:
        values[ITERATION_FIELD[algorithm]] = iterations
    try:
        return cls(**values)
    except ValueError as exc:
        raise UsageError(f"{algorithm} parameters: {exc}") from exc


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    p.add_argument("--iterations", type=int, default=None, help="main-loop iterations (N or lambda)")
    p.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                   help="algorithm parameter, optionally prefixed alg., e.g. sa.divisor_M=3")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stowage", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate an instance file")
    g.add_argument("--spec", help="JSON file of InstanceSpec fields")
    g.add_argument("--seed", type=int, default=None)
    g.add_argument("--rows", type=int)
    g.add_argument("--cols", type=int)
    g.add_argument("--decks", type=int)
    g.add_argument("--unusable", type=float, dest="unusable_fraction")
    g.add_argument("--cargos", type=int, dest="cargo_count")
    g.add_argument("--categories", help="comma-separated category labels")
    g.add_argument("--weights", help="weight range LOW,HIGH")
    g.add_argument("--limit-factor", type=float, dest="deck_limit_factor")
    g.add_argument("-T", type=int, dest="base_time")
    g.add_argument("-Q", type=int, dest="penalty")
    g.add_argument("--name")
    g.add_argument("--out", required=True)

    s = sub.add_parser("solve", help="run one algorithm on an instance")
    s.add_argument("instance")
    s.add_argument("algorithm", choices=sorted(ALGORITHMS))
    _common(s)
    s.add_argument("--out", help="trace CSV path (iteration,best_value)")
    s.add_argument("--solution-out", help="write the best solution as JSON")

    b = sub.add_parser("bench", help="run the benchmark protocol")
    b.add_argument("--suite", default="builtin", help="'builtin', a directory or an instance file")
    b.add_argument("--algorithms", default=",".join(ALGORITHMS))
    b.add_argument("--seeds", default="0", help="comma-separated seeds")
    b.add_argument("--iterations", type=int, default=None)
    b.add_argument("--param", action="append", default=[], metavar="KEY=VALUE")
    b.add_argument("--format", choices=("csv", "table"), default="table")
    b.add_argument("--out", help="CSV report path")
    b.add_argument("--timing", action="store_true", help="add a wall_time column to the CSV")

    r = sub.add_parser("render", help="draw deck grids as PPM (and SVG)")
    r.add_argument("instance")
    r.add_argument("solution", nargs="?")
    r.add_argument("--out", required=True, help="output prefix; writes <prefix>_deck<p>.ppm")
    r.add_argument("--scale", type=int, default=16)
    r.add_argument("--svg", action="store_true")

    o = sub.add_parser("oracle", help="assignment bound and exact optimum")
    o.add_argument("instance", help="instance file, directory, or 'builtin'")
    o.add_argument("--bound-only", action="store_true")
    o.add_argument("--lp-out", help="also export the model in LP format (single instance)")
    return parser


def cmd_gen(args) -> int:
    fields = {}
    if args.spec:
        import json

        fields.update(json.loads(Path(args.spec).read_text(encoding="utf-8")))
    for name in ("seed", "rows", "cols", "decks", "unusable_fraction", "cargo_count",
                 "deck_limit_factor", "base_time", "penalty", "name"):
        value = getattr(args, name)
        if value is not None:
            fields[name] = value
    if args.categories:
        fields["categories"] = tuple(c for c in args.categories.split(",") if c)
    if args.weights:
        try:
            lo, hi = (int(v) for v in args.weights.split(","))
        except ValueError as exc:
            raise UsageError("--weights expects LOW,HIGH") from exc
        fields["weight_range"] = (lo, hi)
    try:
        spec = instances.InstanceSpec(**fields)
    except TypeError as exc:
        raise UsageError(f"bad spec: {exc}") from exc
    try:
        inst = instances.generate_instance(spec)
    except InfeasibleInstanceError as exc:
        raise UsageError(str(exc)) from exc
    instances.save_instance(inst, args.out)
    print(f"wrote {args.out}: k={inst.k} usable_cells={inst.problem_size} decks={len(inst.decks)}")
    return EXIT_OK


def cmd_solve(args) -> int:
    inst = instances.load_instance(args.instance)
    params = build_params(args.algorithm, args.param, args.iterations)
    trace = solve(inst, args.algorithm, params, seed=args.seed)
    if args.out:
        Path(args.out).write_text(trace.to_csv(), encoding="utf-8")
    if args.solution_out:
        Path(args.solution_out).write_text(
            instances.serialize_solution(trace.best_solution, inst.name), encoding="utf-8"
        )
    print(f"{args.algorithm} best {trace.best_value} (initial {trace.initial}, {trace.iterations} iterations)")
    return EXIT_OK


def _split(text: str, kind=str) -> list:
    try:
        return [kind(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"cannot parse list {text!r}") from exc


def cmd_bench(args) -> int:
    algorithms = _split(args.algorithms)
    unknown = [a for a in algorithms if a not in ALGORITHMS]
    if unknown:
        raise UsageError(f"unknown algorithms {unknown}")
    seeds = _split(args.seeds, int)
    suite = instances.resolve_suite(args.suite)
    params = {a: build_params(a, args.param, args.iterations) for a in algorithms}
    report = bench.run_bench(suite, algorithms, seeds, params)
    csv_text = report.to_csv(timing=args.timing)
    if args.out:
        Path(args.out).write_text(csv_text, encoding="utf-8")
    sys.stdout.write(csv_text if args.format == "csv" else report.to_table())
    for row in report.failed:
        print(f"row failed: {row.instance}/{row.algorithm}/{row.seed}: {row.error}", file=sys.stderr)
    return EXIT_ROWS_FAILED if report.failed else EXIT_OK


def cmd_render(args) -> int:
    inst = instances.load_instance(args.instance)
    solution = None
    if args.solution:
        solution = instances.parse_solution(Path(args.solution).read_text(encoding="utf-8"))
    for path in render.render(inst, args.out, solution, args.scale, args.svg):
        print(f"wrote {path}")
    return EXIT_OK


def cmd_oracle(args) -> int:
    suite = instances.resolve_suite(args.instance)
    status = EXIT_OK
    for inst in suite:
        name = inst.name or "unnamed"
        bound = oracle.assignment_lower_bound(inst)
        print(f"{name} bound {bound}")
        if not args.bound_only:
            try:
                result = oracle.brute_force_optimal(inst)
            except oracle.OracleGuardError as exc:
                print(f"{name}: {exc}", file=sys.stderr)
                status = EXIT_GUARD
                continue
            print(f"{name} optimum {result.optimal_value} (nodes {result.nodes_explored})")
    if args.lp_out:
        if len(suite) != 1:
            raise UsageError("--lp-out needs a single instance")
        Path(args.lp_out).write_text(oracle.to_lp(suite[0]), encoding="utf-8")
    return status


COMMANDS = {
    "gen": cmd_gen,
    "solve": cmd_solve,
    "bench": cmd_bench,
    "render": cmd_render,
    "oracle": cmd_oracle,
}


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, InstanceError, MalformedSolutionError, OSError) as exc:
        print(f"stowage {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InfeasibleInstanceError as exc:
        print(f"stowage {args.command}: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
