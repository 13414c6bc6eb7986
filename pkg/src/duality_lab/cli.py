"""Command-line front end.

Exit codes: 0 success / no violations, 1 violations or disagreements found,
2 usage error.
"""
from __future__ import annotations

import argparse
import contextlib
import sys

import numpy as np

from . import __version__
from .interferometer import load_detectors
from .montecarlo import Campaign, run_campaign
from .output import REPORT_COLUMNS, report_row, write_rows
from .qmat import ContractError
from .relations import RelationId, as_pure, eval_priors, evaluate
from .reproductions import AGREEMENT_TOL, FAMILIES, grid_points
from .states import load_state

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2

RELATION_NAMES = [r.value for r in RelationId]


class UsageError(Exception):
    pass


@contextlib.contextmanager
def _sink(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _parse_axis(text: str):
    """``name=value`` or ``name=start:stop:steps``."""
    if "=" not in text:
        raise UsageError(f"expected name=value or name=start:stop:steps, got {text!r}")
    name, spec = text.split("=", 1)
    parts = spec.split(":")
    try:
        if len(parts) == 1:
            return name.strip(), np.array([float(parts[0])])
        if len(parts) == 3:
            start, stop, steps = float(parts[0]), float(parts[1]), int(parts[2])
            if steps < 1:
                raise UsageError(f"grid for {name} must have at least one step")
            return name.strip(), np.linspace(start, stop, steps)
    except ValueError:
        pass
    raise UsageError(f"cannot parse grid spec {text!r}")


def cmd_check(args) -> int:
    relations = args.relation or ["th1"]
    all_rows = []
    violations = 0
    worst = {}
    for rel in relations:
        try:
            camp = Campaign(rel, args.n, args.memory_dim, args.trials, args.seed,
                            pure=args.pure, oracle=args.oracle)
        except ContractError as exc:
            raise UsageError(str(exc)) from None
        reports = run_campaign(camp, workers=args.workers)
        for t, rep in enumerate(reports):
            all_rows.append(report_row(rep, trial=t, seed=args.seed, memory_dim=camp.memory_dim))
        bad = sum(not r.satisfied for r in reports)
        violations += bad
        worst[rel] = (min(r.residual for r in reports), max(abs(r.residual) for r in reports), bad)
    with _sink(args.output) as fh:
        write_rows(all_rows, REPORT_COLUMNS, fh, args.format, command="check")
    for rel, (lo, hi, bad) in worst.items():
        print(f"{rel}: trials={args.trials} min_residual={lo:.3e} max_abs_residual={hi:.3e} "
              f"violations={bad}", file=sys.stderr)
    return EXIT_VIOLATION if violations else EXIT_OK


def _family_grid(fam, axes, sets):
    grid = dict(fam.default_grid)
    for text in list(axes or []) + list(sets or []):
        name, values = _parse_axis(text)
        if name not in fam.params:
            raise UsageError(f"unknown parameter {name!r} for {fam.name}; "
                             f"expected one of {', '.join(fam.params)}")
        grid[name] = values
    return grid


def cmd_example(args) -> int:
    fam = FAMILIES.get(args.name)
    if fam is None:
        raise UsageError(f"unknown example {args.name!r}; choose from {', '.join(FAMILIES)}")
    grid = _family_grid(fam, args.grid, None)
    rows = [fam.evaluate(pt) for pt in grid_points(fam, grid)]
    with _sink(args.output) as fh:
        write_rows(rows, fam.columns, fh, args.format, command="example", example=fam.name)
    worst = max(max(r[c] for c in fam.diff_columns) for r in rows)
    print(f"{fam.name}: points={len(rows)} max_disagreement={worst:.3e}", file=sys.stderr)
    return EXIT_OK if worst < AGREEMENT_TOL else EXIT_VIOLATION


def cmd_sweep(args) -> int:
    fam = FAMILIES.get(args.family)
    if fam is None:
        raise UsageError(f"unknown family {args.family!r}; choose from {', '.join(FAMILIES)}")
    grid = _family_grid(fam, args.grid, args.set)
    rows = [fam.evaluate(pt) for pt in grid_points(fam, grid)]
    with _sink(args.output) as fh:
        write_rows(rows, fam.columns, fh, args.format, command="sweep", family=fam.name)
    return EXIT_OK


def cmd_report(args) -> int:
    try:
        state = load_state(args.state)
        det = load_detectors(args.detectors)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot load inputs: {exc}") from None
    names = args.relation or RELATION_NAMES
    rows = []
    violations = 0
    for name in names:
        try:
            if name in ("eq1", "eq2"):
                rep = eval_priors(state, det, oracle=args.oracle)[name == "eq2"]
            elif name in ("limit-v", "limit-e"):
                pure = as_pure(state)
                if pure is None:
                    raise ContractError("limiting relations need a pure state")
                rep = evaluate(name, pure, det, oracle=args.oracle)
            else:
                rep = evaluate(name, state, det, oracle=args.oracle)
        except ContractError as exc:
            if args.relation:
                raise UsageError(f"{name}: {exc}") from None
            print(f"{name}: skipped ({exc})", file=sys.stderr)
            continue
        violations += not rep.satisfied
        rows.append(report_row(rep, trial=0, seed="", memory_dim=state.dim_b))
    with _sink(args.output) as fh:
        write_rows(rows, REPORT_COLUMNS, fh, args.format, command="report")
    return EXIT_VIOLATION if violations else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="duality-lab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"duality-lab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--output", "-o", default=None, help="file path (default stdout)")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")

    c = sub.add_parser("check", help="Monte Carlo verification over random inputs")
    c.add_argument("--relation", action="append", choices=RELATION_NAMES)
    c.add_argument("--n", type=int, default=2)
    c.add_argument("--memory-dim", type=int, default=2)
    c.add_argument("--trials", type=int, default=1000)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--pure", action="store_true", help="sample pure inputs only")
    c.add_argument("--oracle", action="store_true",
                   help="use the numerically optimized success probability")
    c.add_argument("--workers", type=int, default=None,
                   help="process count (default: DUALITY_LAB_THREADS or CPU count)")
    common(c)
    c.set_defaults(func=cmd_check)

    e = sub.add_parser("example", help="closed forms vs pipeline for a worked example")
    e.add_argument("name", help=", ".join(FAMILIES))
    e.add_argument("--grid", action="append", help="override an axis, name=start:stop:steps")
    common(e)
    e.set_defaults(func=cmd_example)

    s = sub.add_parser("sweep", help="parameter grid over an example family")
    s.add_argument("family", help=", ".join(FAMILIES))
    s.add_argument("--grid", action="append", help="name=start:stop:steps")
    s.add_argument("--set", action="append", help="fix a parameter, name=value")
    common(s)
    s.set_defaults(func=cmd_sweep)

    r = sub.add_parser("report", help="evaluate relations for a state and detector JSON pair")
    r.add_argument("--state", required=True)
    r.add_argument("--detectors", required=True)
    r.add_argument("--relation", action="append", choices=RELATION_NAMES)
    r.add_argument("--oracle", action="store_true")
    common(r)
    r.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "trials", 1) < 1:
        parser.error("--trials must be >= 1")
    if getattr(args, "n", 2) < 2:
        parser.error("--n must be >= 2")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"duality-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
