"""Command-line front end.

Exit codes: 0 success, 1 failed check, 2 invalid scenario, 3 physics-domain
error, 4 solver non-convergence.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .checks import BUILTINS, Verdict, evaluate_check
from .config import ScenarioError, find_preset, load, preset_dir, preset_paths
from .dynamics.quantum import CutoffError
from .gpe import GpeConvergenceError
from .physcore import DomainError
from .runner import run_scenario, sweep_scenario, write_all

EXIT_OK, EXIT_CHECK, EXIT_SCHEMA, EXIT_DOMAIN, EXIT_SOLVER = 0, 1, 2, 3, 4


def _parse_grid(text: str) -> dict:
    """``start:stop:num[:log]`` or a comma-separated value list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) not in (3, 4):
            raise ScenarioError(f"bad grid {text!r}; use start:stop:num[:log]")
        try:
            start, stop, num = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError:
            raise ScenarioError(f"bad grid {text!r}") from None
        if num < 1:
            raise ScenarioError("grid must contain at least one point")
        return {"start": start, "stop": stop, "num": num,
                "spacing": parts[3] if len(parts) == 4 else "linear"}
    values = [v for v in text.split(",") if v.strip()]
    if not values:
        raise ScenarioError("grid must contain at least one point")
    try:
        return {"values": [float(v) for v in values]}
    except ValueError:
        raise ScenarioError(f"bad grid {text!r}") from None


def _formats(args, scenario) -> list[str]:
    if args.format:
        return [args.format]
    return list(scenario.data.get("output", {}).get("formats", ["csv"]))


def cmd_run(args) -> int:
    sc = load(find_preset(args.scenario))
    report = run_scenario(sc)
    files: dict[str, str] = {}
    for fmt in _formats(args, sc):
        if fmt == "json":
            files[f"{sc.name}.json"] = report.to_json()
        else:
            files.update(report.csv_files(sc.name))
    for p in write_all(files, Path(args.output_dir)):
        print(f"wrote {p}")
    for v in report.verdicts:
        print(v.line())
    return EXIT_OK if report.passed else EXIT_CHECK


def cmd_sweep(args) -> int:
    sc = load(find_preset(args.scenario))
    sweeps = None
    if args.axis:
        if len(args.grid or []) != len(args.axis):
            raise ScenarioError("give one --grid per --axis")
        sweeps = [{"axis": a, "grid": _parse_grid(g)} for a, g in zip(args.axis, args.grid)]
        data = dict(sc.data)
        data["sweep"] = sweeps
        from .config import validate

        validate(data)
    table = sweep_scenario(sc, sweeps, jobs=args.jobs)
    files = {}
    for fmt in _formats(args, sc):
        files[f"{sc.name}.sweep.{fmt}"] = table.to_json() if fmt == "json" else table.to_csv()
    for p in write_all(files, Path(args.output_dir)):
        print(f"wrote {p}")
    print(f"{len(table.rows)} points, {table.failed} failed")
    return EXIT_OK


def _preset_checks(directory: Optional[Path]) -> list[tuple[Path, dict]]:
    out = []
    for p in preset_paths(directory):
        sc = load(p)
        out.extend((p, c) for c in sc.checks)
    return out


def cmd_paper_check(args) -> int:
    directory = Path(args.preset_dir) if args.preset_dir else None
    if args.list:
        for p, c in _preset_checks(directory):
            slow = " (slow)" if c.get("slow") else ""
            print(f"{c['id']}\t{p.name}{slow}")
        for b in BUILTINS:
            print(f"{b.id}\tbuiltin{' (slow)' if b.slow else ''}")
        return EXIT_OK
    verdicts: list[Verdict] = []
    for p in preset_paths(directory):
        sc = load(p)
        checks = [c for c in sc.checks if args.all or not c.get("slow")]
        if not checks:
            continue
        try:
            report = run_scenario(sc)
            verdicts.extend(evaluate_check(c, report.quantities, p.name) for c in checks)
        except (DomainError, RuntimeError, ArithmeticError) as exc:
            for c in checks:
                verdicts.append(Verdict(c["id"], p.name, c["quantity"], c["target"], None,
                                        c["tolerance"]["kind"], False, c["origin"],
                                        f"{type(exc).__name__}: {exc}"))
    for b in BUILTINS:
        if b.slow and not args.all:
            continue
        try:
            verdicts.append(b.run())
        except (DomainError, RuntimeError, ArithmeticError) as exc:
            verdicts.append(Verdict(b.id, "builtin", b.quantity, b.target, None, b.kind, False,
                                    b.origin, f"{type(exc).__name__}: {exc}"))
    for v in verdicts:
        print(v.line())
    failed = sum(not v.passed for v in verdicts)
    print(f"{len(verdicts) - failed}/{len(verdicts)} checks passed")
    return EXIT_CHECK if failed else EXIT_OK


def cmd_list_presets(args) -> int:
    for p in preset_paths(Path(args.preset_dir) if args.preset_dir else None):
        sc = load(p)
        print(f"{p.stem}\t{sc.scheme}\t{sc.data.get('description', '')}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hybridsim", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"hybridsim {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def outputs(p):
        p.add_argument("--output-dir", default=".", help="directory for result files")
        p.add_argument("--format", choices=("csv", "json"), help="override the scenario's formats")

    p = sub.add_parser("run", help="evaluate a scenario file or preset name")
    p.add_argument("scenario")
    outputs(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="evaluate a scenario over a parameter grid")
    p.add_argument("scenario")
    p.add_argument("--axis", action="append", help="parameter path, e.g. distance_m or oscillator.frequency_hz")
    p.add_argument("--grid", action="append", help="start:stop:num[:log] or comma-separated values")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    outputs(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("paper-check", help="run every regression check")
    p.add_argument("--list", action="store_true", help="print check ids without running")
    p.add_argument("--all", action="store_true", help="include slow simulation checks")
    p.add_argument("--preset-dir", help=f"preset directory (default {preset_dir()})")
    p.set_defaults(func=cmd_paper_check)

    p = sub.add_parser("list-presets", help="list shipped scenario presets")
    p.add_argument("--preset-dir")
    p.set_defaults(func=cmd_list_presets)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        print("error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_SCHEMA
    try:
        return args.func(args)
    except (ScenarioError, KeyError) as exc:
        print(f"error: invalid scenario: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except DomainError as exc:
        print(f"error: outside physical domain: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (GpeConvergenceError, CutoffError) as exc:
        print(f"error: solver did not converge: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
