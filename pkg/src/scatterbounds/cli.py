"""Command-line entry point.

Exit codes: 0 all checks pass, 1 config error, 2 numerical failure,
3 bound violation detected.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import config as cfgmod
from .errors import ConfigError, ScatterError
from .sweep import run_bounds, run_perturb, run_sweep, solve_report, to_csv, to_json

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_VIOLATION = 0, 1, 2, 3


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="scatterbounds",
                                description="Transmission bounds for 1D scattering.")
    sub = p.add_subparsers(dest="command", required=True)
    helps = {
        "solve": "full detail at one energy (the first configured energy)",
        "sweep": "exact T and bounds over the energy grid",
        "bounds": "bounds only, without solving the full problem",
        "perturb": "first-order estimates over an epsilon ladder",
        "verify": "run the built-in acceptance corpus",
    }
    for name, h in helps.items():
        sp = sub.add_parser(name, help=h)
        sp.add_argument("--config", required=name != "verify", help="YAML scenario file")
        sp.add_argument("--output", help="write results here instead of stdout")
        sp.add_argument("--format", choices=("csv", "json"), help="output format")
        sp.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")
        sp.add_argument("--quiet", action="store_true", help="suppress progress messages")
    return p


def _emit(text: str, path: str | None):
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _verify(args) -> int:
    from .verification import run_all

    def report(res):
        if not args.quiet:
            print(res.line(), flush=True)
            for f in res.failures[:5]:
                print(f"      {f}", flush=True)

    results = run_all(report)
    if args.output:
        rows = [{"criterion": r.number, "name": r.name, "passed": r.passed,
                 "detail": r.detail, "seconds": r.seconds} for r in results]
        Path(args.output).write_text(to_json(rows))
    if all(r.passed for r in results):
        return EXIT_OK
    if any(r.detail.startswith("numerical failure") for r in results):
        return EXIT_NUMERICAL
    return EXIT_VIOLATION


def _run(args) -> int:
    if args.jobs < 1:
        raise ConfigError("--jobs must be at least 1")
    if args.command == "verify":
        return _verify(args)
    cfg = cfgmod.load(args.config)
    fmt = args.format or cfg.output_format
    out = args.output or cfg.output_path
    log = (lambda m: None) if args.quiet else (lambda m: print(m, file=sys.stderr))

    if args.command == "solve":
        E = cfg.energy_values()[0]
        rep = solve_report(cfg, E)
        _emit(to_json(rep), out)
        return EXIT_OK if rep["sandwich_ok"] else EXIT_VIOLATION

    if args.command == "perturb":
        rows = run_perturb(cfg)
        bad = [r for r in rows if r.status == "ok" and (
            r.b_exact_abs > r.b_abs_bound or abs(r.delta_T_exact) > r.delta_T_bound)]
    elif args.command == "sweep":
        rows = run_sweep(cfg, args.jobs)
        bad = [r for r in rows if r.status == "ok" and not r.sandwich_ok]
    else:
        rows = run_bounds(cfg, args.jobs)
        bad = []
    _emit(to_csv(rows) if fmt == "csv" else to_json(rows), out)
    failed = [r for r in rows if r.status != "ok"]
    for r in failed:
        log(f"E={r.E}: {r.status}")
    if bad:
        log(f"{len(bad)} row(s) violate their bounds")
        return EXIT_VIOLATION
    if failed:
        return EXIT_NUMERICAL
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        return _run(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ScatterError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        # NoOpenChannelError, DomainError and friends
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
