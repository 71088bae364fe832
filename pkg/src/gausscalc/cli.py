"""Command-line front end.

    gausscalc list
    gausscalc verify --manifold sphere --grid 5x5 --report out.json
    gausscalc algebra-selftest

Exit status: 0 when everything passes, 1 when a check fails, 2 on usage or
configuration errors.
"""
from __future__ import annotations

import argparse
import logging
import sys

from . import __version__, catalog
from .algebra import selftest
from .checks import CHECKS, Grid
from .manifold import FDConfig
from .report import FORMATS, ConfigError, RunConfig, build_report, write_report

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _grid(text: str) -> tuple[int, ...]:
    try:
        return Grid.parse(text).counts
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _params(text: str) -> dict:
    try:
        return catalog.parse_params(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _checks(text: str) -> list[str]:
    return [c.strip() for c in text.split(",") if c.strip()]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gausscalc", description="Verify Gauss-map identities on catalog submanifolds.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("list", help="list catalog manifolds and registered checks")

    v = sub.add_parser("verify", help="run identity checks on a catalog manifold")
    v.add_argument("--manifold", required=True)
    v.add_argument("--params", type=_params, default={}, help="k=v,... passed to the catalog entry")
    v.add_argument("--checks", type=_checks, default=None, help="comma-separated check ids (default: all applicable)")
    v.add_argument("--grid", type=_grid, default=None, help="per-axis counts, e.g. 5x5")
    v.add_argument("--inset", type=float, default=0.1, help="distance kept from the domain boundary")
    v.add_argument("--h1", type=float, default=FDConfig.h1)
    v.add_argument("--h2", type=float, default=FDConfig.h2)
    v.add_argument("--richardson", action="store_true", help="one level of Richardson extrapolation")
    v.add_argument("--tol-scale", type=float, default=1.0, help="multiply every tolerance")
    v.add_argument("--report", default=None, help="write the report here instead of stdout")
    v.add_argument("--format", choices=FORMATS, default="json")
    v.add_argument("-v", "--verbose", action="count", default=0)
    v.add_argument("-q", "--quiet", action="store_true")

    s = sub.add_parser("algebra-selftest", help="randomized algebra identity suite")
    s.add_argument("--cases", type=int, default=500)
    s.add_argument("--seed", type=int, default=0)
    return p


def _cmd_list() -> int:
    print("manifolds:")
    for name in catalog.names():
        e = catalog.get(name)
        params = ", ".join(f"{k}={v:g}" for k, v in e.params.items())
        print(f"  {name:15s} m={e.chart.m} N={e.chart.N}  {params}")
    print("checks:")
    for cid, c in CHECKS.items():
        print(f"  {cid:24s} tol={c.tolerance:g}  {c.anchor}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    cfg = RunConfig(
        manifold=args.manifold, params=args.params, grid=args.grid, inset=args.inset,
        checks=args.checks, h1=args.h1, h2=args.h2, richardson=args.richardson,
        tol_scale=args.tol_scale, output=args.report, format=args.format,
        verbosity=-1 if args.quiet else args.verbose,
    )
    try:
        report = build_report(cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    if cfg.verbosity >= 0:
        for r in report.results:
            status = "PASS" if r.passed else "FAIL"
            detail = r.error or f"max={r.max_residual:.3e} tol={r.tolerance:.1e} points={len(r.points)}"
            print(f"{status} {r.check_id:24s} {detail}", file=sys.stderr)
            if cfg.verbosity >= 1:
                for name, c in r.components.items():
                    print(f"       {name:28s} {c['max_residual']:.3e} / {c['tolerance']:.1e}", file=sys.stderr)
        print(f"{cfg.manifold}: {'PASS' if report.passed else 'FAIL'}", file=sys.stderr)

    if cfg.output:
        try:
            write_report(report, cfg.output, cfg.format)
        except OSError as exc:
            print(f"error: cannot write report: {exc}", file=sys.stderr)
            return EXIT_USAGE
    else:
        sys.stdout.write(report.to_json() + "\n" if cfg.format == "json" else report.to_csv())
    return EXIT_OK if report.passed else EXIT_FAIL


def _cmd_selftest(args) -> int:
    ok = True
    for name, worst, passed in selftest(n_cases=args.cases, seed=args.seed):
        ok &= passed
        print(f"{'PASS' if passed else 'FAIL'} {name:24s} max={worst:.3e}")
    return EXIT_OK if ok else EXIT_FAIL


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    level = logging.WARNING
    if getattr(args, "verbose", 0) >= 2:
        level = logging.DEBUG
    elif getattr(args, "quiet", False):
        level = logging.ERROR
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    if args.command == "list":
        return _cmd_list()
    if args.command == "verify":
        return _cmd_verify(args)
    return _cmd_selftest(args)


if __name__ == "__main__":
    sys.exit(main())
