"""``wcslab`` command line.

Exit codes: 0 all definite verdicts match the registered outcomes, 1 verdict
mismatch, 2 config parse error (or bad command line), 3 config validation
error, 4 numerical failure. A numerical failure takes precedence over a
mismatch because it aborts the run before verdicts are compared.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from ..errors import NumericalError, ValidationError
from .config import ConfigParseError, load_config
from .experiments import REGISTRY, run_experiment
from .report import write_report

__all__ = ["main"]

log = logging.getLogger("wcslab")

EXIT_OK, EXIT_MISMATCH, EXIT_PARSE, EXIT_VALIDATION, EXIT_NUMERICAL = 0, 1, 2, 3, 4
OUT_ENV = "WCSLAB_OUT"


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wcslab", description="Run registered semigroup and operator experiments.")
    p.add_argument("--quiet", action="store_true", help="only report errors")
    sub = p.add_subparsers(dest="verb", required=True)
    run = sub.add_parser("run", help="run the experiment described by a YAML or JSON config")
    run.add_argument("config", help="config file path")
    run.add_argument("--out", help=f"output directory (overrides ${OUT_ENV} and the config)")
    run.add_argument("--degree", type=int, help="truncation degree N of every power series")
    run.add_argument("--tol", type=float, help="flow integrator tolerance")
    run.add_argument("--plots", action="store_true", help="also render PNG figures of the plot-ready tables")
    run.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS, help="only report errors")
    sub.add_parser("list", help="print the experiment registry")
    desc = sub.add_parser("describe", help="describe one experiment")
    desc.add_argument("experiment")
    return p


def _out_dir(args, cfg) -> Path:
    if args.out:
        return Path(args.out)
    if os.environ.get(OUT_ENV):
        return Path(os.environ[OUT_ENV])
    if cfg.output:
        return Path(cfg.output)
    return Path("wcslab_out") / cfg.experiment


def cmd_list() -> int:
    width = max(len(k) for k in REGISTRY)
    for exp in REGISTRY.values():
        print(f"{exp.id:<{width}}  {exp.anchor}")
        print(f"{'':<{width}}  expected: {exp.expected_text()}")
    return EXIT_OK


def cmd_describe(name: str) -> int:
    exp = REGISTRY.get(name)
    if exp is None:
        print(f"unknown experiment {name!r}; known: {', '.join(REGISTRY)}", file=sys.stderr)
        return EXIT_VALIDATION
    print(f"{exp.id}\n  statement: {exp.anchor}\n  {exp.summary}\n  expected outcomes:")
    for k, v in exp.expected.items():
        print(f"    {k}: {v.value}")
    print("  tables:")
    for k, v in exp.columns.items():
        print(f"    {k}: {v}")
    return EXIT_OK


def cmd_run(args) -> int:
    try:
        cfg = load_config(args.config)
    except ConfigParseError as exc:
        log.error("parse error: %s", exc)
        return EXIT_PARSE
    except ValidationError as exc:
        log.error("validation error: %s", exc)
        return EXIT_VALIDATION
    try:
        cfg = cfg.with_overrides(args.degree, args.tol)
    except ValidationError as exc:
        log.error("validation error: %s", exc)
        return EXIT_VALIDATION
    out = _out_dir(args, cfg)
    exp = REGISTRY[cfg.experiment]
    log.info("running %s (config %s) into %s", exp.id, cfg.config_hash[:12], out)
    try:
        outcome = run_experiment(cfg)
    except ValidationError as exc:
        log.error("validation error: %s", exc)
        return EXIT_VALIDATION
    except NumericalError as exc:
        log.error("numerical failure: %s: %s", type(exc).__name__, exc)
        return EXIT_NUMERICAL
    report = write_report(out, cfg, exp, outcome)
    if args.plots:
        from .plotting import render_tables

        render_tables(out, outcome.tables)
    for c in outcome.checks:
        flag = "MISMATCH" if c.mismatch else "ok"
        exp_text = c.expected.value if c.expected is not None else "-"
        log.info("%-9s %-55s %-12s expected %s", flag, c.label, c.verdict.verdict.value, exp_text)
    if report["mismatches"]:
        log.error("%d verdict(s) differ from the registered outcome", len(report["mismatches"]))
        return EXIT_MISMATCH
    return EXIT_OK


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(
        level=logging.ERROR if getattr(args, "quiet", False) else logging.INFO,
        format="%(levelname)s %(message)s",
        stream=sys.stderr,
        force=True,
    )
    if args.verb == "list":
        return cmd_list()
    if args.verb == "describe":
        return cmd_describe(args.experiment)
    return cmd_run(args)


if __name__ == "__main__":
    sys.exit(main())
