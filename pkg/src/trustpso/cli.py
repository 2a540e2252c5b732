"""Command-line entry point: ``trustpso run | reproduce | list-presets``.

Exit codes: 0 success, 1 configuration/usage error, 2 I/O failure.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from trustpso.attacks import AttackModel
from trustpso.engine import Engine, GenBestPolicy
from trustpso.harness import FIGURES, ConfigError, load_scenario, reproduce, run_scenario, write_csv
from trustpso.trust import STRATEGY_PRESETS

OUT_DIR_ENV = "TRUSTPSO_OUT_DIR"
log = logging.getLogger("trustpso")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="trustpso", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--out", default=os.environ.get(OUT_DIR_ENV, "results"),
                       help=f"output directory (default: ${OUT_DIR_ENV} or ./results)")
        p.add_argument("--seed", type=int, help="override the master seed")
        p.add_argument("--runs", type=int, help="override the Monte-Carlo run count")
        p.add_argument("--jobs", type=int, default=1, help="worker processes for runs")
        p.add_argument("--plot", action="store_true", help="also write SVG line charts")

    run = sub.add_parser("run", help="run a single scenario from a JSON config")
    run.add_argument("--config", required=True, type=Path)
    common(run)
    rep = sub.add_parser("reproduce", help="run a figure's full scenario grid")
    rep.add_argument("--figure", required=True, help=f"one of {', '.join(FIGURES)}")
    common(rep)
    sub.add_parser("list-presets", help="print accepted preset names")
    return parser


def list_presets() -> str:
    lines = ["strategies: " + " ".join(STRATEGY_PRESETS),
             "policies: " + " ".join(p.value for p in GenBestPolicy),
             "engines: " + " ".join(e.value for e in Engine),
             "attack models: " + " ".join(m.value for m in AttackModel),
             "figures: " + " ".join(FIGURES)]
    return "\n".join(lines)


def _check_overrides(args):
    if args.runs is not None and args.runs < 1:
        raise ConfigError("--runs must be >= 1", "runs")
    if args.seed is not None and not 0 <= args.seed < 2**64:
        raise ConfigError("--seed must be a 64-bit unsigned integer", "seed")
    if args.jobs < 1:
        raise ConfigError("--jobs must be >= 1", "jobs")


def _run(args) -> None:
    scenario = load_scenario(args.config)
    changes = {}
    if args.seed is not None:
        changes["master_seed"] = args.seed
    if args.runs is not None:
        changes["runs"] = args.runs
    scenario = scenario.with_(**changes)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    log.info("%s: %d runs", scenario.name, scenario.runs)
    table = run_scenario(scenario, jobs=args.jobs)
    path = write_csv(scenario, table, out)
    log.info("wrote %s", path)
    if args.plot:
        from trustpso.plotting import plot_series

        svg = plot_series([(scenario, table)], "distance", out / f"{scenario.name}.svg",
                          scenario.name, "fig4")
        log.info("wrote %s", svg)


def _reproduce(args) -> None:
    if args.figure not in FIGURES:
        raise ConfigError(f"unknown figure {args.figure!r}; expected one of {', '.join(FIGURES)}",
                          "figure")
    kw = {"jobs": args.jobs, "plot": args.plot, "progress": log.info}
    if args.runs is not None:
        kw["runs"] = args.runs
    if args.seed is not None:
        kw["master_seed"] = args.seed
    paths = reproduce(args.figure, args.out, **kw)
    log.info("wrote %d files to %s", len(paths), args.out)


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(message)s", stream=sys.stderr)
    try:
        args = build_parser().parse_args(argv)
        if args.verb == "list-presets":
            print(list_presets())
            return 0
        _check_overrides(args)
        if args.verb == "run":
            _run(args)
        else:
            _reproduce(args)
    except (_UsageError, ConfigError) as exc:
        print(f"trustpso: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"trustpso: I/O error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
