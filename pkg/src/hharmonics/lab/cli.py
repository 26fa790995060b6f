"""Command line entry point.

Verbs: verify-identities, converge, maximal, audit, kernel-table,
expand.  Each takes ``--config <path>`` (flat key = value text; all keys
optional), ``--out <stem>`` for CSV + JSON outputs, ``--seed`` and
``--threads`` overrides.  Exit codes: 0 all verdicts pass, 1 tolerance
failure, 2 configuration error.
"""
from __future__ import annotations

import argparse
import sys

from .config import ConfigError, ExperimentConfig
from .verbs import (expand, kernel_table, run_audit, run_convergence,
                    run_maximal, verify_identities)

_VERBS = {
    "verify-identities": verify_identities,
    "converge": run_convergence,
    "maximal": run_maximal,
    "audit": run_audit,
    "kernel-table": kernel_table,
    "expand": expand,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hharm",
        description="Weighted orthogonal expansion experiments on the "
                    "sphere, ball and simplex.")
    sub = parser.add_subparsers(dest="verb", required=True)
    for name in _VERBS:
        p = sub.add_parser(name)
        p.add_argument("--config", default=None, help="flat key=value config file")
        p.add_argument("--out", default=None, help="output stem (.csv/.json)")
        p.add_argument("--seed", type=int, default=None, help="override config seed")
        p.add_argument("--threads", type=int, default=None,
                       help="informational; numerics run through numpy's "
                            "own thread pool")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = (ExperimentConfig.from_file(args.config) if args.config
               else ExperimentConfig({}))
        if args.seed is not None:
            cfg.raw["seed"] = str(args.seed)
        if args.threads is not None:
            cfg.raw["threads"] = str(args.threads)
        report = _VERBS[args.verb](cfg)
    except (ConfigError, FileNotFoundError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    for verdict in report.verdicts:
        print(verdict.line())
    out = args.out or cfg.raw.get("out")
    if out:
        report.write_csv(out + ".csv")
        report.write_json(out + ".json")
        print(f"wrote {out}.csv and {out}.json")
    return report.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
