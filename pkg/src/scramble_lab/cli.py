"""``scramble-lab`` batch command line."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .acceptance import CRITERIA, run_all
from .config import ExperimentConfig, read_config_file, resolve
from .errors import ConfigError, ScrambleLabError
from .experiments import EXPERIMENTS
from .rng import set_workers
from .serialize import build_record, dumps_csv, dumps_json, to_jsonable


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key = value config file")
    p.add_argument("--seed", type=int, help="master seed (default: $SCRAMBLE_LAB_SEED or built-in)")
    p.add_argument("--stream", type=int, help="sub-stream index")
    p.add_argument("--output", "-o", help="artifact path (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--workers", type=int, help="thread bound; results do not depend on it")
    p.add_argument("--check", action="store_const", const=True, default=None,
                   help="exit nonzero unless the experiment's checks pass")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="scramble-lab", description=__doc__)
    parser.add_argument("--version", action="version", version=f"scramble-lab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, schema) in EXPERIMENTS.items():
        p = sub.add_parser(name)
        _add_common(p)
        for key, spec in schema.items():
            p.add_argument(f"--{key.replace('_', '-')}", dest=key, default=None,
                           help=f"{spec.help} (default: {spec.default})".strip())
    rp = sub.add_parser("reproduce-paper", help="run every acceptance criterion")
    rp.add_argument("--only", help="comma-separated criterion numbers")
    rp.add_argument("--output", "-o", help="JSON summary path")
    return parser


def run(config: ExperimentConfig) -> tuple[int, dict]:
    set_workers(config.workers)
    driver = EXPERIMENTS[config.experiment][0]
    artifact = driver(config.parameters, config.seed)
    record = build_record(__version__, config.to_dict(), artifact)
    if config.format == "csv":
        if not artifact.columns:
            raise ConfigError(f"{config.experiment} produces no table; use --format json")
        text = dumps_csv(artifact.columns, artifact.rows,
                         {"scramble_lab_version": __version__, "config": config.to_dict()})
    else:
        text = dumps_json(record)
    if config.output_path:
        Path(config.output_path).write_text(text)
    else:
        sys.stdout.write(text)
    failed = [k for k, ok in artifact.checks.items() if not ok]
    if failed:
        print(f"checks failed: {', '.join(failed)}", file=sys.stderr)
    return (1 if config.check and failed else 0), record


def _reproduce(args) -> int:
    only = {int(x) for x in args.only.split(",")} if args.only else None
    if only and not only <= set(CRITERIA):
        raise ConfigError(f"criteria are numbered 1..{len(CRITERIA)}")
    checks = run_all(only)
    for c in checks:
        print(c.line())
    passed = sum(c.passed for c in checks)
    print(f"{passed}/{len(checks)} checks passed")
    if args.output:
        summary = {"scramble_lab_version": __version__,
                   "checks": [{"criterion": c.criterion, "name": c.name, "passed": c.passed,
                               "detail": c.detail} for c in checks]}
        Path(args.output).write_text(dumps_json(summary))
    return 0 if passed == len(checks) else 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "reproduce-paper":
            return _reproduce(args)
        file_values = read_config_file(args.config) if args.config else {}
        flags = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
        config = resolve(args.command, file_values, flags)
        return run(config)[0]
    except ConfigError as exc:
        print(f"scramble-lab: configuration error: {exc}", file=sys.stderr)
        return 2
    except ScrambleLabError as exc:
        diag = {"error": type(exc).__name__, "message": str(exc),
                "diagnostics": to_jsonable(getattr(exc, "diagnostics", {}))}
        print(json.dumps(diag, sort_keys=True), file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
