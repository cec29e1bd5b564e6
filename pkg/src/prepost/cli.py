"""Batch command-line front end.

    prepost run <scenario.yaml> [--out PATH] [--format json|csv]
                                [--threads N] [--seed-override SEED]
    prepost list

Exit codes: 0 success, 2 config error, 3 impossible post-selection,
4 enumeration cap exceeded, 1 any other error.
"""

from __future__ import annotations

import argparse
import sys

import yaml

from .errors import (
    ConfigError,
    EnumerationCapError,
    ImpossiblePostSelectionError,
    PrepostError,
)
from .scenarios import (
    MAX_SEED,
    list_experiments_text,
    run_scenario,
    validate_config,
    write_result,
)

EXIT_OK = 0
EXIT_OTHER = 1
EXIT_CONFIG = 2
EXIT_POSTSELECTION = 3
EXIT_ENUMERATION_CAP = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="prepost",
        description="Run pre/post-selected quantum dynamics scenarios",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run_p = sub.add_parser("run", help="execute a scenario file")
    run_p.add_argument("config", help="path to a YAML scenario file")
    run_p.add_argument("--out", help="result file path (overrides output.path)")
    run_p.add_argument(
        "--format",
        choices=("json", "csv"),
        help="result format (overrides output.format)",
    )
    run_p.add_argument(
        "--threads", type=int, default=1, help="worker threads for sweep points"
    )
    run_p.add_argument(
        "--seed-override", type=int, help="replace the scenario seed for this run"
    )
    sub.add_parser("list", help="list available experiments")
    return parser


def _fail(code: int, message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _load_yaml(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return yaml.safe_load(fh)
    except FileNotFoundError:
        raise ConfigError(f"scenario file not found: {path}")
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f" at line {mark.line + 1}, column {mark.column + 1}" if mark else ""
        problem = getattr(exc, "problem", None) or "invalid YAML"
        raise ConfigError(f"cannot parse {path}{where}: {problem}")


def _run(args) -> int:
    try:
        raw = _load_yaml(args.config)
        if args.seed_override is not None:
            if not 0 <= args.seed_override <= MAX_SEED:
                raise ConfigError("--seed-override must be an unsigned 64-bit integer")
            if not isinstance(raw, dict):
                raise ConfigError("scenario file must contain a mapping at top level")
            raw = {**raw, "seed": args.seed_override}
        cfg = validate_config(raw)

        out_path = args.out or cfg.output_path
        if not out_path:
            raise ConfigError("no output path: set output.path or pass --out")
        fmt = args.format or cfg.output_format
        if fmt is None:
            if out_path.endswith(".json"):
                fmt = "json"
            elif out_path.endswith(".csv"):
                fmt = "csv"
            else:
                raise ConfigError(
                    "no output format: set output.format, pass --format, "
                    "or use a .json/.csv path"
                )

        record = run_scenario(cfg, threads=args.threads)
        write_result(record, out_path, fmt)
    except ConfigError as exc:
        return _fail(EXIT_CONFIG, str(exc))
    except ImpossiblePostSelectionError as exc:
        return _fail(EXIT_POSTSELECTION, str(exc))
    except EnumerationCapError as exc:
        return _fail(EXIT_ENUMERATION_CAP, str(exc))
    except PrepostError as exc:
        return _fail(EXIT_OTHER, str(exc))
    except Exception as exc:  # pragma: no cover - defensive catch-all
        return _fail(EXIT_OTHER, f"{type(exc).__name__}: {exc}")
    print(f"wrote {out_path}")
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "list":
        sys.stdout.write(list_experiments_text())
        return EXIT_OK
    return _run(args)


if __name__ == "__main__":
    sys.exit(main())
