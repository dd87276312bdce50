"""Command-line runner: ``equivlab <experiment|all> --config PATH --out-dir PATH``.

Exit status is 0 when every criterion passes, 1 when any criterion fails
or a numerical contract is violated, and 2 on a usage or config error.
Config errors are detected before any file is written.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

from .errors import ConfigError, EquivLabError
from .experiments import EXPERIMENTS, ExperimentOutput, resolve

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def load_config(path: str | None, names: list[str]) -> dict:
    """Parse a JSON config and resolve the sections for ``names``.

    Top-level keys must be experiment names; each maps to an object with
    optional ``params`` and ``tolerances``.
    """
    raw: dict = {}
    if path is not None:
        try:
            raw = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError("config must be a JSON object")
        unknown = set(raw) - set(EXPERIMENTS)
        if unknown:
            raise ConfigError(f"unknown top-level keys {sorted(unknown)}")
    # every section present is validated, even if it is not run
    for name in raw:
        resolve(name, raw[name])
    return {name: resolve(name, raw.get(name)) for name in names}


def _cell(value) -> str:
    if isinstance(value, bool) or isinstance(value, str):
        return str(value)
    if isinstance(value, int):
        return str(value)
    return format(float(value), ".11e")


def write_csv(path: Path, output: ExperimentOutput) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(output.columns)
        for row in output.rows:
            writer.writerow([_cell(v) for v in row])


def run_experiment(name: str, params: dict, tolerances: dict, out_dir: Path) -> dict:
    """Run one experiment, write its CSV and summary, return the summary."""
    start = time.perf_counter()
    output = EXPERIMENTS[name].run(params, tolerances)
    duration = time.perf_counter() - start
    csv_path = out_dir / f"{name}.csv"
    json_path = out_dir / f"{name}.summary.json"
    write_csv(csv_path, output)
    summary = {
        "experiment": name,
        "passed": all(c.passed for c in output.criteria),
        "criteria": [c.as_dict() for c in output.criteria],
        "duration_s": duration,
        "config": {"params": params, "tolerances": tolerances},
        "artifacts": {"csv": csv_path.name, "summary": json_path.name},
    }
    json_path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return summary


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="equivlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in [*EXPERIMENTS, "all"]:
        p = sub.add_parser(name, help=f"run the {name} experiment" if name != "all"
                           else "run every experiment in sequence")
        p.add_argument("--config", help="JSON config file (defaults apply when omitted)")
        p.add_argument("--out-dir", required=True, help="directory for CSV and summary files")
        p.add_argument("--seedless", action="store_true",
                       help="accepted for compatibility; every run is deterministic")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    names = list(EXPERIMENTS) if args.experiment == "all" else [args.experiment]
    try:
        resolved = load_config(args.config, names)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out_dir = Path(args.out_dir)
    if out_dir.exists() and not out_dir.is_dir():
        print(f"config error: {out_dir} is not a directory", file=sys.stderr)
        return EXIT_USAGE
    out_dir.mkdir(parents=True, exist_ok=True)

    status = EXIT_OK
    for name in names:
        params, tolerances = resolved[name]
        try:
            summary = run_experiment(name, params, tolerances, out_dir)
        except EquivLabError as exc:
            module = type(exc).__module__
            origin = getattr(exc, "__traceback__", None)
            while origin is not None and origin.tb_next is not None:
                origin = origin.tb_next
            if origin is not None:
                module = origin.tb_frame.f_globals.get("__name__", module)
            print(f"{name}: {type(exc).__name__} in {module}: {exc}", file=sys.stderr)
            status = EXIT_FAIL
            continue
        for c in summary["criteria"]:
            verdict = "PASS" if c["passed"] else "FAIL"
            print(f"{name}: {verdict} {c['name']} measured={c['measured']:.6g} "
                  f"{c['comparison']} {c['tolerance']:.6g}")
        if not summary["passed"]:
            status = EXIT_FAIL
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
