"""Command-line interface.

    qsync run <preset|config-path> [--out DIR] [--format csv|json]
    qsync sweep <preset|config-path> [--jobs N] [--out DIR] [--format csv|json]
    qsync validate <config-path>
    qsync presets

Exit codes: 0 success, 2 configuration error, 3 numerical-invariant violation.
"""

from __future__ import annotations

import argparse
import os
import sys

from ._version import __version__
from .config import (ScenarioConfig, SweepConfig, load_config, preset_description,
                     preset_names, serialize_config)
from .errors import (ConfigError, InvariantViolationError, PositivityError,
                     QsyncError, TruncationLeakageError)
from .scenarios import (emit_quad_populations_csv, emit_sweep_csv, emit_sweep_json,
                        emit_trajectory_csv, emit_trajectory_json, run_scenario,
                        run_sweep)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qsync",
        description="Simulate two dissipative qubits synchronized through a "
                    "lossy resonator.")
    parser.add_argument("--version", action="version", version=f"qsync {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a trajectory scenario")
    p_run.add_argument("config", help="preset name or config file path")
    p_run.add_argument("--out", default=".", metavar="DIR", help="output directory")
    p_run.add_argument("--format", choices=("csv", "json"), default="csv")

    p_sweep = sub.add_parser("sweep", help="run a (kappa_B, gamma_r) coherence sweep")
    p_sweep.add_argument("config", help="preset name or config file path")
    p_sweep.add_argument("--jobs", type=int, default=1, metavar="N",
                         help="parallel worker processes (default 1)")
    p_sweep.add_argument("--out", default=".", metavar="DIR", help="output directory")
    p_sweep.add_argument("--format", choices=("csv", "json"), default="csv")

    p_val = sub.add_parser("validate", help="validate a config file")
    p_val.add_argument("config", help="preset name or config file path")

    sub.add_parser("presets", help="list shipped presets")
    return parser


def _cmd_run(args) -> int:
    cfg = load_config(args.config)
    if isinstance(cfg, SweepConfig):
        raise ConfigError(f"{cfg.name} is a sweep config; use 'qsync sweep'")
    result = run_scenario(cfg)
    os.makedirs(args.out, exist_ok=True)
    base = os.path.join(args.out, cfg.name)
    if args.format == "csv":
        emit_trajectory_csv(result, base + ".csv")
        written = [base + ".csv"]
        if "quad_populations" in cfg.extras:
            emit_quad_populations_csv(result, base + "_populations.csv")
            written.append(base + "_populations.csv")
    else:
        emit_trajectory_json(result, base + ".json")
        written = [base + ".json"]
    final = result.final
    print(f"{cfg.name}: {len(result.records)} records to t={cfg.t_end:g}")
    print(f"  final: pop_P={final.pop_P:.6g} pop_G={final.pop_G:.6g} "
          f"coh_PG={final.coh_PG:.6g} purity={final.purity:.6g}")
    for path in written:
        print(f"  wrote {path}")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    if isinstance(cfg, ScenarioConfig):
        raise ConfigError(f"{cfg.name} is a trajectory config; use 'qsync run'")
    result = run_sweep(cfg, jobs=max(1, args.jobs))
    os.makedirs(args.out, exist_ok=True)
    base = os.path.join(args.out, cfg.name)
    path = base + (".csv" if args.format == "csv" else ".json")
    if args.format == "csv":
        emit_sweep_csv(result, path)
    else:
        emit_sweep_json(result, path)
    n_points = result.coherence.size - len(result.gaps)
    print(f"{cfg.name}: {n_points} points computed, {len(result.gaps)} gap(s)")
    print(f"  wrote {path}")
    return EXIT_OK


def _cmd_validate(args) -> int:
    cfg = load_config(args.config)
    kind = "sweep" if isinstance(cfg, SweepConfig) else "scenario"
    print(f"{cfg.name}: valid {kind} config")
    print(serialize_config(cfg), end="")
    return EXIT_OK


def _cmd_presets(_args) -> int:
    for name in preset_names():
        print(f"{name:14s} {preset_description(name)}")
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handler = {"run": _cmd_run, "sweep": _cmd_sweep,
               "validate": _cmd_validate, "presets": _cmd_presets}[args.command]
    try:
        return handler(args)
    except (ConfigError, TruncationLeakageError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (InvariantViolationError, PositivityError) as exc:
        print(f"numerical invariant violated: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except QsyncError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
