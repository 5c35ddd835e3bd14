"""Scenario and sweep execution plus CSV/JSON emission.

A scenario evolves one initial state on a uniform grid and records
observables at every grid time.  A sweep runs one scenario per grid point
over (kappa_B, log10 gamma_r), each evolved to t = factor / gamma_r, and
collects the final protected-ground coherence; points inside the singular
coupling band are emitted as explicit gaps.  Sweep points are independent
and can run on a process pool; parallel and serial results are identical.

Scenarios whose outputs only touch populations and first-order coherences
are evolved on the excitation-difference sectors those observables read
from, which is exact and is what keeps the d = 44 sweep fast.
"""

from __future__ import annotations

import concurrent.futures
import json
import math
from dataclasses import dataclass

import numpy as np

from ._version import __version__
from .config import (ScenarioConfig, SweepConfig, build_initial_density,
                     serialize_config)
from .errors import ConfigError
from .liouvillian import build_liouvillian, coherence_sector_mask
from .model import protected_pair, tuned_kappa_AB
from .observables import ObservableRecord, make_context
from .propagate import Trajectory, propagate_expm

_FULL_STATE_COLUMNS = {"purity", "vn_entropy"}


@dataclass
class ScenarioResult:
    config: ScenarioConfig
    trajectory: Trajectory

    @property
    def records(self) -> list[ObservableRecord]:
        return self.trajectory.records

    @property
    def final(self) -> ObservableRecord:
        return self.trajectory.records[-1]

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.records])


def _needs_full_state(config: ScenarioConfig) -> bool:
    return bool(_FULL_STATE_COLUMNS.intersection(config.columns)) or bool(config.extras)


def run_scenario(config: ScenarioConfig, *, retain_states: bool = False) -> ScenarioResult:
    """Run one configured scenario; fully deterministic."""
    params = config.model
    space = params.space
    try:
        pair = protected_pair(params)
    except Exception:
        pair = None
    if pair is None and {"pop_P", "pop_G", "coh_PG"}.intersection(config.columns):
        raise ConfigError("outputs: protected-pair observables requested but the "
                          "protected pair is undefined at these couplings")

    rho0 = build_initial_density(config.initial_state, space, pair)
    liouvillian = build_liouvillian(params, mode="full")

    full = retain_states or _needs_full_state(config)
    mask = None
    if not full:
        differences = {0}
        if {"sx_A", "sx_B", "coh_PG"}.intersection(config.columns):
            differences.add(1)
        mask = coherence_sector_mask(space, differences)

    ctx = make_context(params, pair=pair, with_entropies=full,
                       with_blocks="block_populations" in config.extras,
                       with_quad="quad_populations" in config.extras)
    trajectory = propagate_expm(liouvillian, rho0, config.times,
                                record_fn=ctx.build_record,
                                retain_states=retain_states,
                                needed_mask=mask)
    return ScenarioResult(config=config, trajectory=trajectory)


# -- sweep ---------------------------------------------------------------------

@dataclass
class SweepResult:
    config: SweepConfig
    kappa_B_values: np.ndarray
    log10_gamma_values: np.ndarray
    coherence: np.ndarray          # shape (len(kappa_B), len(log10_gamma)); nan = gap
    gaps: list[tuple[int, int]]


def sweep_cell_config(config: SweepConfig, kappa_b: float, gamma_r: float) -> ScenarioConfig:
    """Scenario for one sweep point: same pipeline as any other scenario."""
    model = config.model.replace(kappa_B=kappa_b, gamma_diss_r=gamma_r)
    if config.auto_kappa_AB:
        model = model.replace(kappa_AB=tuned_kappa_AB(model))
    return ScenarioConfig(
        name=f"{config.name}[kB={kappa_b:g},gr={gamma_r:g}]",
        model=model, auto_kappa_AB=config.auto_kappa_AB,
        initial_state=config.initial_state,
        t_end=config.t_end_factor / gamma_r, n_steps=2,
        columns=("coh_PG",))


def _sweep_point(args) -> float:
    config, kappa_b, gamma_r = args
    cell = sweep_cell_config(config, kappa_b, gamma_r)
    return run_scenario(cell).final.coh_PG


def run_sweep(config: SweepConfig, jobs: int = 1) -> SweepResult:
    """Run the whole grid; row-major (kappa_B outer), deterministic order."""
    kappa_values = config.kappa_B_grid
    gamma_values = 10.0 ** config.log10_gamma_grid
    coherence = np.full((len(kappa_values), len(gamma_values)), math.nan)
    gaps: list[tuple[int, int]] = []
    tasks: list[tuple[int, int, float, float]] = []
    for i, kb in enumerate(kappa_values):
        for j, gr in enumerate(gamma_values):
            if abs(kb - config.model.kappa_A) < config.exclude_band * config.model.kappa_A:
                gaps.append((i, j))
            else:
                tasks.append((i, j, float(kb), float(gr)))

    if jobs <= 1:
        values = [_sweep_point((config, kb, gr)) for _, _, kb, gr in tasks]
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            values = list(pool.map(_sweep_point,
                                   [(config, kb, gr) for _, _, kb, gr in tasks],
                                   chunksize=max(1, len(tasks) // (8 * jobs))))
    for (i, j, _, _), value in zip(tasks, values):
        coherence[i, j] = value
    return SweepResult(config=config, kappa_B_values=kappa_values,
                       log10_gamma_values=config.log10_gamma_grid,
                       coherence=coherence, gaps=gaps)


# -- emission --------------------------------------------------------------------

def _fmt(x: float) -> str:
    return f"{x:.12g}"


TRAJECTORY_HEADER = ",".join(ObservableRecord.CSV_FIELDS)
SWEEP_HEADER = "kappa_B_over_kA,log10_gamma_r,coh_PG"
QUAD_POPULATION_HEADER = "t,pop_2mm,pop_1pm,pop_1mp,pop_0pp"


def emit_trajectory_csv(result: ScenarioResult, path: str) -> None:
    lines = [TRAJECTORY_HEADER]
    for rec in result.records:
        lines.append(",".join(_fmt(v) for v in rec.csv_values()))
    _write_text(path, "\n".join(lines) + "\n")


def emit_quad_populations_csv(result: ScenarioResult, path: str) -> None:
    lines = [QUAD_POPULATION_HEADER]
    for rec in result.records:
        pops = rec.basis_populations
        if pops is None:
            raise ValueError("records carry no quadruplet populations; add "
                             "'quad_populations' to outputs.extras")
        lines.append(",".join([_fmt(rec.t)] + [_fmt(pops[k])
                                               for k in ("2mm", "1pm", "1mp", "0pp")]))
    _write_text(path, "\n".join(lines) + "\n")


def emit_sweep_csv(result: SweepResult, path: str) -> None:
    lines = [SWEEP_HEADER]
    kappa_a = result.config.model.kappa_A
    for i, kb in enumerate(result.kappa_B_values):
        for j, lg in enumerate(result.log10_gamma_values):
            lines.append(",".join([_fmt(kb / kappa_a), _fmt(lg),
                                   _fmt(result.coherence[i, j])]))
    _write_text(path, "\n".join(lines) + "\n")


def emit_trajectory_json(result: ScenarioResult, path: str) -> None:
    payload = {
        "metadata": {
            "tool": "qsync",
            "version": __version__,
            "config": serialize_config(result.config),
        },
        "columns": list(ObservableRecord.CSV_FIELDS),
        "records": [[_json_num(v) for v in rec.csv_values()] for rec in result.records],
    }
    _write_text(path, json.dumps(payload, indent=2) + "\n")


def emit_sweep_json(result: SweepResult, path: str) -> None:
    kappa_a = result.config.model.kappa_A
    payload = {
        "metadata": {
            "tool": "qsync",
            "version": __version__,
            "config": serialize_config(result.config),
            "gap_policy": f"|kappa_B/kappa_A - 1| < {result.config.exclude_band:g} "
                          "emitted as null",
        },
        "columns": SWEEP_HEADER.split(","),
        "grid": [[_json_num(result.kappa_B_values[i] / kappa_a),
                  _json_num(result.log10_gamma_values[j]),
                  _json_num(result.coherence[i, j])]
                 for i in range(len(result.kappa_B_values))
                 for j in range(len(result.log10_gamma_values))],
    }
    _write_text(path, json.dumps(payload, indent=2) + "\n")


def _json_num(x: float):
    if isinstance(x, float) and math.isnan(x):
        return None
    return x


def _write_text(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
