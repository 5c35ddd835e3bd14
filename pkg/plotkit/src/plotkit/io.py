"""Schema-validated readers for the simulator's CSV outputs.

Headers must match the documented schemas exactly; anything else raises
SchemaError and the CLI exits nonzero.
"""

from __future__ import annotations

import csv

import numpy as np

TRAJECTORY_COLUMNS = ("t", "sx_A", "sx_B", "pop_P", "pop_G", "coh_PG",
                      "purity", "vn_entropy")
SWEEP_COLUMNS = ("kappa_B_over_kA", "log10_gamma_r", "coh_PG")
QUAD_COLUMNS = ("t", "pop_2mm", "pop_1pm", "pop_1mp", "pop_0pp")


class SchemaError(ValueError):
    """A CSV file does not match its documented schema."""


def _read_rows(path: str, columns: tuple[str, ...]) -> np.ndarray:
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise SchemaError(f"{path}: empty file") from None
            if tuple(header) != columns:
                raise SchemaError(f"{path}: header {','.join(header)!r} does not match "
                                  f"the schema {','.join(columns)!r}")
            rows = []
            for lineno, row in enumerate(reader, start=2):
                if len(row) != len(columns):
                    raise SchemaError(f"{path}:{lineno}: expected {len(columns)} "
                                      f"fields, got {len(row)}")
                try:
                    rows.append([float(x) for x in row])
                except ValueError as exc:
                    raise SchemaError(f"{path}:{lineno}: non-numeric field") from exc
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return np.array(rows)


def load_trajectory(path: str) -> dict[str, np.ndarray]:
    data = _read_rows(path, TRAJECTORY_COLUMNS)
    return {name: data[:, k] for k, name in enumerate(TRAJECTORY_COLUMNS)}


def load_quad_populations(path: str) -> dict[str, np.ndarray]:
    data = _read_rows(path, QUAD_COLUMNS)
    return {name: data[:, k] for k, name in enumerate(QUAD_COLUMNS)}


def load_sweep(path: str) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Returns (kappa_B axis, log10_gamma axis, coherence grid with nan gaps)."""
    data = _read_rows(path, SWEEP_COLUMNS)
    kappa = np.unique(data[:, 0])
    gamma = np.unique(data[:, 1])
    if len(kappa) * len(gamma) != data.shape[0]:
        raise SchemaError(f"{path}: rows do not form a complete "
                          f"{len(kappa)}x{len(gamma)} grid")
    grid = np.full((len(kappa), len(gamma)), np.nan)
    ki = np.searchsorted(kappa, data[:, 0])
    gi = np.searchsorted(gamma, data[:, 1])
    grid[ki, gi] = data[:, 2]
    return kappa, gamma, grid
