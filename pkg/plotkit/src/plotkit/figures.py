"""Figure builders.

Styling follows the reference layouts: bold red for qubit A, thin blue for
qubit B, solid black for the protected-state population, dashed cyan for the
ground-state population.  Output is deterministic PNG (fixed metadata, no
timestamps).
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .io import SchemaError, load_quad_populations, load_sweep, load_trajectory

_SAVE_KWARGS = {"dpi": 150, "metadata": {"Software": "qsync-plot"}}

_STYLE_A = {"color": "#c62828", "linewidth": 1.6}
_STYLE_B = {"color": "#1565c0", "linewidth": 0.7}


def _save(fig, out_path: str) -> str:
    fig.savefig(out_path, **_SAVE_KWARGS)
    plt.close(fig)
    return out_path


def _window(data: dict, t0: float, t1: float) -> np.ndarray:
    mask = (data["t"] >= t0) & (data["t"] <= t1)
    if not mask.any():
        raise ValueError(f"empty time window [{t0}, {t1}] "
                         f"(data spans [{data['t'][0]}, {data['t'][-1]}])")
    return mask


def _signals_panel(ax, data, window):
    ax.plot(data["t"][window], data["sx_A"][window], label=r"$\langle\sigma_x^A\rangle$",
            **_STYLE_A)
    ax.plot(data["t"][window], data["sx_B"][window], label=r"$\langle\sigma_x^B\rangle$",
            **_STYLE_B)
    ax.set_xlabel(r"$t\,[\kappa_A^{-1}]$")
    ax.legend(loc="upper right", fontsize=8)


def _populations_panel(ax, data, window):
    ax.plot(data["t"][window], data["pop_P"][window], color="black",
            linewidth=1.2, label="protected population")
    ax.plot(data["t"][window], data["pop_G"][window], color="#00acc1",
            linestyle="--", linewidth=1.2, label="ground population")
    ax.plot(data["t"][window], data["coh_PG"][window], color="#6a1b9a",
            linewidth=0.9, label="|coherence|")
    ax.set_xlabel(r"$t\,[\kappa_A^{-1}]$")
    ax.set_ylim(-0.02, 1.02)
    ax.legend(loc="upper right", fontsize=8)


def plot_trajectory(csv_path: str, panels: list[tuple[str, float, float]],
                    out_path: str) -> str:
    """Render trajectory panels; each panel is (kind, t_start, t_end) with
    kind 'signals' or 'populations'."""
    data = load_trajectory(csv_path)
    if not panels:
        raise ValueError("no panels requested")
    ncols = 2 if len(panels) > 1 else 1
    nrows = (len(panels) + ncols - 1) // ncols
    fig, axes = plt.subplots(nrows, ncols, figsize=(4.2 * ncols, 2.9 * nrows),
                             squeeze=False)
    for k, (kind, t0, t1) in enumerate(panels):
        ax = axes[k // ncols][k % ncols]
        window = _window(data, t0, t1)
        if kind == "signals":
            _signals_panel(ax, data, window)
        elif kind == "populations":
            _populations_panel(ax, data, window)
        else:
            raise ValueError(f"unknown panel kind {kind!r}")
    for k in range(len(panels), nrows * ncols):
        axes[k // ncols][k % ncols].axis("off")
    fig.tight_layout()
    return _save(fig, out_path)


def plot_heatmap(csv_paths: list[str], out_path: str,
                 titles: list[str] | None = None) -> str:
    """Coherence heatmap(s); several CSVs render side by side on one color scale.

    Grid gaps (the excluded singular-coupling band) are drawn as masked cells.
    """
    loaded = [load_sweep(p) for p in csv_paths]
    vmax = max(np.nanmax(grid) for _, _, grid in loaded)
    fig, axes = plt.subplots(1, len(loaded), figsize=(4.6 * len(loaded), 3.4),
                             squeeze=False)
    mappable = None
    for k, (kappa, gamma, grid) in enumerate(loaded):
        ax = axes[0][k]
        masked = np.ma.masked_invalid(grid.T)
        cmap = plt.get_cmap("viridis").copy()
        cmap.set_bad("#bdbdbd")
        mappable = ax.pcolormesh(kappa, gamma, masked, cmap=cmap, vmin=0.0,
                                 vmax=vmax, shading="nearest")
        ax.set_xlabel(r"$\kappa_B/\kappa_A$")
        ax.set_ylabel(r"$\log_{10}(\gamma_r/\kappa_A)$")
        if titles and k < len(titles):
            ax.set_title(titles[k], fontsize=9)
    fig.colorbar(mappable, ax=[axes[0][k] for k in range(len(loaded))],
                 label="|protected-ground coherence|")
    return _save(fig, out_path)


def _require(data_dir: str, filename: str) -> str:
    path = os.path.join(data_dir, filename)
    if not os.path.exists(path):
        raise SchemaError(f"missing input {path}; run the corresponding preset first")
    return path


def figure_fig1(data_dir: str, out_dir: str) -> str:
    csv_path = _require(data_dir, "fig1.csv")
    t_end = load_trajectory(csv_path)["t"][-1]
    return plot_trajectory(csv_path,
                           [("signals", 0.0, t_end),
                            ("signals", 0.0, 5.0),
                            ("signals", t_end - 2.0, t_end),
                            ("populations", 0.0, t_end)],
                           os.path.join(out_dir, "fig1.png"))


def figure_fig2(data_dir: str, out_dir: str) -> str:
    csv_path = _require(data_dir, "fig2.csv")
    t_end = load_trajectory(csv_path)["t"][-1]
    return plot_trajectory(csv_path,
                           [("signals", 0.0, t_end),
                            ("signals", t_end - 2.0, t_end)],
                           os.path.join(out_dir, "fig2.png"))


def figure_fig3(data_dir: str, out_dir: str) -> str:
    csv_path = _require(data_dir, "fig3.csv")
    t_end = load_trajectory(csv_path)["t"][-1]
    return plot_trajectory(csv_path,
                           [("signals", 0.0, t_end),
                            ("signals", 0.0, 5.0),
                            ("signals", t_end - 2.0, t_end),
                            ("populations", 0.0, t_end)],
                           os.path.join(out_dir, "fig3.png"))


def figure_fig4(data_dir: str, out_dir: str) -> str:
    return plot_heatmap([_require(data_dir, "fig4a.csv"),
                         _require(data_dir, "fig4b.csv")],
                        os.path.join(out_dir, "fig4.png"),
                        titles=["no local noise", "local dissipation and dephasing"])


def figure_fig5(data_dir: str, out_dir: str) -> str:
    purity_runs = [("fig5a.csv", "one photon", "-", "#1565c0"),
                   ("fig5a-fock2.csv", "two photons", ":", "#c62828"),
                   ("fig5a-mixed.csv", "incoherent mixture", "--", "#2e7d32")]
    fig, (ax_a, ax_b) = plt.subplots(1, 2, figsize=(9.0, 3.2))
    for filename, label, style, color in purity_runs:
        data = load_trajectory(_require(data_dir, filename))
        ax_a.plot(data["t"], data["purity"], linestyle=style, color=color, label=label)
    ax_a.axhline(1 / 3, color="gray", linewidth=0.5)
    ax_a.axhline(1 / 4, color="gray", linewidth=0.5)
    ax_a.set_xlabel(r"$t\,[\kappa_A^{-1}]$")
    ax_a.set_ylabel("purity")
    ax_a.legend(fontsize=8)

    quad = load_quad_populations(_require(data_dir, "fig5b_populations.csv"))
    for column, label, color in [("pop_2mm", "|2,-,->", "#c62828"),
                                 ("pop_1pm", "|1,+,->", "#1565c0"),
                                 ("pop_1mp", "|1,-,+>", "#2e7d32"),
                                 ("pop_0pp", "|0,+,+>", "black")]:
        ax_b.plot(quad["t"], quad[column], color=color, linewidth=0.8, label=label)
    ax_b.axhline(0.25, color="gray", linewidth=0.5)
    ax_b.set_xlabel(r"$t\,[\kappa_A^{-1}]$")
    ax_b.set_ylabel("population")
    ax_b.legend(fontsize=8)
    fig.tight_layout()
    return _save(fig, os.path.join(out_dir, "fig5.png"))


FIGURES = {
    "fig1": figure_fig1,
    "fig2": figure_fig2,
    "fig3": figure_fig3,
    "fig4": figure_fig4,
    "fig5": figure_fig5,
}
