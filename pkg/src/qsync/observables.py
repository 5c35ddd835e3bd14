"""Observables recorded along trajectories.

Covers qubit sigma_x expectations, protected/ground populations and their
coherence modulus, purity and von Neumann entropy, excitation-block
populations, and the synchronization diagnostics (dominant tail frequencies
and sliding-window correlation of the two qubit signals).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import PositivityError
from .hilbert import HilbertSpace, pauli_ops
from .model import ExcitationBlock, ModelParams, ProtectedPair, excitation_blocks, protected_pair

logger = logging.getLogger(__name__)

_HERMITIAN_TOL = 1e-12
_CLIP_FLOOR = -1e-8

#: the four basis states of the two-excitation quadruplet, in reporting order
QUAD_LABELS = (("2mm", (2, 0, 0)), ("1pm", (1, 1, 0)),
               ("1mp", (1, 0, 1)), ("0pp", (0, 1, 1)))


def expectation(rho: np.ndarray, operator: np.ndarray):
    """Tr(rho O); returns a real float for Hermitian O, complex otherwise."""
    if rho.shape != operator.shape:
        raise ValueError(f"shape mismatch: rho {rho.shape} vs operator {operator.shape}")
    value = np.trace(rho @ operator)
    if np.abs(operator - operator.conj().T).max() < _HERMITIAN_TOL:
        if abs(value.imag) > 1e-10:
            raise ValueError(f"expectation of Hermitian operator has imaginary part "
                             f"{value.imag:.3e}")
        return float(value.real)
    return complex(value)


def pair_diagnostics(rho: np.ndarray, pair: ProtectedPair) -> tuple[float, float, float]:
    """(population of |P>, population of |G>, |<P|rho|G>|)."""
    pop_p = float(np.real(pair.state_P.conj() @ rho @ pair.state_P))
    pop_g = float(np.real(pair.state_G.conj() @ rho @ pair.state_G))
    coh = float(abs(pair.state_P.conj() @ rho @ pair.state_G))
    return pop_p, pop_g, coh


def entropies(rho: np.ndarray, clip_floor: float = _CLIP_FLOOR) -> tuple[float, float]:
    """(von Neumann entropy, purity Tr rho^2).

    Eigenvalues in [clip_floor, 0) are clipped to zero (and the spectrum
    renormalized) before taking logs; anything below the floor raises.
    Clipping is logged, never silent.
    """
    purity = float(np.real(np.trace(rho @ rho)))
    lam = np.linalg.eigvalsh(rho)
    if lam[0] < clip_floor:
        raise PositivityError(f"eigenvalue {lam[0]:.3e} below positivity floor {clip_floor:g}")
    clipped = -lam[lam < 0].sum()
    if clipped > 0:
        level = logging.WARNING if clipped > 1e-10 else logging.DEBUG
        logger.log(level, "clipped negative spectral mass %.3e for entropy", clipped)
    lam = np.clip(lam, 0.0, None)
    lam = lam / lam.sum()
    nonzero = lam[lam > 0]
    vn = float(-(nonzero * np.log(nonzero)).sum())
    return vn, purity


def block_populations(rho: np.ndarray, blocks: list[ExcitationBlock]) -> dict[int, float]:
    """Population of each excitation block, keyed by excitation number."""
    diag = np.real(np.diag(rho))
    return {b.n: float(diag[list(b.indices)].sum()) for b in blocks}


@dataclass
class ObservableRecord:
    """Everything recorded at one trajectory time."""

    t: float
    sx_A: float
    sx_B: float
    pop_P: float
    pop_G: float
    coh_PG: float
    purity: float
    vn_entropy: float
    block_populations: dict[int, float] | None = None
    basis_populations: dict[str, float] | None = None

    CSV_FIELDS = ("t", "sx_A", "sx_B", "pop_P", "pop_G", "coh_PG", "purity", "vn_entropy")

    def csv_values(self) -> tuple[float, ...]:
        return (self.t, self.sx_A, self.sx_B, self.pop_P, self.pop_G,
                self.coh_PG, self.purity, self.vn_entropy)


@dataclass
class RecordContext:
    """Prebuilt operators and states needed to fill an ObservableRecord."""

    space: HilbertSpace
    pair: ProtectedPair | None
    sx_a: np.ndarray
    sx_b: np.ndarray
    blocks: list[ExcitationBlock]
    with_entropies: bool = True
    with_blocks: bool = False
    with_quad: bool = False
    quad_indices: dict[str, int] = field(default_factory=dict)

    def build_record(self, t: float, rho: np.ndarray) -> ObservableRecord:
        sx_va = float(np.real(np.trace(rho @ self.sx_a)))
        sx_vb = float(np.real(np.trace(rho @ self.sx_b)))
        if self.pair is not None:
            pop_p, pop_g, coh = pair_diagnostics(rho, self.pair)
        else:
            pop_p = pop_g = coh = math.nan
        if self.with_entropies:
            vn, purity = entropies(rho)
        else:
            vn = purity = math.nan
        rec = ObservableRecord(t=t, sx_A=sx_va, sx_B=sx_vb, pop_P=pop_p, pop_G=pop_g,
                               coh_PG=coh, purity=purity, vn_entropy=vn)
        if self.with_blocks:
            rec.block_populations = block_populations(rho, self.blocks)
        if self.with_quad:
            diag = np.real(np.diag(rho))
            rec.basis_populations = {name: float(diag[i])
                                     for name, i in self.quad_indices.items()}
        return rec


def make_context(params: ModelParams, *, with_entropies: bool = True,
                 with_blocks: bool = False, with_quad: bool = False,
                 pair: ProtectedPair | None = None) -> RecordContext:
    space = params.space
    sx_a = pauli_ops(space, "A")[3]
    sx_b = pauli_ops(space, "B")[3]
    if pair is None:
        try:
            pair = protected_pair(params)
        except Exception:
            pair = None
    quad = {}
    if with_quad:
        quad = {name: space.flat_index(*label) for name, label in QUAD_LABELS}
    return RecordContext(space=space, pair=pair, sx_a=sx_a, sx_b=sx_b,
                         blocks=excitation_blocks(space),
                         with_entropies=with_entropies, with_blocks=with_blocks,
                         with_quad=with_quad, quad_indices=quad)


# -- synchronization diagnostics --------------------------------------------

@dataclass
class SyncReport:
    """Dominant tail frequencies of the two qubit signals and their agreement."""

    freq_A: float
    freq_B: float
    common_freq: bool
    degenerate: bool
    grid_resolution: float
    window_correlation: np.ndarray

    @property
    def synchronized(self) -> bool:
        """Operational verdict: one shared tail frequency, strongly correlated."""
        if self.degenerate or not self.common_freq:
            return False
        finite = self.window_correlation[np.isfinite(self.window_correlation)]
        return finite.size > 0 and float(np.median(np.abs(finite))) > 0.99

    @property
    def mean_tail_correlation(self) -> float:
        finite = self.window_correlation[np.isfinite(self.window_correlation)]
        return float(np.mean(finite)) if finite.size else math.nan


_DEGENERATE_RMS = 1e-7


def _dominant_frequency(signal: np.ndarray, dt: float) -> float:
    """Angular frequency of the strongest non-DC spectral peak (Hann window,
    parabolic interpolation of the peak bin)."""
    x = signal - signal.mean()
    windowed = x * np.hanning(len(x))
    mag = np.abs(np.fft.rfft(windowed))
    if len(mag) < 4:
        raise ValueError("window too short for spectral analysis")
    k = 2 + int(np.argmax(mag[2:]))  # skip DC and its Hann-spread neighbour
    if 0 < k < len(mag) - 1:
        denom = mag[k - 1] - 2 * mag[k] + mag[k + 1]
        delta = 0.0 if denom == 0 else 0.5 * (mag[k - 1] - mag[k + 1]) / denom
        delta = float(np.clip(delta, -0.5, 0.5))
    else:
        delta = 0.0
    return 2 * math.pi * (k + delta) / (len(x) * dt)


def _sliding_correlation(sig_a: np.ndarray, sig_b: np.ndarray, window: int) -> np.ndarray:
    """Normalized Pearson correlation over every length-``window`` slice."""
    va = np.lib.stride_tricks.sliding_window_view(sig_a, window)
    vb = np.lib.stride_tricks.sliding_window_view(sig_b, window)
    da = va - va.mean(axis=1, keepdims=True)
    db = vb - vb.mean(axis=1, keepdims=True)
    num = (da * db).sum(axis=1)
    den = np.sqrt((da * da).sum(axis=1) * (db * db).sum(axis=1))
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(den > 0, num / den, np.nan)


def sync_diagnostics(times: np.ndarray, sig_a: np.ndarray, sig_b: np.ndarray,
                     expected_freq: float) -> SyncReport:
    """Analyze the tail (last quarter) of the two qubit signals.

    The analysis window must span at least ten periods of ``expected_freq``
    (the protected-ground transition frequency).  Signals whose detrended
    tail is flat are flagged degenerate: no oscillation survived.
    """
    times = np.asarray(times, dtype=float)
    sig_a = np.asarray(sig_a, dtype=float)
    sig_b = np.asarray(sig_b, dtype=float)
    if not (len(times) == len(sig_a) == len(sig_b)):
        raise ValueError("times and signals must have equal length")
    start = 3 * len(times) // 4
    tail_t = times[start:]
    dt = float(tail_t[1] - tail_t[0])
    duration = float(tail_t[-1] - tail_t[0])
    period = 2 * math.pi / expected_freq
    if duration < 10 * period:
        raise ValueError(f"analysis window {duration:g} spans fewer than 10 periods "
                         f"of the expected frequency {expected_freq:g}")

    tail_a = sig_a[start:]
    tail_b = sig_b[start:]
    resolution = 2 * math.pi / duration
    rms_a = float(np.sqrt(np.mean((tail_a - tail_a.mean()) ** 2)))
    rms_b = float(np.sqrt(np.mean((tail_b - tail_b.mean()) ** 2)))
    if max(rms_a, rms_b) < _DEGENERATE_RMS:
        return SyncReport(freq_A=0.0, freq_B=0.0, common_freq=False, degenerate=True,
                          grid_resolution=resolution,
                          window_correlation=np.full(1, np.nan))

    freq_a = _dominant_frequency(tail_a, dt)
    freq_b = _dominant_frequency(tail_b, dt)
    window = max(4, round(2 * period / dt))
    if window > len(tail_a):
        raise ValueError("correlation window longer than the analysis tail")
    corr = _sliding_correlation(tail_a, tail_b, window)
    return SyncReport(freq_A=freq_a, freq_B=freq_b,
                      common_freq=abs(freq_a - freq_b) < 2 * resolution,
                      degenerate=False, grid_resolution=resolution,
                      window_correlation=corr)
