"""Stationary-state analysis.

Under pure dephasing every excitation block relaxes to its microcanonical
state (the normalized block projector), and generically that is the only
stationary state the block admits.  This module builds microcanonical
states, measures stationarity residuals, and computes Liouvillian kernels by
singular-value decomposition, optionally restricted to one block's coherence
sector.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .hilbert import HilbertSpace, pauli_ops
from .liouvillian import Liouvillian, vec
from .model import ModelParams, build_hamiltonian, excitation_blocks

KERNEL_RTOL = 1e-10


def microcanonical_state(space: HilbertSpace, n: int) -> np.ndarray:
    """Uniform mixture over the block with n excitations: projector / degeneracy."""
    for block in excitation_blocks(space):
        if block.n == n:
            rho = np.zeros((space.dim, space.dim), dtype=complex)
            for i in block.indices:
                rho[i, i] = 1.0 / block.degeneracy
            return rho
    raise ValueError(f"no excitation block with n={n} in a space with n_max={space.n_max}")


def stationarity_residual(liouvillian: Liouvillian, rho: np.ndarray) -> float:
    """Max-abs entry of L vec(rho); zero for stationary states."""
    return float(np.abs(liouvillian.matrix @ vec(rho)).max())


@dataclass
class StationarySet:
    """Hermitian basis of a Liouvillian kernel (optionally block-restricted)."""

    block_label: int | None
    basis: list[np.ndarray]
    dimension: int


def _hermitian_kernel_basis(kernel_columns: np.ndarray, dim: int) -> list[np.ndarray]:
    """Turn a complex kernel basis into trace-normalized Hermitian matrices.

    Lindblad kernels are closed under conjugate transposition, so the
    Hermitian elements span the kernel over the reals.  Basis elements with
    usable trace are normalized to trace one, traceless ones to unit
    Frobenius norm.
    """
    candidates = []
    for col in kernel_columns.T:
        m = col.reshape((dim, dim), order="F")
        candidates.append((m + m.conj().T) / 2)
        candidates.append((m - m.conj().T) / 2j)
    basis: list[np.ndarray] = []
    for cand in candidates:
        for b in basis:
            cand = cand - np.real(np.trace(b.conj().T @ cand)) * b
        nrm = float(np.linalg.norm(cand))
        if nrm > 1e-8:
            basis.append(cand / nrm)
    if len(basis) > kernel_columns.shape[1]:
        basis = basis[:kernel_columns.shape[1]]
    out = []
    for b in basis:
        tr = float(np.real(np.trace(b)))
        out.append(b / tr if abs(tr) > 1e-8 else b)
    return out


def kernel_dimension(liouvillian: Liouvillian, block: int | None = None) -> StationarySet:
    """Kernel of the superoperator via SVD (singular values < 1e-10 of the largest).

    With ``block`` given, the superoperator is restricted to the coherence
    sector |i><j| with both i and j in that excitation block; this is exact
    for the pure-dephasing generator, which never leaves the sector.
    """
    if block is None:
        matrix = liouvillian.matrix
        dim = liouvillian.dim
        sector = None
    else:
        blocks = {b.n: b for b in excitation_blocks(liouvillian.space)}
        if block not in blocks:
            raise ValueError(f"no excitation block with n={block}")
        idx = np.array(blocks[block].indices)
        d = liouvillian.dim
        sector = (idx[:, None] + d * idx[None, :]).reshape(-1, order="F")
        matrix = liouvillian.matrix[np.ix_(sector, sector)]
        dim = len(idx)

    _, s, vh = np.linalg.svd(matrix)
    cutoff = KERNEL_RTOL * s[0] if s[0] > 0 else np.inf
    kernel_vecs = vh[s < cutoff].conj().T
    if kernel_vecs.size == 0:
        return StationarySet(block_label=block, basis=[], dimension=0)
    basis_small = _hermitian_kernel_basis(kernel_vecs, dim)
    if sector is None:
        basis = basis_small
    else:
        basis = []
        for small in basis_small:
            full = np.zeros((liouvillian.dim, liouvillian.dim), dtype=complex)
            idx = np.array(blocks[block].indices)
            full[np.ix_(idx, idx)] = small
            basis.append(full)
    return StationarySet(block_label=block, basis=basis, dimension=kernel_vecs.shape[1])


def dephasing_uniqueness_caveats(params: ModelParams, tol: float = 1e-8) -> list[str]:
    """Detect parameter sets where the microcanonical state may not be unique.

    The pure-dephasing stationary state can differ from the microcanonical
    one only when some Hamiltonian eigenvector is mapped by a sigma_z
    operator onto (a phase times) a Hamiltonian eigenvector, within a block
    of dimension at least two.  Returns human-readable warnings, one per
    offending (block, qubit, eigenvector) triple; empty at generic
    parameters.
    """
    space = params.space
    h = build_hamiltonian(params)
    flags = []
    for block in excitation_blocks(space):
        if block.degeneracy < 2:
            continue
        idx = np.array(block.indices)
        hb = h[np.ix_(idx, idx)]
        _, vecs = np.linalg.eigh(hb)
        for qubit in ("A", "B"):
            sz = pauli_ops(space, qubit)[0][np.ix_(idx, idx)]
            overlap = np.abs(vecs.conj().T @ sz @ vecs)
            for col in range(overlap.shape[1]):
                peak = overlap[:, col].max()
                if peak > 1 - tol:
                    flags.append(
                        f"block n={block.n}: sigma_z^{qubit} maps eigenvector {col} onto "
                        f"an eigenvector (overlap {peak:.12f}); microcanonical uniqueness "
                        f"is not guaranteed here")
    for flag in flags:
        warnings.warn(flag, stacklevel=2)
    return flags
