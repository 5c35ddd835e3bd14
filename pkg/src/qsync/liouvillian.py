"""Lindblad dissipators and the master-equation superoperator.

The master equation is

    drho/dt = -i [H, rho] + gamma_r D[a] rho
              + sum_j gamma_diss_j D[sigma_-^j] rho
              + sum_j gamma_deph_j D[sigma_z^j] rho,

with D[X] rho = X rho X^dag - {X^dag X, rho}/2.  Dephasing rates multiply
D[sigma_z] as written, with no factor-of-two renormalization.

Vectorization is column-stacking: vec(rho)[i + d*j] = rho[i, j], for which
vec(A rho B) = (B^T kron A) vec(rho).  The superoperator is assembled sparse
(kron of sparse factors) and stored dense; d <= 44 for every shipped scenario
so a dense d^2 x d^2 matrix is at most ~60 MB.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np
import scipy.sparse as sp

from .hilbert import HilbertSpace, ladder_ops, pauli_ops
from .model import ModelParams, build_hamiltonian

VEC_COLUMN_STACKED = "column-stacked"

Mode = Literal["full", "pure_dephasing"]


def vec(rho: np.ndarray) -> np.ndarray:
    """Column-stack a matrix into a vector."""
    return rho.reshape(-1, order="F")


def unvec(v: np.ndarray, dim: int) -> np.ndarray:
    """Inverse of :func:`vec`."""
    return v.reshape((dim, dim), order="F")


@dataclass(frozen=True)
class Channel:
    """One Lindblad noise channel: jump operator and non-negative rate."""

    name: str
    jump_operator: np.ndarray
    rate: float

    def __post_init__(self):
        if self.rate < 0:
            raise ValueError(f"channel {self.name}: rate must be >= 0, got {self.rate}")


@dataclass
class Liouvillian:
    """Superoperator acting on column-stacked density matrices.

    Assembled and held sparse; the dense d^2 x d^2 form is materialized on
    first access of ``matrix`` (at most ~60 MB for the largest shipped space)
    and cached.  Evolution slices the invariant blocks straight out of the
    sparse form instead.
    """

    dim: int                 # Hilbert-space dimension d; the matrix is d^2 x d^2
    space: HilbertSpace
    sparse: sp.csr_matrix
    vec_convention: str = VEC_COLUMN_STACKED
    _dense: np.ndarray | None = field(default=None, repr=False)
    _blocks: list[np.ndarray] | None = field(default=None, repr=False)

    @property
    def matrix(self) -> np.ndarray:
        if self._dense is None:
            self._dense = self.sparse.toarray()
        return self._dense

    def block_matrix(self, idx: np.ndarray) -> np.ndarray:
        """Dense submatrix on the given superoperator indices."""
        return self.sparse[idx][:, idx].toarray()

    def apply(self, rho: np.ndarray) -> np.ndarray:
        """L acting on a density matrix, returned as a matrix."""
        return unvec(self.sparse @ vec(rho), self.dim)

    def invariant_blocks(self) -> list[np.ndarray]:
        """Index sets of the connected components of the matrix support.

        Exact zero structure only; the components are invariant subspaces, so
        exponentials and evolutions may be computed block by block.  Cached.
        """
        if self._blocks is None:
            pattern = sp.csr_matrix(
                (np.ones(self.sparse.nnz, dtype=np.int8),
                 self.sparse.indices, self.sparse.indptr),
                shape=self.sparse.shape)
            n_comp, labels = sp.csgraph.connected_components(
                pattern, directed=True, connection="weak")
            self._blocks = [np.flatnonzero(labels == c) for c in range(n_comp)]
        return self._blocks


def dissipator_apply(jump_operator: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """D[X] rho = X rho X^dag - (X^dag X rho + rho X^dag X)/2."""
    x = jump_operator
    if x.shape != rho.shape or x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise ValueError(f"shape mismatch: jump operator {x.shape} vs rho {rho.shape}")
    xdx = x.conj().T @ x
    return x @ rho @ x.conj().T - 0.5 * (xdx @ rho + rho @ xdx)


def channels(params: ModelParams, mode: Mode = "full") -> list[Channel]:
    """Noise channels of the master equation for the given parameters.

    ``full`` includes resonator decay, local qubit decay and local qubit
    dephasing; ``pure_dephasing`` keeps only the two sigma_z channels.
    There are no thermal (upward) channels.
    """
    space = params.space
    a, _ = ladder_ops(space)
    sz_a, _, sm_a, _, _ = pauli_ops(space, "A")
    sz_b, _, sm_b, _, _ = pauli_ops(space, "B")
    deph = [Channel("deph_A", sz_a, params.gamma_deph_A),
            Channel("deph_B", sz_b, params.gamma_deph_B)]
    if mode == "pure_dephasing":
        return deph
    if mode != "full":
        raise ValueError(f"unknown mode {mode!r}; expected 'full' or 'pure_dephasing'")
    return [Channel("diss_r", a, params.gamma_diss_r),
            Channel("diss_A", sm_a, params.gamma_diss_A),
            Channel("diss_B", sm_b, params.gamma_diss_B),
            *deph]


def build_liouvillian(params: ModelParams, mode: Mode = "full") -> Liouvillian:
    """Assemble the master-equation superoperator for the given parameters."""
    space = params.space
    d = space.dim
    h = sp.csr_matrix(build_hamiltonian(params))
    eye = sp.identity(d, dtype=complex, format="csr")

    lmat = -1j * (sp.kron(eye, h, format="csr") - sp.kron(h.T, eye, format="csr"))
    for ch in channels(params, mode):
        if ch.rate == 0.0:
            continue
        x = sp.csr_matrix(ch.jump_operator)
        xdx = (x.conj().T @ x).tocsr()
        dissipator = (sp.kron(x.conj(), x, format="csr")
                      - 0.5 * sp.kron(eye, xdx, format="csr")
                      - 0.5 * sp.kron(xdx.T, eye, format="csr"))
        lmat = lmat + ch.rate * dissipator
    lmat.eliminate_zeros()
    return Liouvillian(dim=d, space=space, sparse=lmat)


def rhs_function(hamiltonian: np.ndarray, channel_list: list[Channel]):
    """Direct (superoperator-free) evaluator of the master-equation right side.

    Returns a closure rho -> drho/dt using plain matrix products; this is the
    independent route checked against the vectorized Liouvillian.
    """
    precomputed = [(ch.rate, ch.jump_operator, ch.jump_operator.conj().T @ ch.jump_operator)
                   for ch in channel_list if ch.rate > 0.0]

    def rhs(rho: np.ndarray) -> np.ndarray:
        out = -1j * (hamiltonian @ rho - rho @ hamiltonian)
        for rate, x, xdx in precomputed:
            out += rate * (x @ rho @ x.conj().T - 0.5 * (xdx @ rho + rho @ xdx))
        return out

    return rhs


def apply_rhs(params: ModelParams, rho: np.ndarray, mode: Mode = "full") -> np.ndarray:
    """Evaluate the master-equation right side directly on a density matrix."""
    d = params.space.dim
    if rho.shape != (d, d):
        raise ValueError(f"shape mismatch: rho {rho.shape} vs space dimension {d}")
    return rhs_function(build_hamiltonian(params), channels(params, mode))(rho)


def coherence_sector_mask(space: HilbertSpace, differences) -> np.ndarray:
    """Boolean mask over vec indices whose excitation difference is in ``differences``.

    Entry rho[i, j] lives in the sector N(i) - N(j); the master-equation flow
    never mixes sectors with different differences, so restricting evolution
    to the sectors an observable reads from is exact.
    """
    numbers = space.excitation_numbers()
    diff = numbers[:, None] - numbers[None, :]
    wanted = np.isin(diff, np.asarray(list(differences)))
    return vec(wanted)


def trace_vector(dim: int) -> np.ndarray:
    """vec(I), so that trace(rho) = trace_vector . vec(rho)."""
    return vec(np.eye(dim, dtype=complex))
