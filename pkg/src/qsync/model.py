"""Hamiltonian assembly, protected-state engineering and excitation blocks.

All frequencies, couplings and rates are expressed in units of the qubit-A
resonator coupling (kappa_A = 1 canonically); times are in inverse units of
the same coupling.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .errors import SingularCouplingError
from .hilbert import HilbertSpace, build_space, ladder_ops, pauli_ops

#: relative tolerance below which kappa_A^2 - kappa_B^2 counts as singular
SINGULAR_COUPLING_EPS = 1e-9


@dataclass(frozen=True)
class ModelParams:
    """Physical constants of the two-qubit / lossy-resonator model.

    Defaults are the canonical working point used throughout the shipped
    scenarios: qubit gaps 55 and 70, resonator at 64, kappa_B = 3.
    The qubit-qubit coupling defaults to 0; use :func:`tuned_kappa_AB` to
    obtain the decoupling value.
    """

    omega_A: float = 55.0
    omega_B: float = 70.0
    omega_r: float = 64.0
    kappa_A: float = 1.0
    kappa_B: float = 3.0
    kappa_AB: float = 0.0
    gamma_diss_r: float = 0.0
    gamma_diss_A: float = 0.0
    gamma_diss_B: float = 0.0
    gamma_deph_A: float = 0.0
    gamma_deph_B: float = 0.0
    n_max: int = 4

    def __post_init__(self):
        if self.kappa_A <= 0:
            raise ValueError(f"kappa_A must be > 0, got {self.kappa_A}")
        if self.kappa_B < 0:
            raise ValueError(f"kappa_B must be >= 0, got {self.kappa_B}")
        for name in ("gamma_diss_r", "gamma_diss_A", "gamma_diss_B",
                     "gamma_deph_A", "gamma_deph_B"):
            value = getattr(self, name)
            if value < 0:
                raise ValueError(f"{name} must be >= 0, got {value}")
        if not isinstance(self.n_max, (int, np.integer)) or self.n_max < 1:
            raise ValueError(f"n_max must be an integer >= 1, got {self.n_max!r}")

    @property
    def space(self) -> HilbertSpace:
        return build_space(self.n_max)

    def replace(self, **changes) -> "ModelParams":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class ProtectedPair:
    """The noise-protected state, the ground state, and their energies."""

    state_P: np.ndarray
    state_G: np.ndarray
    energy_P: float
    energy_G: float
    theta: float
    kappa_AB_tuned: float

    @property
    def transition_frequency(self) -> float:
        return self.energy_P - self.energy_G

    def __eq__(self, other):
        if not isinstance(other, ProtectedPair):
            return NotImplemented
        return (np.array_equal(self.state_P, other.state_P)
                and np.array_equal(self.state_G, other.state_G)
                and (self.energy_P, self.energy_G, self.theta, self.kappa_AB_tuned)
                == (other.energy_P, other.energy_G, other.theta, other.kappa_AB_tuned))


def build_hamiltonian(params: ModelParams) -> np.ndarray:
    """Rotating-wave Hamiltonian of the two qubits, resonator and couplings.

    H = sum_j (Omega_j/2) sigma_z^j + Omega_r a^dag a
        + sum_j kappa_j (sigma_+^j a + sigma_-^j a^dag)
        + kappa_AB (sigma_-^A sigma_+^B + sigma_+^A sigma_-^B)

    The qubit-resonator term is the Hermitian excitation-conserving form, so
    [H, N] = 0 for the total excitation number N.
    """
    space = params.space
    a, a_dag = ladder_ops(space)
    sz_a, sp_a, sm_a, _, _ = pauli_ops(space, "A")
    sz_b, sp_b, sm_b, _, _ = pauli_ops(space, "B")

    h = 0.5 * params.omega_A * sz_a + 0.5 * params.omega_B * sz_b
    h = h + params.omega_r * (a_dag @ a)
    h = h + params.kappa_A * (sp_a @ a + sm_a @ a_dag)
    h = h + params.kappa_B * (sp_b @ a + sm_b @ a_dag)
    h = h + params.kappa_AB * (sm_a @ sp_b + sp_a @ sm_b)
    return h


def tuned_kappa_AB(params: ModelParams) -> float:
    """Qubit-qubit coupling that makes the protected state a Hamiltonian eigenstate.

    kappa_AB = (Omega_A - Omega_B) kappa_A kappa_B / (kappa_A^2 - kappa_B^2)

    Raises SingularCouplingError when kappa_A^2 - kappa_B^2 is (numerically)
    zero: with equal qubit gaps any coupling works and no single value can be
    returned; with different gaps no coupling works at all.
    """
    denom = params.kappa_A ** 2 - params.kappa_B ** 2
    if abs(denom) <= SINGULAR_COUPLING_EPS * params.kappa_A ** 2:
        if params.omega_A == params.omega_B:
            raise SingularCouplingError(
                "kappa_A = kappa_B with equal qubit gaps: every kappa_AB keeps the "
                "protected state an eigenstate, so no unique tuned value exists")
        raise SingularCouplingError(
            "kappa_A = kappa_B with different qubit gaps: no qubit-qubit coupling "
            "can make the protected state a Hamiltonian eigenstate")
    return (params.omega_A - params.omega_B) * params.kappa_A * params.kappa_B / denom


def protected_pair(params: ModelParams) -> ProtectedPair:
    """Protected state |P>, ground state |G>, their energies and mixing angle.

    |P> = cos(theta) |0,+,-> + sin(theta) |0,-,+> with tan(theta) =
    -kappa_A/kappa_B, branch fixed to cos(theta) >= 0 so the global sign is
    deterministic.  Energies come from the closed forms; with the tuned
    qubit-qubit coupling H|P> = E_P |P> holds exactly.
    """
    kappa_ab = tuned_kappa_AB(params)
    theta = math.atan2(-params.kappa_A, params.kappa_B)
    space = params.space
    state_p = (math.cos(theta) * space.basis_state(0, "+", "-")
               + math.sin(theta) * space.basis_state(0, "-", "+"))
    state_g = space.basis_state(0, "-", "-")
    energy_p = ((params.omega_B - params.omega_A)
                * (params.kappa_A ** 2 + params.kappa_B ** 2)
                / (2.0 * (params.kappa_A ** 2 - params.kappa_B ** 2)))
    energy_g = -(params.omega_A + params.omega_B) / 2.0
    return ProtectedPair(state_P=state_p, state_G=state_g,
                         energy_P=energy_p, energy_G=energy_g,
                         theta=theta, kappa_AB_tuned=kappa_ab)


@dataclass(frozen=True)
class ExcitationBlock:
    """One excitation-number eigenspace: its label, basis indices, degeneracy."""

    n: int
    indices: tuple[int, ...]

    @property
    def degeneracy(self) -> int:
        return len(self.indices)


def excitation_blocks(space: HilbertSpace) -> list[ExcitationBlock]:
    """Partition of the flat basis by total excitation number, ascending.

    Away from the truncation edge the block sizes are 1 (n=0), 3 (n=1) and 4
    (2 <= n <= n_max); the last two blocks shrink to 3 and 1.
    """
    numbers = space.excitation_numbers()
    blocks = []
    for n in range(int(numbers.max()) + 1):
        idx = tuple(int(i) for i in np.flatnonzero(numbers == n))
        if idx:
            blocks.append(ExcitationBlock(n=n, indices=idx))
    return blocks
