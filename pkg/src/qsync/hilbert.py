"""Composite Hilbert space and elementary operators: resonator x qubit A x qubit B.

The basis ordering is fixed package-wide: the Fock index varies slowest, then
qubit A, then qubit B, i.e. ``flat = 4*n + 2*a + b`` with qubit levels
``a, b in {0: ground |->, 1: excited |+>}``.  Superoperator vectorization and
every cached operator depend on this ordering, so it must not change.

Everything here is dense complex numpy; the largest space used by the shipped
scenarios is d = 44, where dense arithmetic is both simpler and fast.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidTruncationError, TruncationLeakageError

LEVEL_DOWN = 0
LEVEL_UP = 1

_LEVEL_NAMES = {LEVEL_DOWN: "-", LEVEL_UP: "+"}


def parse_level(spec) -> int:
    """Map a qubit-level spec ('-'/'+' or 0/1) to the internal integer level."""
    if spec in (LEVEL_DOWN, LEVEL_UP):
        return int(spec)
    if spec == "-":
        return LEVEL_DOWN
    if spec == "+":
        return LEVEL_UP
    raise ValueError(f"unknown qubit level {spec!r}; expected '+', '-', 0 or 1")


def level_name(level: int) -> str:
    return _LEVEL_NAMES[level]


@dataclass(frozen=True)
class HilbertSpace:
    """Truncated resonator (Fock levels 0..n_max) tensored with two qubits."""

    n_max: int

    @property
    def dim(self) -> int:
        return 4 * (self.n_max + 1)

    def flat_index(self, n_phot: int, level_a: int, level_b: int) -> int:
        """Flat basis index of |n_phot> |level_a> |level_b>."""
        if not 0 <= n_phot <= self.n_max:
            raise ValueError(f"photon number {n_phot} outside [0, {self.n_max}]")
        if level_a not in (0, 1) or level_b not in (0, 1):
            raise ValueError("qubit levels must be 0 (ground) or 1 (excited)")
        return 4 * n_phot + 2 * level_a + level_b

    def basis_label(self, flat: int) -> tuple[int, int, int]:
        """Inverse of flat_index: (n_phot, level_a, level_b)."""
        if not 0 <= flat < self.dim:
            raise ValueError(f"flat index {flat} outside [0, {self.dim})")
        n_phot, rest = divmod(flat, 4)
        level_a, level_b = divmod(rest, 2)
        return n_phot, level_a, level_b

    def labels(self) -> list[tuple[int, int, int]]:
        return [self.basis_label(i) for i in range(self.dim)]

    def ket_name(self, flat: int) -> str:
        n, a, b = self.basis_label(flat)
        return f"|{n},{level_name(a)},{level_name(b)}>"

    def excitation_number(self, n_phot: int, level_a: int, level_b: int) -> int:
        """Total excitations: photons plus one per excited qubit."""
        return n_phot + level_a + level_b

    def excitation_numbers(self) -> np.ndarray:
        """Excitation number of every flat basis index, in order."""
        return np.array([self.excitation_number(*lbl) for lbl in self.labels()])

    def basis_state(self, n_phot, level_a, level_b) -> np.ndarray:
        """Unit ket on the composite space; qubit levels accept '+'/'-' too."""
        ket = np.zeros(self.dim, dtype=complex)
        ket[self.flat_index(n_phot, parse_level(level_a), parse_level(level_b))] = 1.0
        return ket


def build_space(n_max: int) -> HilbertSpace:
    """Construct the composite space for a resonator truncated at n_max photons."""
    if not isinstance(n_max, (int, np.integer)) or n_max < 1:
        raise InvalidTruncationError(f"n_max must be an integer >= 1, got {n_max!r}")
    return HilbertSpace(int(n_max))


# -- single-factor matrices ------------------------------------------------

def _qubit_sigma_z() -> np.ndarray:
    # levels ordered (|->, |+>), so sigma_z = diag(-1, +1)
    return np.diag([-1.0 + 0j, 1.0 + 0j])


def _qubit_sigma_plus() -> np.ndarray:
    sp = np.zeros((2, 2), dtype=complex)
    sp[LEVEL_UP, LEVEL_DOWN] = 1.0
    return sp


def _kron3(res_op: np.ndarray, a_op: np.ndarray, b_op: np.ndarray) -> np.ndarray:
    return np.kron(res_op, np.kron(a_op, b_op))


def identity(space: HilbertSpace) -> np.ndarray:
    return np.eye(space.dim, dtype=complex)


def ladder_ops(space: HilbertSpace) -> tuple[np.ndarray, np.ndarray]:
    """Annihilation and creation operators on the resonator factor.

    a |n> = sqrt(n) |n-1>; the creation operator is the conjugate transpose.
    """
    levels = space.n_max + 1
    a_res = np.diag(np.sqrt(np.arange(1, levels, dtype=float)), k=1).astype(complex)
    eye2 = np.eye(2, dtype=complex)
    a = _kron3(a_res, eye2, eye2)
    return a, a.conj().T


def pauli_ops(space: HilbertSpace, which_qubit: str):
    """Pauli operators (sigma_z, sigma_+, sigma_-, sigma_x, sigma_y) for one qubit.

    Circular operators follow sigma_pm = (sigma_x +- i sigma_y)/2, and every
    operator acts as the identity on the other two tensor factors.
    """
    if which_qubit not in ("A", "B"):
        raise ValueError(f"which_qubit must be 'A' or 'B', got {which_qubit!r}")
    sz1 = _qubit_sigma_z()
    sp1 = _qubit_sigma_plus()
    sm1 = sp1.conj().T
    sx1 = sp1 + sm1
    sy1 = -1j * sp1 + 1j * sm1
    eye_res = np.eye(space.n_max + 1, dtype=complex)
    eye2 = np.eye(2, dtype=complex)

    def embed(op):
        if which_qubit == "A":
            return _kron3(eye_res, op, eye2)
        return _kron3(eye_res, eye2, op)

    return embed(sz1), embed(sp1), embed(sm1), embed(sx1), embed(sy1)


def number_operator(space: HilbertSpace) -> np.ndarray:
    """Total excitation number: a^dag a + (sigma_z^A + sigma_z^B)/2 + 1.

    Diagonal with non-negative integer eigenvalues; |n,-,-> has eigenvalue n
    and each excited qubit adds one.
    """
    a, a_dag = ladder_ops(space)
    sz_a = pauli_ops(space, "A")[0]
    sz_b = pauli_ops(space, "B")[0]
    return a_dag @ a + 0.5 * (sz_a + sz_b) + identity(space)


def coherent_state(space: HilbertSpace, alpha: complex, level_a="-", level_b="-",
                   leak_tol: float = 1e-8) -> np.ndarray:
    """Truncated coherent state of the resonator, qubits in fixed levels.

    Amplitudes exp(-|alpha|^2/2) alpha^n / sqrt(n!) up to n_max, renormalized
    after truncation.  If the Poisson mass beyond n_max exceeds ``leak_tol``
    the truncation is rejected and the error names the n_max that would
    suffice.
    """
    mean = abs(alpha) ** 2
    log_probs = [-mean + n * math.log(mean) - math.lgamma(n + 1) if mean > 0 else
                 (0.0 if n == 0 else -math.inf)
                 for n in range(space.n_max + 1)]
    probs = np.exp(log_probs)
    tail = 1.0 - probs.sum()
    if tail > leak_tol:
        n_req = space.n_max
        remaining = tail
        while remaining > leak_tol and n_req < 100_000:
            n_req += 1
            remaining -= math.exp(-mean + n_req * math.log(mean) - math.lgamma(n_req + 1))
        raise TruncationLeakageError(
            f"coherent state alpha={alpha} leaks {tail:.3e} > {leak_tol:.3e} "
            f"past n_max={space.n_max}; n_max={n_req} would suffice",
            required_n_max=n_req,
        )
    amps_res = np.zeros(space.n_max + 1, dtype=complex)
    for n in range(space.n_max + 1):
        amps_res[n] = math.exp(-mean / 2 + 0.5 * (n * math.log(mean) - math.lgamma(n + 1))) \
            * np.exp(1j * n * np.angle(alpha)) if mean > 0 else (1.0 if n == 0 else 0.0)
    amps_res /= np.linalg.norm(amps_res)

    ket = np.zeros(space.dim, dtype=complex)
    ia, ib = parse_level(level_a), parse_level(level_b)
    for n in range(space.n_max + 1):
        ket[space.flat_index(n, ia, ib)] = amps_res[n]
    return ket


def normalize(ket: np.ndarray) -> np.ndarray:
    nrm = np.linalg.norm(ket)
    if nrm == 0:
        raise ValueError("cannot normalize the zero vector")
    return ket / nrm
