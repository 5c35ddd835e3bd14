import numpy as np
import pytest

import qsync as q


@pytest.fixture(scope="session")
def default_params():
    return q.ModelParams()


@pytest.fixture(scope="session")
def tuned_params():
    p = q.ModelParams(gamma_diss_r=0.5)
    return p.replace(kappa_AB=q.tuned_kappa_AB(p))


@pytest.fixture(scope="session")
def pair(tuned_params):
    return q.protected_pair(tuned_params)


@pytest.fixture(scope="session")
def fig1_result():
    """The synchronization preset, shared by the observables tests."""
    return q.run_scenario(q.load_preset("fig1"))


def random_density(dim: int, seed: int, rank: int | None = None) -> np.ndarray:
    """Seeded random density matrix (Hermitian, unit trace, PSD)."""
    rng = np.random.default_rng(seed)
    r = rank or dim
    m = rng.standard_normal((dim, r)) + 1j * rng.standard_normal((dim, r))
    rho = m @ m.conj().T
    return rho / np.trace(rho)


def random_hermitian(dim: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    m = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (m + m.conj().T) / 2
