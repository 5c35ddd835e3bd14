import numpy as np
import pytest
import scipy.sparse as sp

import qsync as q
from qsync.hilbert import number_operator
from qsync.liouvillian import Liouvillian, coherence_sector_mask
from qsync.propagate import StepPropagator

from conftest import random_density


def outer(ket):
    return np.outer(ket, ket.conj())


def test_stationary_ground_state_trajectory():
    params = q.ModelParams(kappa_A=1e-12, kappa_B=0.0, kappa_AB=0.0)
    liouvillian = q.build_liouvillian(params)
    g = params.space.basis_state(0, "-", "-")
    traj = q.propagate_expm(liouvillian, outer(g), np.linspace(0, 5, 11),
                            retain_states=True)
    for state in traj.states:
        assert np.abs(state - outer(g)).max() < 1e-12


def test_closed_system_preserves_purity(tuned_params):
    params = tuned_params.replace(gamma_diss_r=0.0)
    liouvillian = q.build_liouvillian(params)
    rho0 = outer(params.space.basis_state(1, "-", "-"))
    traj = q.propagate_expm(liouvillian, rho0, np.linspace(0, 10, 201),
                            retain_states=True)
    for state in traj.states:
        assert abs(np.real(np.trace(state @ state)) - 1.0) < 1e-9


def test_dark_pair_coherence_rotates(tuned_params, pair):
    liouvillian = q.build_liouvillian(tuned_params)
    psi = (pair.state_P + pair.state_G) / np.sqrt(2)
    times = np.linspace(0, 2, 401)
    traj = q.propagate_expm(liouvillian, outer(psi), times, retain_states=True)
    coh = np.array([pair.state_P.conj() @ s @ pair.state_G for s in traj.states])
    assert np.abs(np.abs(coh) - 0.5).max() < 1e-6
    phase = np.unwrap(np.angle(coh))
    slopes = np.diff(phase) / np.diff(times)
    assert np.abs(slopes + pair.transition_frequency).max() < 1e-6


def test_semigroup_property(tuned_params):
    liouvillian = q.build_liouvillian(tuned_params.replace(
        gamma_deph_A=0.003, gamma_deph_B=0.003))
    dt = 0.025
    one = StepPropagator(liouvillian, dt).as_dense()
    two = StepPropagator(liouvillian, 2 * dt).as_dense()
    assert np.abs(two - one @ one).max() < 1e-11


def test_monotone_excitation_loss(fig1_result):
    params = fig1_result.config.model
    n_op = number_operator(params.space)
    liouvillian = q.build_liouvillian(params)
    rho0 = outer((np.sqrt(0.5) * params.space.basis_state(2, "-", "-")
                  + np.sqrt(0.5) * params.space.basis_state(1, "+", "-")))
    traj = q.propagate_expm(liouvillian, rho0, np.linspace(0, 40, 801),
                            retain_states=True)
    means = np.array([np.real(np.trace(s @ n_op)) for s in traj.states])
    assert np.all(np.diff(means) < 1e-9)


def test_asymptotic_support_on_protected_pair(tuned_params, pair):
    # the slowest Liouvillian mode at these parameters decays at 0.0275, so
    # the 1e-4 support level is reached around t = 59/gamma_r; 75/gamma_r
    # leaves margin
    liouvillian = q.build_liouvillian(tuned_params)
    space = tuned_params.space
    psi = 0.5 * pair.state_P + 0.5 * pair.state_G \
        + np.sqrt(0.5) * space.basis_state(1, "-", "-")
    t_end = 75.0 / tuned_params.gamma_diss_r
    traj = q.propagate_expm(liouvillian, outer(psi), np.linspace(0, t_end, 401),
                            retain_states=True)
    outside = []
    for state in traj.states[200:]:
        pop_p = np.real(pair.state_P.conj() @ state @ pair.state_P)
        pop_g = np.real(pair.state_G.conj() @ state @ pair.state_G)
        outside.append(1.0 - (pop_p + pop_g))
    assert outside[-1] < 1e-4
    assert np.all(np.diff(outside) < 1e-12)  # monotone convergence


def test_integrator_agrees_with_expm(tuned_params, pair):
    times = np.linspace(0, 10, 101)
    cases = []
    g = tuned_params.space.basis_state(0, "-", "-")
    cases.append((tuned_params.replace(gamma_diss_r=0.0), outer(g)))
    cases.append((tuned_params.replace(gamma_diss_r=0.0),
                  outer(tuned_params.space.basis_state(1, "-", "-"))))
    psi = (pair.state_P + pair.state_G) / np.sqrt(2)
    cases.append((tuned_params, outer(psi)))
    for params, rho0 in cases:
        expm_traj = q.propagate_expm(q.build_liouvillian(params), rho0, times,
                                     retain_states=True)
        int_traj = q.propagate_integrator(params, rho0, times, tol=1e-9)
        diff = max(np.abs(a - b).max()
                   for a, b in zip(expm_traj.states, int_traj.states))
        assert diff < 1e-8


def test_integrator_crosscheck_fig1_sigma_x(fig1_result):
    params = fig1_result.config.model
    space = params.space
    pair = q.protected_pair(params)
    psi = 0.5 * pair.state_P + 0.5 * pair.state_G \
        + np.sqrt(0.5) * space.basis_state(1, "-", "-")
    times = np.linspace(0, 10, 401)
    ctx = q.make_context(params, pair=pair)
    expm_traj = q.propagate_expm(q.build_liouvillian(params), outer(psi), times,
                                 record_fn=ctx.build_record)
    int_traj = q.propagate_integrator(params, outer(psi), times, tol=1e-10,
                                      record_fn=ctx.build_record)
    sx_expm = np.array([r.sx_A for r in expm_traj.records])
    sx_int = np.array([r.sx_A for r in int_traj.records])
    assert np.abs(sx_expm - sx_int).max() < 1e-7


def test_pure_dephasing_conserves_excitation_number(tuned_params):
    params = tuned_params.replace(gamma_diss_r=0.0,
                                  gamma_deph_A=0.003, gamma_deph_B=0.003)
    space = params.space
    n_op = number_operator(space)
    psi = (space.basis_state(0, "+", "+") + space.basis_state(2, "-", "-")) / np.sqrt(2)
    traj = q.propagate_expm(q.build_liouvillian(params), outer(psi),
                            np.linspace(0, 100, 501), retain_states=True)
    means = np.array([np.real(np.trace(s @ n_op)) for s in traj.states])
    assert np.abs(means - means[0]).max() < 1e-10


def test_restricted_evolution_matches_full(tuned_params, pair):
    space = tuned_params.space
    psi = 0.5 * pair.state_P + 0.5 * pair.state_G \
        + np.sqrt(0.5) * space.basis_state(1, "-", "-")
    liouvillian = q.build_liouvillian(tuned_params)
    times = np.linspace(0, 5, 26)
    mask = coherence_sector_mask(space, {0, 1})
    full = q.propagate_expm(liouvillian, outer(psi), times, retain_states=True)
    seen = []
    q.propagate_expm(liouvillian, outer(psi), times,
                     record_fn=lambda t, rho: seen.append(rho), needed_mask=mask)
    diff_mask = np.reshape(mask, (space.dim, space.dim), order="F")
    for rho_full, rho_part in zip(full.states, seen):
        # the full path symmetrizes periodically, so agreement is to roundoff
        assert np.abs((rho_full - rho_part)[diff_mask]).max() < 1e-13


def test_non_uniform_grid_rejected(tuned_params):
    liouvillian = q.build_liouvillian(tuned_params)
    rho0 = outer(tuned_params.space.basis_state(0, "-", "-"))
    with pytest.raises(ValueError, match="uniform"):
        q.propagate_expm(liouvillian, rho0, np.array([0.0, 1.0, 3.0]))


def test_retention_requires_full_evolution(tuned_params):
    liouvillian = q.build_liouvillian(tuned_params)
    rho0 = outer(tuned_params.space.basis_state(0, "-", "-"))
    mask = coherence_sector_mask(tuned_params.space, {0})
    with pytest.raises(ValueError, match="retention"):
        q.propagate_expm(liouvillian, rho0, np.linspace(0, 1, 3),
                         retain_states=True, needed_mask=mask)


def test_integrator_tolerance_range(tuned_params):
    rho0 = outer(tuned_params.space.basis_state(0, "-", "-"))
    with pytest.raises(ValueError, match="tol"):
        q.propagate_integrator(tuned_params, rho0, np.linspace(0, 1, 3), tol=1e-3)


def test_invariant_violation_detected(tuned_params):
    # a trace-breaking generator must abort, not silently continue
    space = tuned_params.space
    d = space.dim
    bad = sp.identity(d * d, dtype=complex, format="csr") * 0.5
    liouvillian = Liouvillian(dim=d, space=space, sparse=bad)
    rho0 = outer(space.basis_state(0, "-", "-"))
    with pytest.raises(q.InvariantViolationError, match="trace"):
        q.propagate_expm(liouvillian, rho0, np.linspace(0, 2, 5))
