import numpy as np
import pytest

import qsync as q
from qsync.hilbert import number_operator, pauli_ops
from qsync.liouvillian import coherence_sector_mask, trace_vector, vec
from qsync.model import excitation_blocks

from conftest import random_density, random_hermitian


def test_dissipator_sigma_z_form(default_params):
    space = default_params.space
    sz = pauli_ops(space, "A")[0]
    rho = random_density(space.dim, seed=1)
    out = q.dissipator_apply(sz, rho)
    assert np.abs(out - (sz @ rho @ sz - rho)).max() < 1e-14


def test_dissipator_vacuum_dark(default_params):
    space = default_params.space
    a, _ = q.ladder_ops(space)
    g = space.basis_state(0, "-", "-")
    assert np.abs(q.dissipator_apply(a, np.outer(g, g.conj()))).max() == 0


def test_dissipator_single_photon_decay(default_params):
    space = default_params.space
    a, _ = q.ladder_ops(space)
    one = space.basis_state(1, "-", "-")
    g = space.basis_state(0, "-", "-")
    out = q.dissipator_apply(a, np.outer(one, one.conj()))
    expected = np.outer(g, g.conj()) - np.outer(one, one.conj())
    assert np.abs(out - expected).max() < 1e-14


def test_dissipator_traceless_and_hermiticity_preserving(tuned_params):
    for ch in q.channels(tuned_params.replace(
            gamma_diss_r=0.5, gamma_diss_A=0.1, gamma_diss_B=0.1,
            gamma_deph_A=0.2, gamma_deph_B=0.2)):
        for seed in range(5):
            rho = random_density(tuned_params.space.dim, seed=seed)
            out = q.dissipator_apply(ch.jump_operator, rho)
            assert abs(np.trace(out)) < 1e-12
            assert np.abs(out - out.conj().T).max() < 1e-12


def test_dissipator_shape_mismatch(default_params):
    a, _ = q.ladder_ops(default_params.space)
    with pytest.raises(ValueError, match="shape"):
        q.dissipator_apply(a, np.eye(3, dtype=complex))


def test_superoperator_matches_direct_rhs():
    params = q.ModelParams(gamma_diss_r=0.5, gamma_diss_A=0.0002, gamma_diss_B=0.0002,
                           gamma_deph_A=0.003, gamma_deph_B=0.003, kappa_AB=5.625)
    liouvillian = q.build_liouvillian(params)
    for seed in range(20):
        rho = random_hermitian(params.space.dim, seed=seed)
        direct = q.apply_rhs(params, rho)
        assert np.abs(liouvillian.apply(rho) - direct).max() < 1e-12


def test_closed_system_is_pure_commutator():
    params = q.ModelParams(kappa_AB=5.625)
    liouvillian = q.build_liouvillian(params)
    h = q.build_hamiltonian(params)
    eye = np.eye(params.space.dim)
    expected = -1j * (np.kron(eye, h) - np.kron(h.T, eye))
    assert np.abs(liouvillian.matrix - expected).max() < 1e-14


def test_trace_preservation_row():
    params = q.ModelParams(gamma_diss_r=0.5, gamma_deph_A=0.003, gamma_deph_B=0.003,
                           kappa_AB=5.625)
    liouvillian = q.build_liouvillian(params)
    row = trace_vector(liouvillian.dim).conj() @ liouvillian.matrix
    assert np.abs(row).max() < 1e-12


def test_pure_dephasing_mode_channels(tuned_params):
    params = tuned_params.replace(gamma_diss_r=0.5, gamma_deph_A=0.003, gamma_deph_B=0.003)
    chans = q.channels(params, mode="pure_dephasing")
    assert [c.name for c in chans] == ["deph_A", "deph_B"]
    # mode selects sigma_z channels only, regardless of dissipation rates
    ld = q.build_liouvillian(params, mode="pure_dephasing")
    rho = random_hermitian(params.space.dim, seed=3)
    sz_a = pauli_ops(params.space, "A")[0]
    sz_b = pauli_ops(params.space, "B")[0]
    h = q.build_hamiltonian(params)
    expected = -1j * (h @ rho - rho @ h)
    expected += 0.003 * (sz_a @ rho @ sz_a - rho) + 0.003 * (sz_b @ rho @ sz_b - rho)
    assert np.abs(ld.apply(rho) - expected).max() < 1e-12


def test_unknown_mode(default_params):
    with pytest.raises(ValueError, match="mode"):
        q.channels(default_params, mode="thermal")


def test_negative_rate_rejected(default_params):
    a, _ = q.ladder_ops(default_params.space)
    with pytest.raises(ValueError, match="rate"):
        q.Channel("bad", a, -0.1)


def test_pure_dephasing_preserves_blocks(tuned_params):
    params = tuned_params.replace(gamma_deph_A=0.003, gamma_deph_B=0.003)
    ld = q.build_liouvillian(params, mode="pure_dephasing")
    space = params.space
    for block in excitation_blocks(space):
        idx = np.array(block.indices)
        rho = np.zeros((space.dim, space.dim), dtype=complex)
        rho[np.ix_(idx, idx)] = random_density(len(idx), seed=block.n)
        out = ld.apply(rho)
        mask = np.zeros((space.dim, space.dim), dtype=bool)
        mask[np.ix_(idx, idx)] = True
        assert np.abs(out[~mask]).max() < 1e-13


def test_dissipation_flows_downward_only(tuned_params):
    params = tuned_params  # resonator dissipation only
    blocks = excitation_blocks(params.space)
    for n in (1, 2):
        idx = np.array(blocks[n].indices)
        rho = np.zeros((params.space.dim,) * 2, dtype=complex)
        rho[np.ix_(idx, idx)] = random_density(len(idx), seed=10 + n)
        drho = q.apply_rhs(params, rho)
        diag = np.real(np.diag(drho))
        for block in blocks:
            flow = diag[list(block.indices)].sum()
            if block.n < n:
                assert flow >= -1e-14
            elif block.n > n:
                assert abs(flow) < 1e-14


def test_dark_pair_under_resonator_loss(tuned_params, pair):
    liouvillian = q.build_liouvillian(tuned_params)
    rho_p = np.outer(pair.state_P, pair.state_P.conj())
    rho_g = np.outer(pair.state_G, pair.state_G.conj())
    assert np.abs(liouvillian.apply(rho_p)).max() < 1e-12
    assert np.abs(liouvillian.apply(rho_g)).max() < 1e-12
    coherence = np.outer(pair.state_P, pair.state_G.conj())
    out = liouvillian.apply(coherence)
    expected = -1j * pair.transition_frequency * coherence
    assert np.abs(out - expected).max() < 1e-10


def test_ground_state_globally_dark():
    params = q.ModelParams(gamma_diss_r=0.5, gamma_diss_A=0.0002, gamma_diss_B=0.0002,
                           gamma_deph_A=0.003, gamma_deph_B=0.003, kappa_AB=5.625)
    g = params.space.basis_state(0, "-", "-")
    out = q.apply_rhs(params, np.outer(g, g.conj()))
    assert np.abs(out).max() < 1e-14


def test_apply_rhs_shape_mismatch(default_params):
    with pytest.raises(ValueError, match="shape"):
        q.apply_rhs(default_params, np.eye(5, dtype=complex))


def test_invariant_blocks_are_excitation_chains(tuned_params):
    liouvillian = q.build_liouvillian(tuned_params.replace(
        gamma_deph_A=0.003, gamma_deph_B=0.003))
    numbers = tuned_params.space.excitation_numbers()
    d = liouvillian.dim
    union = np.concatenate(liouvillian.invariant_blocks())
    assert sorted(union) == list(range(d * d))
    for idx in liouvillian.invariant_blocks():
        rows = idx % d
        cols = idx // d
        diffs = set(numbers[rows] - numbers[cols])
        assert len(diffs) == 1


def test_coherence_sector_mask(default_params):
    space = default_params.space
    mask = coherence_sector_mask(space, {0, 1})
    numbers = space.excitation_numbers()
    diff = numbers[:, None] - numbers[None, :]
    assert np.array_equal(mask, vec(np.isin(diff, [0, 1])))
