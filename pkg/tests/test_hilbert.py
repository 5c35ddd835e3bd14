import math

import numpy as np
import pytest

import qsync as q
from qsync.hilbert import build_space, coherent_state, ladder_ops, number_operator, pauli_ops


def test_space_dimensions():
    assert build_space(1).dim == 8
    assert build_space(4).dim == 20
    assert build_space(10).dim == 44


def test_invalid_truncation():
    with pytest.raises(q.InvalidTruncationError):
        build_space(0)
    with pytest.raises(q.InvalidTruncationError):
        build_space(-3)


def test_flat_index_round_trip_exhaustive():
    space = build_space(5)
    for flat in range(space.dim):
        n, a, b = space.basis_label(flat)
        assert space.flat_index(n, a, b) == flat
    # ordering: resonator slowest, then qubit A, then qubit B
    assert space.flat_index(0, 0, 0) == 0
    assert space.flat_index(0, 0, 1) == 1
    assert space.flat_index(0, 1, 0) == 2
    assert space.flat_index(1, 0, 0) == 4


def test_ladder_matrix_elements():
    space = build_space(4)
    a, a_dag = ladder_ops(space)
    ket0 = space.basis_state(0, "-", "-")
    ket1 = space.basis_state(1, "-", "-")
    ket2 = space.basis_state(2, "-", "-")
    assert ket0.conj() @ a @ ket1 == pytest.approx(1.0)
    assert ket1.conj() @ a @ ket2 == pytest.approx(math.sqrt(2), abs=1e-15)
    assert np.all(a @ ket0 == 0)
    assert np.array_equal(a_dag, a.conj().T)


def test_ladder_commutator_below_truncation():
    space = build_space(6)
    a, a_dag = ladder_ops(space)
    comm = a @ a_dag - a_dag @ a
    # identity except on the truncation edge Fock level
    for flat in range(space.dim):
        n, ia, ib = space.basis_label(flat)
        if n < space.n_max:
            assert abs(comm[flat, flat] - 1.0) < 1e-14
    off_diag = comm - np.diag(np.diag(comm))
    assert np.abs(off_diag).max() < 1e-14


def test_pauli_actions_and_identities():
    space = build_space(2)
    sz, sp, sm, sx, sy = pauli_ops(space, "A")
    ket = space.basis_state(1, "-", "-")
    raised = sp @ ket
    assert np.array_equal(raised, space.basis_state(1, "+", "-"))
    assert np.abs(sx - (sp + sm)).max() == 0
    assert np.abs(sp - (sx + 1j * sy) / 2).max() < 1e-15
    assert np.abs(sm - (sx - 1j * sy) / 2).max() < 1e-15
    # sigma_z eigenvalues on its own factor
    assert sz @ space.basis_state(0, "+", "-") @ space.basis_state(0, "+", "-").conj() == 1
    # completeness on the qubit factor
    ident = sp @ sm + sm @ sp
    assert np.abs(ident - np.eye(space.dim)).max() < 1e-14


def test_disjoint_factors_commute():
    space = build_space(3)
    ops_a = pauli_ops(space, "A")
    ops_b = pauli_ops(space, "B")
    a, a_dag = ladder_ops(space)
    for x in ops_a:
        for y in ops_b:
            assert np.abs(x @ y - y @ x).max() < 1e-14
    for x in ops_a + ops_b:
        assert np.abs(x @ a - a @ x).max() < 1e-14
    assert np.abs(ops_a[0] @ ops_b[0] - ops_b[0] @ ops_a[0]).max() == 0


def test_number_operator_eigenvalues():
    space = build_space(4)
    n_op = number_operator(space)
    for label, expected in [((0, 0, 0), 0), ((0, 1, 0), 1), ((2, 0, 0), 2),
                            ((0, 1, 1), 2), ((1, 0, 1), 2), ((4, 1, 1), 6)]:
        ket = space.basis_state(*label)
        assert np.abs(n_op @ ket - expected * ket).max() < 1e-14
    # diagonal with non-negative integer spectrum
    diag = np.diag(n_op).real
    assert np.abs(n_op - np.diag(diag.astype(complex))).max() == 0
    assert np.all(diag >= 0)
    assert np.allclose(diag, np.round(diag))


def test_coherent_vacuum():
    space = build_space(4)
    ket = coherent_state(space, 0.0)
    assert np.array_equal(ket, space.basis_state(0, "-", "-"))


def test_coherent_mean_photon_number():
    # independent oracle: the truncated Poisson series summed directly
    n_max = 10
    probs = np.array([math.exp(-1.0) / math.factorial(n) for n in range(n_max + 1)])
    expected_mean = (np.arange(n_max + 1) * probs).sum() / probs.sum()

    space = build_space(n_max)
    ket = coherent_state(space, 1.0, leak_tol=2e-8)
    a, a_dag = ladder_ops(space)
    mean = float(np.real(ket.conj() @ (a_dag @ a) @ ket))
    assert mean == pytest.approx(expected_mean, abs=1e-12)
    assert mean == pytest.approx(0.99999999, abs=1e-7)
    assert abs(np.linalg.norm(ket) - 1.0) < 1e-12


def test_coherent_truncation_leakage():
    with pytest.raises(q.TruncationLeakageError) as err:
        coherent_state(build_space(2), 1.0)
    # tail mass 1 - e^{-1} (1 + 1 + 1/2) ~ 0.080
    assert err.value.required_n_max > 2

    # alpha=1 at n_max=10 leaks 1.005e-8, just past the 1e-8 default; the
    # error names the truncation that would pass
    with pytest.raises(q.TruncationLeakageError) as err10:
        coherent_state(build_space(10), 1.0)
    assert err10.value.required_n_max == 11
    coherent_state(build_space(11), 1.0)  # no error


def test_coherent_phase():
    space = build_space(8)
    ket = coherent_state(space, 0.5 + 0.5j, leak_tol=1e-6)
    idx1 = space.flat_index(1, 0, 0)
    idx2 = space.flat_index(2, 0, 0)
    # successive amplitudes pick up arg(alpha) each
    assert np.angle(ket[idx2] / ket[idx1]) == pytest.approx(np.angle(0.5 + 0.5j))
