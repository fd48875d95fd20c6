import numpy as np
import pytest

from jcth import quanta
from jcth.errors import ParameterError, UnsupportedRepresentationError

ALG_TOL = 1e-13


def test_boson_ladder():
    b = quanta.boson_ops(6)
    res = quanta.boson_residuals(b)
    assert max(res.values()) <= ALG_TOL
    # a|3> = sqrt(3)|2>
    v = np.zeros(6)
    v[3] = 1
    assert np.allclose(b.lower @ v, np.sqrt(3) * np.eye(6)[2])
    with pytest.raises(ParameterError):
        quanta.boson_ops(1)


def test_commutator_fails_only_on_top_level():
    b = quanta.boson_ops(5)
    comm = b.lower @ b.raising - b.raising @ b.lower
    assert np.allclose(np.diag(comm)[:-1], 1)
    assert np.diag(comm)[-1] == pytest.approx(-4)


def test_pauli_algebra():
    P = quanta.pauli()
    assert np.allclose(P.s1 @ P.s2, 1j * P.s3)
    assert np.allclose(P.sp, [[0, 1], [0, 0]])
    assert np.allclose(P.sp @ P.sm - P.sm @ P.sp, P.s3)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_explicit_fermion_reps(n):
    rep = quanta.fermion_rep_explicit(n)
    assert max(quanta.fermion_residuals(rep).values()) <= ALG_TOL


def test_explicit_three_particle_matrices():
    P = quanta.pauli()
    rep = quanta.fermion_rep_explicit(3)
    assert np.array_equal(rep.psi[0], np.kron(np.kron(P.s3, P.sm), P.i2))
    assert np.array_equal(rep.psi[2], np.kron(np.kron(P.sm, P.i2), P.s3))


def test_single_fermion_grading_is_minus_sigma3():
    rep = quanta.fermion_rep_explicit(1)
    assert np.array_equal(rep.gamma5, -quanta.pauli().s3)


@pytest.mark.parametrize("n", [1, 4, 5])
def test_general_fermion_reps(n):
    rep = quanta.fermion_rep_general(n)
    assert rep.dim == 2**n
    assert max(quanta.fermion_residuals(rep).values()) <= ALG_TOL


def test_unsupported_explicit_rep():
    with pytest.raises(UnsupportedRepresentationError):
        quanta.fermion_rep_explicit(4)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_pauli_sum_su2(n):
    rep = quanta.su2_pauli_sum(n)
    assert max(quanta.su2_residuals(rep).values()) <= ALG_TOL
    # z-component spectrum -n/2 .. n/2
    assert np.allclose(sorted(set(np.round(np.diag(rep.r3).real, 12))), np.arange(-n, n + 1, 2) / 2)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_fermionic_su2(n):
    rep = quanta.su2_fermionic(quanta.fermion_rep_explicit(n))
    assert max(quanta.su2_residuals(rep).values()) <= ALG_TOL


def test_fermionic_su2_single_particle():
    rep = quanta.su2_fermionic(quanta.fermion_rep_explicit(1))
    P = quanta.pauli()
    assert np.allclose(rep.r_minus, P.sm)
    assert np.allclose(rep.r3, P.s3 / 2)


def test_multimode_lowering_commute():
    a1, a2 = quanta.multimode_lowering(2, 4)
    assert np.allclose(a1 @ a2, a2 @ a1)
    assert np.allclose(a1 @ a2.conj().T, a2.conj().T @ a1)
