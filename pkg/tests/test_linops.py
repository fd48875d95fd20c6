import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings, strategies as st

from jcth import config, linops, quanta
from jcth.errors import ConvergenceError, DimensionLimitError, PositivityError, ShapeError

from oracles import charpoly_roots, match_distance

KRON_TOL = 1e-13
EIG_TOL = 1e-10
ORACLE_TOL = 1e-9


def rand_op(rng, n):
    return rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))


def test_kron_identity_and_diagonal():
    assert np.array_equal(linops.kron(np.eye(2), np.eye(2)), np.eye(4))
    s3 = quanta.pauli().s3
    assert np.array_equal(linops.kron(s3, np.eye(2)), np.diag([1, 1, -1, -1]))


def test_kron_matches_second_fermion_of_two_particle_rep():
    P = quanta.pauli()
    psi2 = quanta.fermion_rep_explicit(2).psi[1]
    assert np.array_equal(linops.kron(P.sm, np.eye(2)), psi2)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_kron_mixed_product(n, m, seed):
    rng = np.random.default_rng(seed)
    a, c = rand_op(rng, n), rand_op(rng, n)
    b, d = rand_op(rng, m), rand_op(rng, m)
    lhs = linops.kron(a, b) @ linops.kron(c, d)
    rhs = linops.kron(a @ c, b @ d)
    assert linops.rel_residual(lhs, rhs) <= KRON_TOL * max(1.0, linops.fro(rhs))


def test_kron_dimension_limit():
    with config.dimension_limit(16):
        with pytest.raises(DimensionLimitError):
            linops.kron(np.eye(4), np.eye(8))


def test_as_operator_rejects_bad_input():
    with pytest.raises(ShapeError):
        linops.as_operator(np.ones((2, 3)))
    with pytest.raises(ShapeError):
        linops.as_operator(np.array([[np.nan]]))


def test_eig_identity_and_sorting():
    es = linops.eig_general(np.eye(3))
    assert np.allclose(es.values, 1)
    es = linops.eig_general(np.diag([3.0, -1.0, 2.0, 2.0 + 1j, 2.0 - 1j]))
    assert np.allclose(es.values, [-1, 2 - 1j, 2, 2 + 1j, 3])


@pytest.mark.parametrize("n", [1, 2, 5, 9])
def test_eig_against_charpoly_oracle(rng, n):
    a = rand_op(rng, n)
    es = linops.eig_general(a)
    assert match_distance(es.values, charpoly_roots(a)) <= ORACLE_TOL


@pytest.mark.parametrize("n", [3, 16, 64])
def test_eig_residuals(rng, n):
    a = rand_op(rng, n)
    es = linops.eig_general(a)
    nrm = linops.fro(a)
    assert es.right_residuals(a).max() <= EIG_TOL * nrm
    assert es.left_residuals(a).max() <= EIG_TOL * nrm
    assert np.allclose(np.linalg.norm(es.right, axis=0), 1)
    order = linops.sort_order(es.values)
    assert np.array_equal(order, np.arange(n))


def test_eig_real_input_gives_exact_conjugate_pairs(rng):
    a = rng.normal(size=(12, 12))
    v = linops.eig_general(a).values
    cplx = v[v.imag > 0]
    for z in cplx:
        assert np.any(v == np.conj(z))


def test_eig_convergence_error_carries_partial(monkeypatch):
    def boom(*a, **k):
        raise np.linalg.LinAlgError("no convergence")

    monkeypatch.setattr(linops.sla, "eig", boom)
    with pytest.raises(ConvergenceError) as info:
        linops.eig_general(np.diag([1.0, 2.0]))
    assert np.allclose(np.sort(info.value.partial), [1, 2])


def test_herm_sqrt_and_function(rng):
    x = rand_op(rng, 6)
    a = x @ x.conj().T + np.eye(6)
    r = linops.herm_sqrt(a)
    assert linops.rel_residual(r @ r, a) < 1e-12
    inv = linops.herm_function(a, lambda w: 1 / w)
    assert linops.rel_residual(inv @ a, np.eye(6)) < 1e-12
    with pytest.raises(PositivityError):
        linops.herm_sqrt(np.diag([1.0, -1.0]))


def test_herm_function_blockwise_matches_dense(rng):
    # block-diagonal pattern above the sparse threshold
    blocks = [rng.normal(size=(k, k)) for k in (100, 80, 120)]
    blocks = [b + b.T for b in blocks]
    a = np.zeros((300, 300))
    i = 0
    for b in blocks:
        a[i:i + len(b), i:i + len(b)] = b
        i += len(b)
    perm = rng.permutation(300)
    a = a[np.ix_(perm, perm)]
    w, v = np.linalg.eigh(a)
    ref = (v * np.exp(0.1 * w)) @ v.T
    got = linops.herm_function(a, lambda x: np.exp(0.1 * x))
    assert linops.rel_residual(got, ref) < 1e-12
    got_sp = linops.herm_function(sp.csr_matrix(a), lambda x: np.exp(0.1 * x))
    assert sp.issparse(got_sp)
    assert linops.rel_residual(got_sp.toarray(), ref) < 1e-12


def test_sparse_products_agree_with_dense(rng):
    a = sp.random(300, 300, density=0.01, random_state=1) + 1j * sp.random(300, 300, density=0.01, random_state=2)
    b = sp.random(300, 300, density=0.01, random_state=3)
    dense = a.toarray() @ b.toarray()
    assert np.allclose(linops.mul(a, b).toarray(), dense)
    assert np.allclose(linops.mul(a.toarray(), b.toarray()), dense)


def test_residual_pseudoherm_paths_agree(rng):
    eta = np.diag(rng.uniform(0.5, 2, 8)).astype(complex)
    h = rand_op(rng, 8)
    diag_path = linops.residual_pseudoherm(h, eta)
    dense_ref = linops.fro(h.conj().T @ eta - eta @ h) / max(1, linops.fro(eta) * linops.fro(h))
    assert diag_path == pytest.approx(dense_ref, rel=1e-12)
    assert linops.residual_pseudoherm(sp.csr_matrix(h), sp.csr_matrix(eta)) == pytest.approx(dense_ref, rel=1e-12)
    # a Hermitian matrix commuting with eta is eta-pseudo-Hermitian
    herm = np.diag(rng.normal(size=8))
    assert linops.residual_pseudoherm(herm, eta) == 0.0
    with pytest.raises(ShapeError):
        linops.residual_pseudoherm(np.eye(2), np.eye(3))


def test_compress_and_embed():
    a = np.arange(16.0).reshape(4, 4)
    assert np.array_equal(linops.compress(a, [True, False, True, False]), [[0, 2], [8, 10]])
    s3 = quanta.pauli().s3
    e = linops.embed(s3, 1, [2, 2])
    assert np.array_equal(e, np.kron(np.eye(2), s3))
    assert np.array_equal(linops.embed(s3, 1, [2, 2], sparse=True).toarray(), e)
