import numpy as np
import pytest

from jcth import linops, quanta, susy
from jcth.errors import AlgebraMismatchError, ParameterError, PreconditionError
from jcth.susy import CouplingParams

ALG_TOL = 1e-12
ROOT_TOL = 1e-11


def rel(x, ref):
    return linops.fro(x - ref) / max(1.0, linops.fro(ref))


@pytest.mark.parametrize("q", [susy.jc_charge(12), susy.many_particle_charge(2, 4),
                               susy.many_particle_charge(3, 3, sparse=True)],
                         ids=["jc", "mp2", "mp3"])
def test_superalgebra(q):
    res = susy.verify_superalgebra(q, relative=True)
    assert max(res.values()) <= ALG_TOL


def test_single_particle_charge_is_jc_charge():
    a = susy.many_particle_charge(1, 7)
    b = susy.jc_charge(7)
    assert np.array_equal(a.q, b.q)


def test_jc_hamiltonian_partners():
    # {Q, Q+} = diag(a a+, a+ a) below the cutoff
    m = 6
    h = susy.susy_hamiltonian(susy.jc_charge(m))
    assert np.allclose(np.diag(h)[: m - 1], np.arange(1, m))
    assert np.allclose(np.diag(h)[m:], np.arange(m))


def test_custom_charge_nilpotency_check():
    with pytest.raises(PreconditionError):
        susy.custom_charge(np.eye(2))
    q = susy.custom_charge(np.array([[0, 1], [0, 0]]))
    assert q.provenance == "custom"


@pytest.mark.parametrize("c1,c2,theta", [(1, 1, 0), (4, 1, 0.7), (1.5, -2, -0.3), (0, 3, 1)])
def test_s_squared_is_beta_h(c1, c2, theta):
    p = CouplingParams(c1, c2, theta)
    q = susy.jc_charge(10)
    s = susy.s_operator(q, p)
    h = susy.susy_hamiltonian(q)
    assert rel(s @ s, p.beta * h) <= ROOT_TOL


def test_regimes():
    assert CouplingParams(1, 2).regime == "real_spectrum"
    assert CouplingParams(-1, 2).regime == "conjugate_pairs"
    assert CouplingParams(0, 2).regime == "critical"
    assert CouplingParams(1, 2, 0.3).swapped() == CouplingParams(2, 1, 0.3)


@pytest.mark.parametrize("kind", ["s1", "s2", "s3"])
@pytest.mark.parametrize("eps", [0.5, 1.0, 2.0])
def test_alternative_roots(kind, eps):
    p = CouplingParams(1.3, 0.4, 0.9)
    for q in (susy.jc_charge(10), susy.many_particle_charge(2, 4)):
        h = susy.susy_hamiltonian(q)
        r = susy.alt_root(q, p, kind, epsilon=eps)
        assert rel(r @ r, p.beta * h) <= ROOT_TOL


def test_alt_root_errors():
    q = susy.jc_charge(4)
    p = CouplingParams(1, 1)
    with pytest.raises(ParameterError):
        susy.alt_root(q, p, "s2", epsilon=0.0)
    with pytest.raises(ParameterError):
        susy.alt_root(q, p, "s4")
    with pytest.raises(PreconditionError):
        susy.alt_root(q, p, "s1", gamma5=np.eye(8))
    bare = susy.custom_charge(q.q)
    with pytest.raises(PreconditionError):
        susy.alt_root(bare, p, "s1")


@pytest.mark.parametrize("q", [susy.jc_charge(8), susy.many_particle_charge(2, 3)], ids=["jc", "mp2"])
def test_extended_pair(q):
    x = susy.extended_pair(q, (1.0, -0.5), (2.0, 0.7), (0.3, 1.1))
    assert max(x.residuals().values()) <= ALG_TOL
    s = susy.s_extended(x)
    h = susy.susy_hamiltonian(x.charges[0])
    assert x.beta_n == pytest.approx(2.0 - 0.35)
    assert rel(s @ s, x.beta_n * h) <= ROOT_TOL


def test_s_extended_rejects_mismatched_hamiltonians():
    a = susy.jc_charge(4)
    b = susy.custom_charge(2 * a.q)
    x = susy.ExtendedCharges((a, b), (1, 1), (1, 1), (0, 0))
    with pytest.raises(AlgebraMismatchError):
        susy.s_extended(x)


def test_extended_length_mismatch():
    with pytest.raises(ParameterError):
        susy.ExtendedCharges((susy.jc_charge(3),), (1, 2), (1,), (0,))
