import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from jcth import linops, models, pseudometric as pm, quanta, spectra, susy
from jcth.errors import RegimeError, RepresentationError, SingularParameterError
from jcth.models import CouplingForm, ModelSpec
from jcth.susy import CouplingParams

PSEUDO_TOL = 1e-12
HERM_TOL = 1e-10
ISO_TOL = 1e-9
TRANSPORT_TOL = 1e-9


def test_identity_for_equal_couplings():
    m = pm.eta_2x2(CouplingParams(1.3, 1.3, 0.2))
    assert np.allclose(m.matrix, np.eye(2))


def test_positive_metric_example():
    m = pm.eta_2x2(CouplingParams(4, 1), boson_dim=3)
    assert m.gamma == 2
    assert np.allclose(m.matrix, np.kron(np.diag([0.5, 2]), np.eye(3)))
    assert np.allclose(m.rho, np.kron(np.diag([0.5**0.5, 2**0.5]), np.eye(3)))
    assert m.delta1 * m.delta2 == pytest.approx(1)
    assert m.positive_definite


def test_metric_errors():
    with pytest.raises(RegimeError):
        pm.eta_2x2(CouplingParams(1, -1), positive=True)
    with pytest.raises(SingularParameterError):
        pm.eta_2x2(CouplingParams(0, 1), positive=False)
    m = pm.eta_2x2(CouplingParams(1, -1), positive=False)
    assert not m.positive_definite
    with pytest.raises(RegimeError):
        pm.quasi_map(np.eye(2), m)


def test_tensor_metric():
    p = CouplingParams(4, 1)
    assert np.allclose(pm.eta_tensor(p, 1).matrix, pm.eta_2x2(p).matrix)
    assert np.allclose(np.diag(pm.eta_tensor(p, 2).matrix), [0.25, 1, 1, 4])


def test_tensor_metric_three_molecules():
    p = CouplingParams(3, 1, 0.2)
    spec = ModelSpec("tcm_pauli", p, cutoff=10, n_molecules=3)
    m = pm.eta_tensor(p, 3, boson_dim=10)
    assert linops.residual_pseudoherm(models.build(spec), m.matrix) <= PSEUDO_TOL


def test_su2_metric_single_particle_ordering():
    p = CouplingParams(4, 1)
    rep = quanta.su2_fermionic(quanta.fermion_rep_explicit(1))
    m = pm.eta_su2(p, rep)
    assert np.allclose(m.matrix, np.diag([m.delta2, m.delta1]))


def test_su2_metric_inverse_and_limit():
    rep = quanta.su2_fermionic(quanta.fermion_rep_explicit(3))
    m = pm.eta_su2(CouplingParams(2, 1), rep)
    assert linops.fro(m.matrix @ pm.eta_su2_inverse(m, rep) - np.eye(8)) <= 1e-13
    same = pm.eta_su2(CouplingParams(1.5, 1.5), rep)
    assert np.allclose(same.matrix, np.eye(8))


def test_su2_metric_two_particles():
    p = CouplingParams(2, 1)
    spec = ModelSpec("tcm_fermionic", p, cutoff=8, n_molecules=2)
    m = pm.eta_su2(p, models.su2_for(spec), boson_dim=8)
    assert linops.residual_pseudoherm(models.build(spec), m.matrix) <= PSEUDO_TOL


def test_su2_metric_needs_fermionic_rep():
    with pytest.raises(RepresentationError):
        pm.eta_su2(CouplingParams(1, 2), quanta.su2_pauli_sum(2))


CATALOG = [
    ModelSpec("jc_resonant", CouplingParams(4, 1, 0.7), cutoff=10),
    ModelSpec("jc_nonresonant", CouplingParams(0.3, 2, -1), delta=1.1, cutoff=10),
    ModelSpec("generalized", CouplingParams(2, 3, 0.5), cutoff=10, coupling_form=CouplingForm("q_oscillator", q=0.7)),
    ModelSpec("dressed", CouplingParams(2, 0.5, 0.1), cutoff=10, dressed_params=(1, 0.2, 0, 1, 0.1, 0, 0.6, 0.3)),
    ModelSpec("tcm_pauli", CouplingParams(1.5, 0.5, 0.8), cutoff=6, n_molecules=3),
    ModelSpec("tcm_fermionic", CouplingParams(1.5, 0.5, 0.8), cutoff=6, n_molecules=3),
]


@pytest.mark.parametrize("spec", CATALOG, ids=lambda s: s.kind)
def test_quasi_map_is_hermitian_and_isospectral(spec):
    h = models.build(spec)
    m = pm.eta_for(spec)
    img = pm.quasi_map(h, m)
    assert pm.hermiticity_defect(img) <= HERM_TOL
    vals = linops.eig_general(h).values
    assert np.abs(vals - np.linalg.eigvalsh(img)).max() <= ISO_TOL


@pytest.mark.parametrize("spec", CATALOG, ids=lambda s: s.kind)
def test_eigenvector_transport(spec):
    an = spectra.analyze(spec)
    assert pm.transport_residual(an.matrix, pm.eta_for(spec), an.eigensystem) <= TRANSPORT_TOL


def test_quasi_map_trivial():
    h = np.diag([1.0, 2.0]) + 0.3 * np.array([[0, 1], [1, 0]])
    m = pm.eta_2x2(CouplingParams(1, 1))
    assert np.allclose(pm.quasi_map(h, m), h)


@pytest.mark.parametrize("spec", CATALOG[:3], ids=lambda s: s.kind)
def test_scale_gauge(spec):
    h = models.build(spec)
    m = pm.eta_for(spec)
    big = m.scaled(7.5)
    assert linops.residual_pseudoherm(h, big.matrix) <= PSEUDO_TOL
    assert np.allclose(pm.quasi_map(h, big), pm.quasi_map(h, m))


@settings(max_examples=20, deadline=None)
@given(st.floats(0.2, 3), st.floats(0.2, 3), st.floats(-3, 3), st.integers(0, 2**32 - 1))
def test_any_block_structure_is_pseudo_hermitian(c1, c2, theta, seed):
    rng = np.random.default_rng(seed)
    n = 5
    x, y = rng.normal(size=(2, n, n)) + 1j * rng.normal(size=(2, n, n))
    f1, f2 = x + x.conj().T, y + y.conj().T
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    p = CouplingParams(c1, c2, theta)
    h = models._two_block(f1, f2, p.z1 * g, p.z2 * g.conj().T)
    m = pm.eta_2x2(p, boson_dim=n)
    assert linops.residual_pseudoherm(h, m.matrix) <= PSEUDO_TOL


def test_many_particle_metric():
    p = CouplingParams(3, 0.5, 0.4)
    for n in (2, 3):
        q = susy.many_particle_charge(n, 3)
        h = susy.susy_hamiltonian(q) + susy.s_operator(q, p)
        m = pm.eta_many_particle(p, n, 3)
        assert linops.residual_pseudoherm(h, m.matrix) <= PSEUDO_TOL


def test_image_coupling_is_sqrt_beta():
    ic = pm.image_coupling(ModelSpec("jc_resonant", CouplingParams(4, 1, 0), cutoff=8))
    assert ic.computed == pytest.approx(2.0)
    assert ic.matches == "sqrt_beta"
    assert ic.beta == 4
