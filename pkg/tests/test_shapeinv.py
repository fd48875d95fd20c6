import numpy as np
import pytest

from jcth import shapeinv as si
from jcth.errors import ParameterError, RangeError
from jcth.susy import CouplingParams

SHAPE_TOL = 1e-12
OSC_TOL = 1e-3
MORSE_TOL = 5e-3
IDENTITY_TOL = 1e-12


@pytest.mark.parametrize("f", si.catalog(), ids=lambda f: f.name)
def test_shape_invariance(f):
    assert si.shape_invariance_residual(f) <= SHAPE_TOL


def test_algebraic_energies():
    assert si.energies(si.morse(), 2).energies == pytest.approx((0, 3, 4))
    assert si.energies(si.tanh_family(3), 3).energies == pytest.approx((0, 5, 8, 9))
    assert si.energies(si.oscillator(), 4).energies == pytest.approx((0, 2, 4, 6, 8))


def test_jcth_pairs():
    spec = si.energies(si.oscillator(), 2, CouplingParams(2, 0.5))
    # beta = 1: E pm sqrt(E)
    assert spec.jcth[0] == pytest.approx((2 + 2**0.5, 2 - 2**0.5))
    neg = si.energies(si.oscillator(), 1, CouplingParams(1, -1))
    assert neg.jcth[0][0] == pytest.approx(2 + 2**0.5 * 1j)


def test_range_error():
    with pytest.raises(RangeError):
        si.energies(si.morse(), 3)
    with pytest.raises(ParameterError):
        si.morse(a=-1)


def test_oscillator_grid_levels():
    vals = si.lowest_levels(si.oscillator(), CouplingParams(0, 0), (-10, 10, 2000), 5)
    assert np.abs(vals - np.array([0, 2, 2, 4, 4])).max() <= OSC_TOL


def test_morse_grid_against_algebraic_levels():
    r = si.grid_report(si.morse(), CouplingParams(2, 0.5))
    assert r.fine_defect <= MORSE_TOL
    assert r.richardson_factor >= 3
    assert not r.resolution_warning
    assert r.max_imag <= 1e-8


def test_hermitian_limit_matches_targets():
    f = si.oscillator()
    p = CouplingParams(1, 1, 0.4)
    targets = si.bound_targets(f, p, 2)
    vals = si.grid_levels(f, p, (*f.domain, 2000), targets)
    assert np.abs(vals - targets).max() <= OSC_TOL
    h = si.grid_hamiltonian(f, p, (*f.domain, 200))
    assert np.abs(h - h.conj().T).max() <= 1e-12


@pytest.mark.parametrize("f", si.catalog(), ids=lambda f: f.name)
def test_pi_w_identity(f):
    assert si.identity_residual(f, CouplingParams(1.7, 0.6, 0.9), (*f.domain, 400)) <= IDENTITY_TOL


def test_grid_needs_enough_points():
    with pytest.raises(ParameterError):
        si.make_grid(-1, 1, 199)
    with pytest.raises(ParameterError):
        si.make_grid(1, -1, 300)


def test_morse_targets_drop_threshold():
    t = si.bound_targets(si.morse(), CouplingParams(1, 1))
    # E_2 = 4 sits at the continuum edge
    assert t.size == 3
