"""Shape-invariant superpotentials and the 2x2 Hamiltonian built on them.

Units follow ``H = p^2 + w^2 + i sigma_3 [p, w]`` with ``p = -i d/dx``, so the
partner potentials are ``V_pm = w^2 pm w'`` and the oscillator spacing is 2.
The translation operator T is never materialised; it only shifts the
parameter, q_k = q_0 + k xi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import ParameterError, RangeError
from .susy import CouplingParams

MIN_POINTS = 200


@dataclass(frozen=True)
class ShapeInvariantFamily:
    name: str
    w: Callable[[np.ndarray, float], np.ndarray]
    dw: Callable[[np.ndarray, float], np.ndarray]
    xi: float
    remainder: Callable[[float], float]
    q0: float
    domain: tuple[float, float]
    # highest level n with E_n given by the recursion (None: unbounded)
    max_level: int | None = None
    # where V_- levels off (None: confining)
    continuum: float | None = None

    def v_minus(self, x, q=None):
        q = self.q0 if q is None else q
        return self.w(x, q) ** 2 - self.dw(x, q)

    def v_plus(self, x, q=None):
        q = self.q0 if q is None else q
        return self.w(x, q) ** 2 + self.dw(x, q)


def oscillator() -> ShapeInvariantFamily:
    return ShapeInvariantFamily(
        name="oscillator",
        w=lambda x, q: np.asarray(x, dtype=float),
        dw=lambda x, q: np.ones_like(np.asarray(x, dtype=float)),
        xi=0.0,
        remainder=lambda q: 2.0,
        q0=0.0,
        domain=(-10.0, 10.0),
    )


def morse(a: float = 2.0, b: float = 1.0) -> ShapeInvariantFamily:
    """w = A - B e^{-x}; q = A, xi = -1, R(q) = 2q + 1."""
    if not a > 0 or not b > 0:
        raise ParameterError("Morse family needs A > 0 and B > 0")
    # left wall grows like B^2 e^{-2x}; right tail of the last bound level decays slowly
    left = -math.log(60.0 / b)
    return ShapeInvariantFamily(
        name="morse",
        w=lambda x, q: q - b * np.exp(-np.asarray(x, dtype=float)),
        dw=lambda x, q: b * np.exp(-np.asarray(x, dtype=float)),
        xi=-1.0,
        remainder=lambda q: 2.0 * q + 1.0,
        q0=float(a),
        domain=(left, 30.0),
        max_level=int(math.floor(a)),
        continuum=float(a) ** 2,
    )


def tanh_family(a: float = 3.0) -> ShapeInvariantFamily:
    """w = A tanh x; q = A, xi = -1, R(q) = 2q + 1."""
    if not a > 0:
        raise ParameterError("tanh family needs A > 0")
    return ShapeInvariantFamily(
        name="tanh",
        w=lambda x, q: q * np.tanh(np.asarray(x, dtype=float)),
        dw=lambda x, q: q / np.cosh(np.asarray(x, dtype=float)) ** 2,
        xi=-1.0,
        remainder=lambda q: 2.0 * q + 1.0,
        q0=float(a),
        domain=(-20.0, 20.0),
        max_level=int(math.floor(a)),
        continuum=float(a) ** 2,
    )


def catalog() -> tuple[ShapeInvariantFamily, ...]:
    return (oscillator(), morse(), tanh_family())


def shape_invariance_residual(f: ShapeInvariantFamily, x=None) -> float:
    """max |V_+(x, q0) - V_-(x, q0 + xi) - R(q0 + xi)| over a sample grid."""
    if x is None:
        x = np.linspace(*f.domain, 401)
    q1 = f.q0 + f.xi
    return float(np.max(np.abs(f.v_plus(x, f.q0) - f.v_minus(x, q1) - f.remainder(q1))))


@dataclass(frozen=True)
class AlgebraicSpectrum:
    energies: tuple[float, ...]
    # (E_{n}^+, E_{n}^-) for n = 1 .. n_max; the ground value is 0
    jcth: tuple[tuple[float, float], ...]
    ground: float = 0.0

    def jcth_values(self) -> np.ndarray:
        vals = [self.ground] + [v for pair in self.jcth for v in pair]
        return np.sort(np.array(vals))


def energies(f: ShapeInvariantFamily, n_max: int, p: CouplingParams | None = None) -> AlgebraicSpectrum:
    """E_n = sum_{k=1..n} R(q_k), q_k = q0 + k xi, and E_n pm sqrt(beta E_n)."""
    if n_max < 0:
        raise ParameterError("n_max must be non-negative")
    if f.max_level is not None and n_max > f.max_level:
        raise RangeError(n_max, f.max_level)
    e = [0.0]
    for k in range(1, n_max + 1):
        e.append(e[-1] + f.remainder(f.q0 + k * f.xi))
    pairs = ()
    if p is not None:
        if p.beta < 0:
            pairs = tuple((complex(x, math.sqrt(-p.beta * x)), complex(x, -math.sqrt(-p.beta * x)))
                          for x in e[1:])
        else:
            pairs = tuple((x + math.sqrt(p.beta * x), x - math.sqrt(p.beta * x)) for x in e[1:])
    return AlgebraicSpectrum(tuple(e), pairs)


# ---------------------------------------------------------------------------
# finite differences

@dataclass(frozen=True)
class Grid:
    x: np.ndarray
    h: float
    # -d^2/dx^2 (three-point), -i d/dx (central), both Dirichlet
    lap: sp.csr_matrix
    p: sp.csr_matrix


def make_grid(x_min: float, x_max: float, points: int) -> Grid:
    if points < MIN_POINTS:
        raise ParameterError(f"grid needs at least {MIN_POINTS} points (got {points})")
    if not x_max > x_min:
        raise ParameterError("empty grid interval")
    # interior nodes of a Dirichlet problem
    x = np.linspace(x_min, x_max, points + 2)[1:-1]
    h = x[1] - x[0]
    one = np.ones(points)
    lap = sp.diags([-one[:-1], 2 * one, -one[:-1]], [-1, 0, 1], format="csr") / h**2
    p = sp.diags([1j * one[:-1], -1j * one[:-1]], [-1, 1], format="csr") / (2 * h)
    return Grid(x=x, h=h, lap=lap, p=p)


_SP = sp.csr_matrix(np.array([[0, 1], [0, 0]], dtype=complex))
_SM = sp.csr_matrix(np.array([[0, 0], [1, 0]], dtype=complex))
_S3 = sp.csr_matrix(np.diag([1.0, -1.0]).astype(complex))
_I2 = sp.identity(2, dtype=complex, format="csr")


@dataclass(frozen=True)
class GridOperators:
    grid: Grid
    h_susy: sp.csr_matrix
    s: sp.csr_matrix

    @property
    def total(self) -> sp.csr_matrix:
        return (self.h_susy + self.s).tocsr()


def grid_operators(f: ShapeInvariantFamily, p: CouplingParams, grid: tuple[float, float, int]) -> GridOperators:
    """H = p^2 + w^2 + i sigma_3 [p, w] and S = c1 e^{it} s+ (p - i w) + c2 e^{-it} s- (p + i w).

    p^2 is the three-point Laplacian (the square of the central difference
    would decouple even and odd nodes), [p, w] is the matrix commutator.
    """
    g = make_grid(*grid)
    w = sp.diags(f.w(g.x, f.q0).astype(complex), format="csr")
    comm = 1j * (g.p @ w - w @ g.p)
    h_susy = sp.kron(_I2, g.lap + w @ w) + sp.kron(_S3, comm)
    s = p.z1 * sp.kron(_SP, g.p - 1j * w) + p.z2 * sp.kron(_SM, g.p + 1j * w)
    return GridOperators(grid=g, h_susy=h_susy.tocsr(), s=s.tocsr())


def grid_hamiltonian(f: ShapeInvariantFamily, p: CouplingParams, grid: tuple[float, float, int]) -> np.ndarray:
    """Dense 2*points matrix of H + S on the grid."""
    return grid_operators(f, p, grid).total.toarray()


def pi_w_form(f: ShapeInvariantFamily, p: CouplingParams, grid: tuple[float, float, int]) -> sp.csr_matrix:
    """Pi^2 + W^2 + i sigma_3 [Pi, W] with the spin-dressed Pi and W, on the grid.

    The p.p term of Pi^2 is replaced by the Laplacian, as in ``grid_operators``.
    """
    g = make_grid(*grid)
    n = g.x.size
    eye = sp.identity(n, dtype=complex, format="csr")
    w = sp.diags(f.w(g.x, f.q0).astype(complex), format="csr")
    spin_pi = 0.5 * p.z1 * _SP + 0.5 * p.z2 * _SM
    spin_w = -0.5j * p.z1 * _SP + 0.5j * p.z2 * _SM
    big_p = sp.kron(_I2, g.p) + sp.kron(spin_pi, eye)
    big_w = sp.kron(_I2, w) + sp.kron(spin_w, eye)
    pi2 = big_p @ big_p - sp.kron(_I2, g.p @ g.p) + sp.kron(_I2, g.lap)
    s3 = sp.kron(_S3, eye)
    return (pi2 + big_w @ big_w + 1j * s3 @ (big_p @ big_w - big_w @ big_p)).tocsr()


def identity_residual(f: ShapeInvariantFamily, p: CouplingParams, grid: tuple[float, float, int]) -> float:
    """Relative Frobenius distance between the Pi/W form and H + S."""
    ops = grid_operators(f, p, grid)
    a = pi_w_form(f, p, grid)
    b = ops.total
    return float(spla.norm(a - b) / max(1.0, spla.norm(b)))


def _start_vector(n: int) -> np.ndarray:
    # fixed ARPACK start so repeated runs give identical digits
    return np.random.default_rng(0).normal(size=n).astype(complex)


def grid_levels(f: ShapeInvariantFamily, p: CouplingParams, grid: tuple[float, float, int],
                targets, k: int = 6, tail: float = 0.1) -> np.ndarray:
    """Grid eigenvalue nearest to each target among well-localised eigenvectors.

    Shift-invert ARPACK around each target; an eigenvector counts as
    localised when less than 1e-3 of its weight lies in the outer ``tail``
    fraction of the domain (discretised continuum states spread out).
    """
    ops = grid_operators(f, p, grid)
    a = ops.total.tocsc()
    x = ops.grid.x
    n = x.size
    span = x[-1] - x[0]
    outer = np.concatenate([(x < x[0] + tail * span) | (x > x[-1] - tail * span)] * 2)
    out = []
    for t in np.atleast_1d(targets):
        vals, vecs = spla.eigs(a, k=min(k, 2 * n - 2), sigma=complex(t) + 1e-7, which="LM", tol=1e-13,
                               v0=_start_vector(2 * n))
        weight = np.linalg.norm(vecs[outer], axis=0) ** 2 / np.linalg.norm(vecs, axis=0) ** 2
        ok = weight < 1e-3
        cand = vals[ok] if ok.any() else vals
        out.append(cand[np.argmin(np.abs(cand - t))])
    return np.array(out)


def lowest_levels(f: ShapeInvariantFamily, p: CouplingParams, grid: tuple[float, float, int],
                  count: int, shift: float = -1.0) -> np.ndarray:
    """The ``count`` grid eigenvalues closest to ``shift``, sorted by real part."""
    a = grid_operators(f, p, grid).total.tocsc()
    vals = spla.eigs(a, k=count, sigma=shift, which="LM", tol=1e-13, return_eigenvectors=False,
                     v0=_start_vector(a.shape[0]))
    return vals[np.lexsort((vals.imag, vals.real))]


@dataclass(frozen=True)
class GridReport:
    family: str
    targets: tuple[float, ...]
    coarse: tuple[complex, ...]
    fine: tuple[complex, ...]
    coarse_defect: float
    fine_defect: float
    max_imag: float
    identity_residual: float

    @property
    def richardson_factor(self) -> float:
        return self.coarse_defect / self.fine_defect if self.fine_defect > 0 else math.inf

    @property
    def resolution_warning(self) -> bool:
        # the coarse-to-fine step estimates the fine-grid error of a second-order scheme
        return abs(self.coarse_defect - self.fine_defect) / 3.0 > 5e-3


def bound_targets(f: ShapeInvariantFamily, p: CouplingParams, n_max: int | None = None) -> np.ndarray:
    """Algebraic JCTH levels of the bound states (threshold levels dropped)."""
    if n_max is None:
        n_max = f.max_level if f.max_level is not None else 3
    spec = energies(f, n_max, p)
    levels = [0.0]
    for e, (up, down) in zip(spec.energies[1:], spec.jcth):
        if f.continuum is not None and e >= f.continuum:
            continue
        levels += [down, up]
    return np.sort(np.array(levels, dtype=float))


def grid_report(f: ShapeInvariantFamily, p: CouplingParams, points: int = 2000,
                n_max: int | None = None) -> GridReport:
    """Grid levels at ``points`` and ``points // 2`` against the algebraic targets."""
    targets = bound_targets(f, p, n_max)
    fine_grid = (*f.domain, points)
    coarse = grid_levels(f, p, (*f.domain, points // 2), targets)
    fine = grid_levels(f, p, fine_grid, targets)
    return GridReport(
        family=f.name,
        targets=tuple(float(t) for t in targets),
        coarse=tuple(complex(v) for v in coarse),
        fine=tuple(complex(v) for v in fine),
        coarse_defect=float(np.abs(coarse - targets).max()),
        fine_defect=float(np.abs(fine - targets).max()),
        max_imag=float(np.abs(fine.imag).max()),
        identity_residual=identity_residual(f, p, fine_grid),
    )
