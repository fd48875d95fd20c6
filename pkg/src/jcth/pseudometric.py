"""Metric operators eta, their square roots and the similarity map to a
Hermitian Hamiltonian.

All metrics act on the spin (molecule) factor and are tensored with the boson
identity, matching the spin-slow ordering of :mod:`jcth.quanta`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from . import linops, models, quanta
from .errors import RegimeError, RepresentationError, SingularParameterError
from .susy import CouplingParams


@dataclass(frozen=True)
class MetricSpec:
    matrix: np.ndarray
    delta1: float
    delta2: float
    gamma: float | None
    positive_definite: bool
    rho: np.ndarray | None = field(default=None, repr=False)
    rho_inv: np.ndarray | None = field(default=None, repr=False)

    def scaled(self, c: float) -> "MetricSpec":
        """The same metric multiplied by a positive constant."""
        if not c > 0:
            raise ValueError("scale factor must be positive")
        r = math.sqrt(c)
        return MetricSpec(
            matrix=c * self.matrix, delta1=c * self.delta1, delta2=c * self.delta2,
            gamma=self.gamma, positive_definite=self.positive_definite,
            rho=None if self.rho is None else r * self.rho,
            rho_inv=None if self.rho_inv is None else self.rho_inv / r,
        )


def _deltas(p: CouplingParams, positive: bool) -> tuple[float, float, float | None]:
    if p.c1 == 0 or p.c2 == 0:
        raise SingularParameterError("metric needs c1 != 0 and c2 != 0")
    if positive and p.beta <= 0:
        raise RegimeError("a positive-definite metric exists only for beta > 0")
    gamma = math.sqrt(p.c1 / p.c2) if p.beta > 0 else None
    if positive:
        return 1.0 / gamma, gamma, gamma
    # gauge |delta1 delta2| = 1 with delta1 / delta2 = c2 / c1
    s = math.sqrt(abs(p.beta))
    return p.c2 / s, p.c1 / s, gamma


def _finish(spin: np.ndarray, d1: float, d2: float, gamma, boson_dim: int) -> MetricSpec:
    eye = np.eye(boson_dim, dtype=np.complex128)
    spin = 0.5 * (spin + linops.dagger(spin))
    w = np.linalg.eigvalsh(spin)
    positive = bool(w[0] > 1e-12 * np.linalg.norm(spin))
    full = linops.kron(spin, eye)
    if positive:
        rho = linops.herm_function(spin, np.sqrt)
        rho_inv = linops.herm_function(spin, lambda x: 1.0 / np.sqrt(x))
        return MetricSpec(full, d1, d2, gamma, True, linops.kron(rho, eye), linops.kron(rho_inv, eye))
    return MetricSpec(full, d1, d2, gamma, False)


def eta_2x2(p: CouplingParams, positive: bool = True, boson_dim: int = 1) -> MetricSpec:
    """eta = diag(delta1, delta2) (x) 1 with delta1 / delta2 = c2 / c1."""
    d1, d2, gamma = _deltas(p, positive)
    return _finish(np.diag([d1, d2]).astype(np.complex128), d1, d2, gamma, boson_dim)


def eta_tensor(p: CouplingParams, n: int, positive: bool = True, boson_dim: int = 1) -> MetricSpec:
    """eta_N = eta (x) ... (x) eta (n factors), tensored with the boson identity."""
    d1, d2, gamma = _deltas(p, positive)
    linops.check_dim(2**n * boson_dim)
    # diagonal, so build it directly from the factor diagonals
    diag = np.ones(1)
    for _ in range(n):
        diag = np.kron(diag, [d1, d2])
    return _finish(np.diag(diag).astype(np.complex128), d1, d2, gamma, boson_dim)


def eta_su2(p: CouplingParams, rep: quanta.Su2Rep, positive: bool = True,
            boson_dim: int = 1) -> MetricSpec:
    """eta = delta2 R+ R- + delta1 R- R+ on the fermionic SU(2) representation."""
    if rep.kind != "fermionic":
        raise RepresentationError("the R+R- / R-R+ metric needs the fermionic representation")
    d1, d2, gamma = _deltas(p, positive)
    spin = d2 * rep.r_plus @ rep.r_minus + d1 * rep.r_minus @ rep.r_plus
    return _finish(spin, d1, d2, gamma, boson_dim)


def eta_su2_inverse(m: MetricSpec, rep: quanta.Su2Rep) -> np.ndarray:
    """delta2^-1 R+ R- + delta1^-1 R- R+ (spin factor only)."""
    return rep.r_plus @ rep.r_minus / m.delta2 + rep.r_minus @ rep.r_plus / m.delta1


def eta_for(spec: models.ModelSpec, positive: bool = True) -> MetricSpec:
    """The catalogue metric of a model."""
    p = spec.coupling
    if spec.kind == "tcm_pauli":
        return eta_tensor(p, spec.n_molecules, positive, spec.cutoff)
    if spec.kind == "tcm_fermionic":
        return eta_su2(p, models.su2_for(spec), positive, spec.cutoff)
    return eta_2x2(p, positive, spec.cutoff)


def eta_many_particle(p: CouplingParams, n: int, cutoff: int, positive: bool = True,
                      sparse: bool = False) -> MetricSpec | sp.csr_matrix:
    """eta_N for the many-particle realisation on fermions (x) n boson modes.

    With ``sparse=True`` only the (diagonal) matrix is returned, as CSR.
    """
    d1, d2, gamma = _deltas(p, positive)
    linops.check_dim(2**n * cutoff**n)
    diag = np.ones(1)
    for _ in range(n):
        diag = np.kron(diag, [d1, d2])
    if sparse:
        return sp.diags(np.repeat(diag, cutoff**n).astype(np.complex128), format="csr")
    return _finish(np.diag(diag).astype(np.complex128), d1, d2, gamma, cutoff**n)


def quasi_map(h, m: MetricSpec) -> np.ndarray:
    """rho h rho^-1 with rho = sqrt(eta)."""
    if not m.positive_definite:
        raise RegimeError("quasi-Hermitian map needs a positive-definite metric")
    h = linops.as_operator(h)
    return linops.mul(m.rho, h, m.rho_inv)


def hermiticity_defect(h) -> float:
    """||h - h^dag||_F / max(1, ||h||_F)."""
    return linops.rel_residual(h, linops.dagger(h))


def transport_residual(h, m: MetricSpec, eigs: linops.Eigensystem) -> float:
    """Largest relative residual of H^dag (eta v) = lambda (eta v) over right eigenvectors v.

    For real lambda (the beta > 0 regime) eta v is an eigenvector of H^dag.
    """
    hd = linops.dagger(linops.dense(h))
    ev = linops.dense(m.matrix) @ eigs.right
    r = hd @ ev - ev * eigs.values.conj()
    return float(np.max(np.linalg.norm(r, axis=0) / np.linalg.norm(ev, axis=0)))


@dataclass(frozen=True)
class ImageCoupling:
    """Coupling coefficient of the Hermitian image of a JC-type model."""

    computed: float
    sqrt_beta: float
    beta: float

    @property
    def matches(self) -> str:
        if abs(self.computed - self.sqrt_beta) <= 1e-12 * max(1.0, self.sqrt_beta):
            return "sqrt_beta"
        if abs(self.computed - self.beta) <= 1e-12 * max(1.0, self.beta):
            return "beta"
        return "neither"


def image_coupling(spec: models.ModelSpec) -> ImageCoupling:
    """Read off |<up,0| h |down,1>| from h = rho H rho^-1 (the coefficient of sigma_+ a)."""
    if spec.kind not in ("jc_resonant", "jc_nonresonant"):
        raise RegimeError("image coupling is only read off for the JC kinds")
    h = quasi_map(models.build(spec), eta_for(spec))
    m = spec.cutoff
    return ImageCoupling(float(abs(h[0, m + 1])), math.sqrt(spec.coupling.beta), spec.coupling.beta)
