"""Catalogue of non-Hermitian Jaynes-Cummings-type models.

Every builder returns a dense matrix on ``spin (x) boson`` (or
``molecules (x) boson``) space with the spin factor slow.  The JC kinds are
assembled literally as ``{Q, Q^dag} + S`` from :mod:`jcth.susy`.
"""

from __future__ import annotations

import cmath
import dataclasses
import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from . import linops, quanta, susy
from .errors import CatalogError, ParameterError, RegimeError, SingularParameterError, UnsupportedError
from .susy import CouplingParams

KINDS = ("jc_resonant", "jc_nonresonant", "generalized", "dressed", "tcm_pauli", "tcm_fermionic")

KIND_DESCRIPTIONS = {
    "jc_resonant": "{Q,Q+} + c1 e^{it} Q + c2 e^{-it} Q+ with Q = s+ a (superoscillator)",
    "jc_nonresonant": "jc_resonant + delta * s3",
    "generalized": "[[f1, c1 e^{it} g], [c2 e^{-it} g+, f2]] with g from a coupling form",
    "dressed": "generalized with f = b1 N + b2 (a^2 + a+^2) + b3 etc., g = e1 a + e2 a+",
    "tcm_pauli": "a+a + R3 + 1/2 + c1 e^{it} a R+ + c2 e^{-it} a+ R-, R from Pauli sums",
    "tcm_fermionic": "{Q,Q+} + c1 e^{it} Q + c2 e^{-it} Q+ with Q = a+ R-, fermionic SU(2)",
}

G_FORMS = ("jc", "intensity", "multiphoton", "q_oscillator")


@dataclass(frozen=True)
class CouplingForm:
    """Choice of f1, f2 and g for the generalized 2x2 model.

    ``f1 = g g^dag + chi1 N^2`` and ``f2 = g^dag g + chi2 N^2`` (Kerr terms
    optional), so with ``chi = 0`` the model is ``{Q,Q^dag} + S`` for
    ``Q = sigma_+ g``.
    """

    g: Literal["jc", "intensity", "multiphoton", "q_oscillator"] = "jc"
    k: int = 1
    q: float | None = None
    chi1: float = 0.0
    chi2: float = 0.0

    def __post_init__(self):
        if self.g not in G_FORMS:
            raise CatalogError(f"unknown coupling form {self.g!r}; choose from {G_FORMS}")
        if self.g == "q_oscillator":
            if self.q is None or not self.q > 0 or self.q == 1:
                raise ParameterError(f"q-oscillator needs q > 0, q != 1 (got {self.q})")
        if self.g == "multiphoton" and int(self.k) < 1:
            raise ParameterError(f"multiphoton order must be >= 1 (got {self.k})")

    @property
    def photons(self) -> int:
        return int(self.k) if self.g == "multiphoton" else 1

    @property
    def is_kerr(self) -> bool:
        return self.chi1 != 0 or self.chi2 != 0


@dataclass(frozen=True)
class ModelSpec:
    kind: str
    coupling: CouplingParams
    delta: float = 0.0
    cutoff: int = 16
    n_molecules: int = 1
    coupling_form: CouplingForm | None = None
    dressed_params: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise CatalogError(f"unknown model kind {self.kind!r}")
        if int(self.cutoff) < 2:
            raise ParameterError(f"cutoff must be >= 2 (got {self.cutoff})")
        if int(self.n_molecules) < 1:
            raise ParameterError(f"n_molecules must be >= 1 (got {self.n_molecules})")
        if self.delta != 0 and self.kind != "jc_nonresonant":
            raise CatalogError(f"delta is only meaningful for jc_nonresonant, not {self.kind}")
        if self.n_molecules != 1 and not self.kind.startswith("tcm"):
            raise CatalogError(f"n_molecules is only meaningful for tcm kinds, not {self.kind}")
        if self.coupling_form is not None and self.kind != "generalized":
            raise CatalogError("coupling_form is only meaningful for the generalized kind")
        if self.dressed_params is not None and self.kind != "dressed":
            raise CatalogError("dressed_params is only meaningful for the dressed kind")
        if self.kind == "generalized" and self.coupling_form is None:
            object.__setattr__(self, "coupling_form", CouplingForm())
        if self.kind == "dressed":
            if self.dressed_params is None or len(self.dressed_params) != 8:
                raise CatalogError("dressed needs 8 parameters (b1, b2, b3, d1, d2, d3, e1, e2)")
            object.__setattr__(self, "dressed_params", tuple(float(x) for x in self.dressed_params))

    @property
    def spin_dim(self) -> int:
        return 2**self.n_molecules if self.kind.startswith("tcm") else 2

    @property
    def dim(self) -> int:
        return self.spin_dim * self.cutoff

    def with_params(self, **kw) -> "ModelSpec":
        """Copy with any of c1, c2, theta, delta, cutoff, n_molecules replaced."""
        cp = {k: kw.pop(k) for k in ("c1", "c2", "theta") if k in kw}
        coupling = dataclasses.replace(self.coupling, **cp) if cp else self.coupling
        return dataclasses.replace(self, coupling=coupling, **kw)

    def to_dict(self) -> dict:
        d = {
            "kind": self.kind,
            "c1": self.coupling.c1,
            "c2": self.coupling.c2,
            "theta": self.coupling.theta,
            "cutoff": self.cutoff,
        }
        if self.kind == "jc_nonresonant":
            d["delta"] = self.delta
        if self.kind.startswith("tcm"):
            d["n_molecules"] = self.n_molecules
        if self.coupling_form is not None:
            d["coupling_form"] = dataclasses.asdict(self.coupling_form)
        if self.dressed_params is not None:
            d["dressed_params"] = list(self.dressed_params)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ModelSpec":
        d = dict(d)
        allowed = {"kind", "c1", "c2", "theta", "delta", "cutoff", "n_molecules",
                   "coupling_form", "dressed_params"}
        unknown = set(d) - allowed
        if unknown:
            raise CatalogError(f"unknown model field {sorted(unknown)[0]!r}")
        if "kind" not in d:
            raise CatalogError("model needs a 'kind'")
        form = d.get("coupling_form")
        return cls(
            kind=d["kind"],
            coupling=CouplingParams(float(d.get("c1", 1.0)), float(d.get("c2", 1.0)),
                                    float(d.get("theta", 0.0))),
            delta=float(d.get("delta", 0.0)),
            cutoff=int(d.get("cutoff", 16)),
            n_molecules=int(d.get("n_molecules", 1)),
            coupling_form=CouplingForm(**form) if form is not None else None,
            dressed_params=tuple(d["dressed_params"]) if d.get("dressed_params") is not None else None,
        )


# ---------------------------------------------------------------------------
# coupling forms

@dataclass(frozen=True)
class CouplingMatrices:
    f1: np.ndarray
    f2: np.ndarray
    g: np.ndarray


def q_number(n, q: float):
    """Symmetric q-number [n]_q = (q^n - q^-n) / (q - q^-1)."""
    n = np.asarray(n, dtype=float)
    return (q**n - q ** (-n)) / (q - 1.0 / q)


def coupling_matrix(form: CouplingForm, b: quanta.BosonOps) -> CouplingMatrices:
    m = b.cutoff
    a, n_op = b.lower, b.number
    if form.g == "jc":
        g = a
    elif form.g == "intensity":
        g = a @ np.diag(np.sqrt(np.arange(m, dtype=float)))
    elif form.g == "multiphoton":
        if not 1 <= form.k < m:
            raise ParameterError(f"multiphoton order must satisfy 1 <= k < cutoff (k={form.k}, cutoff={m})")
        g = np.linalg.matrix_power(a, int(form.k))
    else:
        g = np.diag(np.sqrt(q_number(np.arange(1, m), form.q)), 1).astype(np.complex128)
    g = g.astype(np.complex128)
    gd = linops.dagger(g)
    n2 = n_op @ n_op
    return CouplingMatrices(f1=g @ gd + form.chi1 * n2, f2=gd @ g + form.chi2 * n2, g=g)


def dressed_matrices(params, b: quanta.BosonOps) -> CouplingMatrices:
    b1, b2, b3, d1, d2, d3, e1, e2 = params
    a, ad, n_op = b.lower, b.raising, b.number
    sq = a @ a + ad @ ad
    eye = b.identity
    return CouplingMatrices(
        f1=b1 * n_op + b2 * sq + b3 * eye,
        f2=d1 * n_op + d2 * sq + d3 * eye,
        g=e1 * a + e2 * ad,
    )


def dressed_susy_locus(e1: float, e2: float) -> tuple[float, ...]:
    """Dressed parameters for which f1, f2 are the partners of {Q, Q^dag}, Q = s+ g."""
    return (e1**2 + e2**2, e1 * e2, e1**2, e1**2 + e2**2, e1 * e2, e2**2, e1, e2)


def _two_block(f1, f2, upper, lower) -> np.ndarray:
    P = quanta.pauli()
    up = np.diag([1.0, 0.0]).astype(np.complex128)
    down = np.diag([0.0, 1.0]).astype(np.complex128)
    return (linops.kron(up, f1) + linops.kron(down, f2)
            + linops.kron(P.sp, upper) + linops.kron(P.sm, lower))


# ---------------------------------------------------------------------------
# builders

def su2_for(spec: ModelSpec) -> quanta.Su2Rep:
    n = spec.n_molecules
    if spec.kind == "tcm_pauli":
        return quanta.su2_pauli_sum(n)
    rep = quanta.fermion_rep_explicit(n) if n <= 3 else quanta.fermion_rep_general(n)
    return quanta.su2_fermionic(rep)


def _tcm(spec: ModelSpec) -> np.ndarray:
    p = spec.coupling
    rep = su2_for(spec)
    b = quanta.boson_ops(spec.cutoff)
    linops.check_dim(rep.dim * spec.cutoff)
    spin_eye = np.eye(rep.dim)
    diag = (linops.kron(spin_eye, b.number) + linops.kron(rep.r3, b.identity)
            + 0.5 * np.eye(rep.dim * spec.cutoff))
    if spec.kind == "tcm_pauli":
        # c1 multiplies a R+, c2 multiplies a^dag R-
        off = p.z1 * linops.kron(rep.r_plus, b.lower) + p.z2 * linops.kron(rep.r_minus, b.raising)
    else:
        # supercharge form Q = a^dag R-: c1 multiplies a^dag R-, c2 multiplies a R+
        off = p.z1 * linops.kron(rep.r_minus, b.raising) + p.z2 * linops.kron(rep.r_plus, b.lower)
    return diag + off


def tcm_charge(spec: ModelSpec) -> susy.Supercharge:
    """Q = a^dag R- for the fermionic TCM."""
    if spec.kind != "tcm_fermionic":
        raise CatalogError("the TCM supercharge exists only for the fermionic representation")
    rep = su2_for(spec)
    b = quanta.boson_ops(spec.cutoff)
    q = linops.kron(rep.r_minus, b.raising)
    return susy.Supercharge(q=q, q_dag=linops.dagger(q).copy(), provenance="custom")


def build(spec: ModelSpec) -> np.ndarray:
    linops.check_dim(spec.dim)
    p = spec.coupling
    kind = spec.kind
    if kind in ("jc_resonant", "jc_nonresonant"):
        q = susy.jc_charge(spec.cutoff)
        h = susy.susy_hamiltonian(q) + susy.s_operator(q, p)
        if kind == "jc_nonresonant":
            h = h + spec.delta * linops.kron(quanta.pauli().s3, np.eye(spec.cutoff))
        return h
    b = quanta.boson_ops(spec.cutoff)
    if kind == "generalized":
        m = coupling_matrix(spec.coupling_form, b)
    elif kind == "dressed":
        m = dressed_matrices(spec.dressed_params, b)
    else:
        return _tcm(spec)
    return _two_block(m.f1, m.f2, p.z1 * m.g, p.z2 * linops.dagger(m.g))


def build_many_particle(p: CouplingParams, n: int, cutoff: int,
                        rep: quanta.FermionRep | None = None) -> np.ndarray:
    """H + S for the many-particle superoscillator realisation."""
    q = susy.many_particle_charge(n, cutoff, rep)
    return susy.susy_hamiltonian(q) + susy.s_operator(q, p)


# ---------------------------------------------------------------------------
# bookkeeping: excitation number and truncation masks

def fock_index(spec: ModelSpec) -> np.ndarray:
    return np.tile(np.arange(spec.cutoff), spec.spin_dim)


def top_fock_mask(spec: ModelSpec) -> np.ndarray:
    """True for basis states on the top Fock level (truncation boundary)."""
    return fock_index(spec) == spec.cutoff - 1


def excitation_operator(spec: ModelSpec) -> np.ndarray | None:
    """Conserved excitation number, or None when the model has none (dressed)."""
    b = quanta.boson_ops(spec.cutoff)
    if spec.kind == "dressed":
        return None
    if spec.kind.startswith("tcm"):
        rep = su2_for(spec)
        spin = rep.r3 + 0.5 * spec.n_molecules * np.eye(rep.dim)
        return linops.kron(spin, b.identity) + linops.kron(np.eye(rep.dim), b.number)
    k = spec.coupling_form.photons if spec.kind == "generalized" else 1
    P = quanta.pauli()
    return k * linops.kron(P.sp @ P.sm, b.identity) + linops.kron(P.i2, b.number)


def tcm_susy_form_check(spec: ModelSpec) -> float:
    """Residual between the fermionic TCM and {Q,Q^dag} + S with Q = a^dag R-.

    Evaluated on the truncation-exact subspace (Fock levels below the top),
    where the truncated ladder operators obey [a, a^dag] = 1.
    """
    if spec.kind != "tcm_fermionic":
        raise CatalogError(f"susy form check needs tcm_fermionic, got {spec.kind}")
    q = tcm_charge(spec)
    ref = susy.susy_hamiltonian(q) + susy.s_operator(q, spec.coupling)
    keep = ~top_fock_mask(spec)
    return linops.fro(linops.compress(build(spec) - ref, keep))


def dressed_susy_form_residual(spec: ModelSpec) -> float:
    """On the SUSY locus: distance between the dressed model and {Q,Q^dag} + S, Q = s+ g."""
    if spec.kind != "dressed":
        raise CatalogError("dressed kind required")
    b = quanta.boson_ops(spec.cutoff)
    g = dressed_matrices(spec.dressed_params, b).g
    q = linops.kron(quanta.pauli().sp, g)
    charge = susy.Supercharge(q=q, q_dag=linops.dagger(q).copy())
    ref = susy.susy_hamiltonian(charge) + susy.s_operator(charge, spec.coupling)
    keep = ~top_fock_mask(spec)
    return linops.fro(linops.compress(build(spec) - ref, keep))


# ---------------------------------------------------------------------------
# closed forms

@dataclass(frozen=True)
class ClosedFormLevel:
    label: str
    value: complex
    branch: Literal["plus", "minus", "ground"]
    n: int


@dataclass(frozen=True)
class ClosedFormSpectrum:
    entries: tuple[ClosedFormLevel, ...]

    @property
    def values(self) -> np.ndarray:
        return np.array([e.value for e in self.entries], dtype=complex)


def closed_form_spectrum(spec: ModelSpec, n_levels: int) -> ClosedFormSpectrum:
    """Ground level plus ``n_levels`` doublets E_{n+1}^{+/-}, n = 0 .. n_levels-1."""
    if spec.kind not in ("jc_resonant", "jc_nonresonant"):
        raise UnsupportedError(f"no closed-form spectrum for {spec.kind}")
    beta = spec.coupling.beta
    delta = spec.delta if spec.kind == "jc_nonresonant" else 0.0
    entries = [ClosedFormLevel("E_0", complex(0.0 - delta), "ground", 0)]
    for n in range(int(n_levels)):
        root = cmath.sqrt(delta**2 + beta * (n + 1))
        entries.append(ClosedFormLevel(f"E_{n + 1}^-", complex(n + 1 - root), "minus", n + 1))
        entries.append(ClosedFormLevel(f"E_{n + 1}^+", complex(n + 1 + root), "plus", n + 1))
    return ClosedFormSpectrum(tuple(entries))


@dataclass(frozen=True)
class EigenvectorPair:
    psi: np.ndarray
    phi: np.ndarray
    value: complex


def _gamma(p: CouplingParams) -> float:
    if p.c2 == 0:
        raise SingularParameterError("c2 = 0: gamma and Gamma are undefined")
    if p.beta <= 0:
        raise RegimeError("explicit eigenvectors need beta > 0")
    return math.sqrt(p.c1 / p.c2)


def gamma_coefficient(p: CouplingParams, n: int, sign: int, delta: float = 0.0) -> complex:
    """Upper/lower component ratio of the non-resonant doublet n (sign = +1 or -1)."""
    if p.c2 == 0:
        raise SingularParameterError("c2 = 0: Gamma is undefined")
    root = math.sqrt(delta**2 + p.beta * (n + 1))
    return cmath.exp(1j * p.theta) / (p.c2 * math.sqrt(n + 1)) * (delta + sign * root)


def closed_form_eigenvectors(spec: ModelSpec, n: int = 0,
                             branch: Literal["plus", "minus", "ground"] = "plus") -> EigenvectorPair:
    """Normalised right eigenvector psi and its partner phi = eta_+ psi.

    ``branch='ground'`` ignores ``n``.  For the resonant model psi is
    (2 gamma)^{-1/2} (+/- e^{i theta} gamma |n>, |n+1>).
    """
    if spec.kind not in ("jc_resonant", "jc_nonresonant"):
        raise UnsupportedError(f"no closed-form eigenvectors for {spec.kind}")
    p = spec.coupling
    gam = _gamma(p)
    m = spec.cutoff
    delta = spec.delta if spec.kind == "jc_nonresonant" else 0.0
    psi = np.zeros(2 * m, dtype=complex)
    phi = np.zeros(2 * m, dtype=complex)
    if branch == "ground":
        psi[m] = gam**-0.5
        phi[m] = gam**0.5
        return EigenvectorPair(psi, phi, complex(-delta))
    if branch not in ("plus", "minus"):
        raise ParameterError(f"unknown branch {branch!r}")
    if not n + 1 < m:
        raise ParameterError(f"doublet n={n} needs cutoff > {n + 1}")
    sign = 1 if branch == "plus" else -1
    value = n + 1 + sign * math.sqrt(delta**2 + p.beta * (n + 1))
    if spec.kind == "jc_resonant":
        norm = (2 * gam) ** -0.5
        psi[n] = sign * cmath.exp(1j * p.theta) * gam * norm
        psi[m + n + 1] = norm
        phi[n] = sign * cmath.exp(1j * p.theta) * norm
        phi[m + n + 1] = gam * norm
    else:
        big = gamma_coefficient(p, n, sign, delta)
        norm = math.sqrt(gam / (gam**2 + abs(big) ** 2))
        psi[n] = big * norm
        psi[m + n + 1] = norm
        phi[n] = psi[n] / gam
        phi[m + n + 1] = psi[m + n + 1] * gam
    return EigenvectorPair(psi, phi, complex(value))


def closed_form_basis(spec: ModelSpec) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """All explicit (psi, phi) vectors that fit below the cutoff, as matrix columns."""
    pairs = [closed_form_eigenvectors(spec, branch="ground")]
    for n in range(spec.cutoff - 1):
        for br in ("minus", "plus"):
            pairs.append(closed_form_eigenvectors(spec, n, br))
    psi = np.column_stack([x.psi for x in pairs])
    phi = np.column_stack([x.phi for x in pairs])
    vals = np.array([x.value for x in pairs])
    return psi, phi, vals
