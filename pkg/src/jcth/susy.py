"""Supercharges and the operators built linearly from them.

The non-Hermitian Hamiltonian of the whole package is ``H + S`` where
``H = {Q, Q^dag}`` and ``S = c1 e^{i theta} Q + c2 e^{-i theta} Q^dag``.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np
import scipy.sparse as sp

from . import linops, quanta
from .errors import AlgebraMismatchError, ParameterError, PreconditionError

Provenance = Literal["jc_oscillator", "many_particle", "extended", "custom"]


@dataclass(frozen=True)
class Supercharge:
    q: np.ndarray
    q_dag: np.ndarray
    provenance: Provenance = "custom"
    # grading operator anticommuting with q, when the construction supplies one
    gamma5: np.ndarray | None = field(default=None, repr=False, compare=False)

    @property
    def dim(self) -> int:
        return self.q.shape[0]


def custom_charge(q, *, check: bool = True, gamma5=None) -> Supercharge:
    q = linops.as_operator(q)
    if check:
        nil = linops.fro(linops.mul(q, q))
        if nil > 1e-13 * max(1.0, linops.fro(q)) ** 2:
            raise PreconditionError(f"supercharge is not nilpotent (||Q^2|| = {nil:.3e})")
    return Supercharge(q=q, q_dag=linops.dagger(q).copy(), provenance="custom", gamma5=gamma5)


def jc_charge(cutoff: int) -> Supercharge:
    """Superoscillator charge Q = sigma_+ (x) a on spin (x) Fock space."""
    b = quanta.boson_ops(cutoff)
    P = quanta.pauli()
    q = linops.kron(P.sp, b.lower)
    g5 = linops.kron(quanta.fermion_rep_explicit(1).gamma5, b.identity)
    return Supercharge(q=q, q_dag=linops.dagger(q).copy(), provenance="jc_oscillator", gamma5=g5)


def many_particle_charge(n: int, cutoff: int, rep: quanta.FermionRep | None = None,
                         sparse: bool = False) -> Supercharge:
    """Q = sum_i a_i psi_i^dag on fermions (x) N superoscillator modes.

    Each a_i is a standard truncated annihilator (superpotential
    W = sum_i x_i^2 / 2 up to an overall scale).  For N = 1 with psi = sigma_-
    this is exactly ``jc_charge``.  ``sparse=True`` keeps every operator in
    CSR form, which the N = 3 realisation (dim 4096) needs.
    """
    if rep is None:
        rep = quanta.fermion_rep_explicit(n) if n <= 3 else quanta.fermion_rep_general(n)
    if rep.count != n:
        raise ParameterError("fermion representation size does not match n")
    linops.check_dim(rep.dim * cutoff**n)
    modes = quanta.multimode_lowering(n, cutoff, sparse=sparse)
    q = sum(linops.kron(pd, a) for pd, a in zip(rep.psi_dag, modes))
    eye = sp.identity(cutoff**n, dtype=np.complex128, format="csr") if sparse else np.eye(cutoff**n)
    g5 = linops.kron(rep.gamma5, eye)
    return Supercharge(q=q, q_dag=linops.dagger(q).copy(), provenance="many_particle", gamma5=g5)


@dataclass(frozen=True)
class CouplingParams:
    c1: float
    c2: float
    theta: float = 0.0

    @property
    def beta(self) -> float:
        return self.c1 * self.c2

    @property
    def regime(self) -> str:
        if self.beta > 0:
            return "real_spectrum"
        if self.beta < 0:
            return "conjugate_pairs"
        return "critical"

    @property
    def z1(self) -> complex:
        return self.c1 * cmath.exp(1j * self.theta)

    @property
    def z2(self) -> complex:
        return self.c2 * cmath.exp(-1j * self.theta)

    def swapped(self) -> "CouplingParams":
        return CouplingParams(self.c2, self.c1, self.theta)


def susy_hamiltonian(q: Supercharge) -> np.ndarray:
    return linops.anticommutator(q.q, q.q_dag)


def s_operator(q: Supercharge, p: CouplingParams) -> np.ndarray:
    return p.z1 * q.q + p.z2 * q.q_dag


def _check_grading(q: Supercharge, gamma5: np.ndarray) -> None:
    eye = linops.eye_like(q.q)
    scale = max(1.0, linops.fro(q.q))
    defects = {
        "gamma5^2-1": linops.fro(linops.mul(gamma5, gamma5) - eye),
        "{gamma5,Q}": linops.fro(linops.anticommutator(gamma5, q.q)) / scale,
        "{gamma5,Q+}": linops.fro(linops.anticommutator(gamma5, q.q_dag)) / scale,
    }
    bad = {k: v for k, v in defects.items() if v > 1e-13}
    if bad:
        raise PreconditionError(f"gamma5 violates the grading algebra: {bad}")


def alt_root(q: Supercharge, p: CouplingParams, kind: Literal["s1", "s2", "s3"],
             gamma5: np.ndarray | None = None, epsilon: float = 1.0) -> np.ndarray:
    """Alternative square roots of beta*H.

    s1 = i gamma5 S, s2 = c1 e^{i theta} (H + eps^2) Q + c2 e^{-i theta} (H + eps^2)^{-1} Q^dag,
    s3 = i gamma5 s2.
    """
    if kind not in ("s1", "s2", "s3"):
        raise ParameterError(f"unknown square-root kind {kind!r}")
    if gamma5 is None:
        gamma5 = q.gamma5
    if kind in ("s1", "s3"):
        if gamma5 is None:
            raise PreconditionError(f"{kind} needs a grading operator gamma5")
        _check_grading(q, gamma5)
    if kind == "s1":
        return 1j * linops.mul(gamma5, s_operator(q, p))
    if epsilon == 0 or not np.isfinite(epsilon):
        raise ParameterError("epsilon must be a non-zero real number")
    h = susy_hamiltonian(q)
    e2 = float(epsilon) ** 2
    # functions of H through its eigenbasis keep [H, Q] = 0 at machine precision
    up = linops.herm_function(h, lambda w: w + e2)
    down = linops.herm_function(h, lambda w: 1.0 / (w + e2))
    s2 = p.z1 * linops.mul(up, q.q) + p.z2 * linops.mul(down, q.q_dag)
    if kind == "s2":
        return s2
    return 1j * linops.mul(gamma5, s2)


# ---------------------------------------------------------------------------
# extended supersymmetry

@dataclass(frozen=True)
class ExtendedCharges:
    charges: tuple[Supercharge, ...]
    c1s: tuple[float, ...]
    c2s: tuple[float, ...]
    thetas: tuple[float, ...]

    def __post_init__(self):
        n = len(self.charges)
        if not (len(self.c1s) == len(self.c2s) == len(self.thetas) == n) or n == 0:
            raise ParameterError("charges, c1s, c2s and thetas must have the same non-zero length")

    @property
    def beta_n(self) -> float:
        return float(sum(a * b for a, b in zip(self.c1s, self.c2s)))

    def residuals(self) -> dict[str, float]:
        """Largest defect of {Qa,Qb} = 0 and {Qa,Qb^dag} = delta_ab H."""
        h = susy_hamiltonian(self.charges[0])
        scale = max(1.0, linops.fro(h))
        qq = qqd = 0.0
        for a, qa in enumerate(self.charges):
            for b, qb in enumerate(self.charges):
                qq = max(qq, linops.fro(linops.anticommutator(qa.q, qb.q)) / scale)
                ac = linops.anticommutator(qa.q, qb.q_dag)
                qqd = max(qqd, linops.fro(ac - h if a == b else ac) / scale)
        return {"{Qa,Qb}": qq, "{Qa,Qb+}-delta H": qqd}


def extended_pair(q: Supercharge, c1s: Sequence[float] = (1.0, 1.0),
                  c2s: Sequence[float] = (1.0, 1.0),
                  thetas: Sequence[float] = (0.0, 0.0)) -> ExtendedCharges:
    """Two-charge extension on (auxiliary doublet) (x) (original space).

    Q_1 = tau_1 (x) Q and Q_2 = (tau_2 + i tau_3)/2 (x) sqrt(H); both square to
    zero, mutually anticommute and share the Hamiltonian 1 (x) H.
    """
    P = quanta.pauli()
    h = susy_hamiltonian(q)
    root = linops.herm_function(h, lambda w: np.sqrt(np.clip(w, 0.0, None)))
    q1 = linops.kron(P.s1, q.q)
    q2 = linops.kron((P.s2 + 1j * P.s3) / 2, root)
    charges = (
        Supercharge(q=q1, q_dag=linops.dagger(q1).copy(), provenance="extended"),
        Supercharge(q=q2, q_dag=linops.dagger(q2).copy(), provenance="extended"),
    )
    return ExtendedCharges(charges=charges, c1s=tuple(map(float, c1s)),
                           c2s=tuple(map(float, c2s)), thetas=tuple(map(float, thetas)))


def s_extended(x: ExtendedCharges) -> np.ndarray:
    hs = [susy_hamiltonian(c) for c in x.charges]
    scale = max(1.0, linops.fro(hs[0]))
    for k, h in enumerate(hs[1:], start=1):
        if linops.fro(h - hs[0]) > 1e-12 * scale:
            raise AlgebraMismatchError(f"charge {k} does not share the Hamiltonian of charge 0")
    out = 0 * x.charges[0].q
    for c, c1, c2, th in zip(x.charges, x.c1s, x.c2s, x.thetas):
        out = out + s_operator(c, CouplingParams(c1, c2, th))
    return out


# ---------------------------------------------------------------------------

def verify_superalgebra(q: Supercharge, relative: bool = False) -> dict[str, float]:
    """Frobenius residuals of Q^2, (Q^dag)^2, [H,Q], [H,Q^dag] and H - {Q,Q^dag}.

    With ``relative=True`` the nilpotency residuals are divided by ||Q||^2 and
    the commutators by ||H|| ||Q|| (each floored at 1).
    """
    h = susy_hamiltonian(q)
    res = {
        "Q^2": linops.fro(linops.mul(q.q, q.q)),
        "Qdag^2": linops.fro(linops.mul(q.q_dag, q.q_dag)),
        "[H,Q]": linops.fro(linops.commutator(h, q.q)),
        "[H,Qdag]": linops.fro(linops.commutator(h, q.q_dag)),
        "H-{Q,Qdag}": linops.fro(h - linops.anticommutator(q.q, q.q_dag)),
    }
    if relative:
        nq = max(1.0, linops.fro(q.q))
        nh = max(1.0, linops.fro(h))
        res["Q^2"] /= nq**2
        res["Qdag^2"] /= nq**2
        res["[H,Q]"] /= nh * nq
        res["[H,Qdag]"] /= nh * nq
        res["H-{Q,Qdag}"] /= nh
    return res
