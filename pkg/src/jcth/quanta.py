"""Concrete operator ingredients: truncated bosons, Pauli matrices, fermionic
representations of the Grassmann algebra and the two SU(2) realisations.

Basis conventions
-----------------
* Fock state ``|n>`` is row ``n`` (n = 0 .. cutoff-1).
* Spin up is row 0, so ``sigma_3 = diag(1, -1)`` and ``sigma_+ = [[0, 1], [0, 0]]``.
* Composite spaces are ``spin (x) boson`` with the spin factor as the slow index.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from . import linops
from .errors import ParameterError, UnsupportedRepresentationError

ALGEBRA_TOL = 1e-13


@dataclass(frozen=True)
class BosonOps:
    cutoff: int
    lower: np.ndarray
    raising: np.ndarray
    number: np.ndarray

    @property
    def identity(self) -> np.ndarray:
        return np.eye(self.cutoff, dtype=np.complex128)


def boson_ops(cutoff: int) -> BosonOps:
    """Ladder operators on the Fock states |0> .. |cutoff-1>.

    ``raising`` maps the top state to zero (truncation clip), so
    ``[a, a^dag] = 1`` only holds below the top level.
    """
    if int(cutoff) < 2:
        raise ParameterError(f"boson cutoff must be >= 2, got {cutoff}")
    m = linops.check_dim(int(cutoff))
    a = np.diag(np.sqrt(np.arange(1, m, dtype=float)), 1).astype(np.complex128)
    adag = linops.dagger(a).copy()
    n = np.diag(np.arange(m, dtype=float)).astype(np.complex128)
    return BosonOps(cutoff=m, lower=a, raising=adag, number=n)


def multimode_lowering(n_modes: int, cutoff: int, sparse: bool = False) -> list[np.ndarray]:
    """Annihilators of ``n_modes`` independent modes on the product Fock space."""
    b = boson_ops(cutoff)
    dims = [cutoff] * n_modes
    linops.check_dim(cutoff**n_modes)
    return [linops.embed(b.lower, i, dims, sparse=sparse) for i in range(n_modes)]


def boson_residuals(b: BosonOps) -> dict[str, float]:
    """Residuals of the ladder identities (commutator projected below the top level)."""
    m = b.cutoff
    comm = linops.commutator(b.lower, b.raising)
    proj = comm[: m - 1, : m - 1] - np.eye(m - 1)
    ns = np.arange(m)
    lower_action = b.lower @ np.eye(m)
    expected_lower = np.zeros((m, m))
    expected_lower[ns[:-1], ns[1:]] = np.sqrt(ns[1:])
    return {
        "raising-adjoint": linops.fro(b.raising - linops.dagger(b.lower)),
        "lower-action": linops.fro(lower_action - expected_lower),
        "number": linops.fro(b.raising @ b.lower - b.number),
        "[a,a+]-projected": linops.fro(proj),
        "top-clip": float(np.linalg.norm(b.raising[:, m - 1])),
    }


@dataclass(frozen=True)
class Pauli:
    s1: np.ndarray
    s2: np.ndarray
    s3: np.ndarray
    sp: np.ndarray
    sm: np.ndarray
    i2: np.ndarray


def pauli() -> Pauli:
    s1 = np.array([[0, 1], [1, 0]], dtype=np.complex128)
    s2 = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
    s3 = np.array([[1, 0], [0, -1]], dtype=np.complex128)
    return Pauli(s1=s1, s2=s2, s3=s3, sp=(s1 + 1j * s2) / 2, sm=(s1 - 1j * s2) / 2,
                 i2=np.eye(2, dtype=np.complex128))


# ---------------------------------------------------------------------------
# fermions

@dataclass(frozen=True)
class FermionRep:
    count: int
    psi: tuple[np.ndarray, ...]
    gamma5: np.ndarray

    @property
    def dim(self) -> int:
        return 2**self.count

    @property
    def psi_dag(self) -> tuple[np.ndarray, ...]:
        return tuple(linops.dagger(p) for p in self.psi)


def grading_operator(psi) -> np.ndarray:
    """gamma_5 = (-1)^N prod_i (2 psi_i^dag psi_i - 1)."""
    n = len(psi)
    dim = psi[0].shape[0]
    g = np.eye(dim, dtype=np.complex128)
    for p in psi:
        g = g @ (2 * linops.dagger(p) @ p - np.eye(dim))
    return (-1) ** n * g


def fermion_rep_explicit(n: int) -> FermionRep:
    """The explicit N = 1, 2, 3 matrices used for the many-particle metric."""
    P = pauli()
    s3, sm, i2 = P.s3, P.sm, P.i2
    k = linops.kron_all
    if n == 1:
        psi = (sm,)
    elif n == 2:
        psi = (k(s3, sm), k(sm, i2))
    elif n == 3:
        psi = (k(s3, sm, i2), k(i2, s3, sm), k(sm, i2, s3))
    else:
        raise UnsupportedRepresentationError(
            f"explicit representation exists only for N in {{1, 2, 3}}, got {n}; "
            "use fermion_rep_general")
    return FermionRep(count=n, psi=psi, gamma5=grading_operator(psi))


def fermion_rep_general(n: int) -> FermionRep:
    """Jordan-Wigner style string: psi_i = s3 x ... x s3 x s_- x 1 x ... x 1."""
    if int(n) < 1:
        raise ParameterError(f"fermion count must be >= 1, got {n}")
    n = int(n)
    linops.check_dim(2**n)
    P = pauli()
    psi = []
    for i in range(n):
        factors = [P.s3] * i + [P.sm] + [P.i2] * (n - i - 1)
        psi.append(linops.kron_all(*factors))
    return FermionRep(count=n, psi=tuple(psi), gamma5=grading_operator(psi))


def fermion_residuals(rep: FermionRep) -> dict[str, float]:
    """Largest Frobenius defect of each Grassmann / grading relation."""
    psi, psid = rep.psi, rep.psi_dag
    eye = np.eye(rep.dim)
    anti = linops.anticommutator
    pp = pd = pdd = 0.0
    for i in range(rep.count):
        for j in range(rep.count):
            pp = max(pp, linops.fro(anti(psi[i], psi[j])))
            pdd = max(pdd, linops.fro(anti(psid[i], psid[j])))
            pd = max(pd, linops.fro(anti(psi[i], psid[j]) - (i == j) * eye))
    g = rep.gamma5
    return {
        "{psi,psi}": pp,
        "{psi+,psi+}": pdd,
        "{psi,psi+}-delta": pd,
        "gamma5^2-1": linops.fro(g @ g - eye),
        "{gamma5,psi}": max(linops.fro(anti(g, p)) for p in psi),
        "{gamma5,psi+}": max(linops.fro(anti(g, p)) for p in psid),
    }


# ---------------------------------------------------------------------------
# SU(2)

@dataclass(frozen=True)
class Su2Rep:
    dim: int
    r_plus: np.ndarray
    r_minus: np.ndarray
    r3: np.ndarray
    kind: Literal["pauli_sum", "fermionic"]


def su2_pauli_sum(n_molecules: int) -> Su2Rep:
    """Collective spin of independent two-level molecules.

    The z-component embeds sigma_3/2 so that [R+, R-] = 2 R3 holds exactly.
    """
    n = int(n_molecules)
    if n < 1:
        raise ParameterError(f"molecule count must be >= 1, got {n}")
    linops.check_dim(2**n)
    P = pauli()
    dims = [2] * n
    rp = sum(linops.embed(P.sp, i, dims) for i in range(n))
    rm = sum(linops.embed(P.sm, i, dims) for i in range(n))
    r3 = sum(linops.embed(P.s3 / 2, i, dims) for i in range(n))
    return Su2Rep(dim=2**n, r_plus=rp, r_minus=rm, r3=r3, kind="pauli_sum")


def su2_fermionic(rep: FermionRep) -> Su2Rep:
    n = rep.count
    psi, psid = rep.psi, rep.psi_dag
    rm = sum(psi) / np.sqrt(n)
    rp = sum(psid) / np.sqrt(n)
    r3 = sum(linops.commutator(psid[i], psi[j]) for i in range(n) for j in range(n)) / (2 * n)
    return Su2Rep(dim=rep.dim, r_plus=rp, r_minus=rm, r3=r3, kind="fermionic")


def su2_residuals(rep: Su2Rep) -> dict[str, float]:
    c = linops.commutator
    rp, rm, r3 = rep.r_plus, rep.r_minus, rep.r3
    out = {
        "[R3,R+]-R+": linops.fro(c(r3, rp) - rp),
        "[R3,R-]+R-": linops.fro(c(r3, rm) + rm),
        "[R+,R-]-2R3": linops.fro(c(rp, rm) - 2 * r3),
    }
    if rep.kind == "fermionic":
        eye = np.eye(rep.dim)
        out.update({
            "R+^2": linops.fro(rp @ rp),
            "R-^2": linops.fro(rm @ rm),
            "{R-,R+}-1": linops.fro(linops.anticommutator(rm, rp) - eye),
            "R+R- - (R3+1/2)": linops.fro(rp @ rm - r3 - eye / 2),
            "R-R+ - (1/2-R3)": linops.fro(rm @ rp + r3 - eye / 2),
        })
    return out
