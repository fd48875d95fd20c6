"""Spectral analysis of catalogue models.

The default path splits a model into blocks of fixed excitation number,
diagonalises each block and embeds the block eigenvectors back into the full
space.  Models without a diagonal conserved excitation number go through one
dense solve.  Either way, an eigenvector with more than ``boundary_weight``
of its norm on the top Fock level is flagged as a truncation (boundary) state.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import linops, models
from .config import Tolerances
from .errors import (
    CoverageError,
    DefectiveMatrixError,
    NotBlockDiagonalError,
    PreconditionError,
    RegimeError,
)
from .pseudometric import MetricSpec
from .susy import CouplingParams

CLASSIFICATIONS = ("all_real", "conjugate_paired", "mixed", "critical_no_claim")


@dataclass(frozen=True)
class Block:
    label: float
    matrix: np.ndarray
    indices: np.ndarray
    boundary: bool


def block_decompose(h, n_ex, top_mask=None, tol: float = 1e-12) -> list[Block]:
    """Split ``h`` into the blocks of the diagonal conserved operator ``n_ex``."""
    h = linops.as_operator(h)
    n_ex = linops.as_operator(n_ex)
    if not linops.is_diagonal(n_ex):
        raise PreconditionError("excitation operator must be diagonal in the computational basis")
    scale = max(1.0, linops.fro(h) * linops.fro(n_ex))
    res = linops.fro(linops.commutator(h, n_ex)) / scale
    if res > tol:
        raise NotBlockDiagonalError(res)
    labels = np.round(np.real(np.diagonal(n_ex)), 9)
    top = np.zeros(h.shape[0], bool) if top_mask is None else np.asarray(top_mask, bool)
    blocks = []
    for lab in np.unique(labels):
        idx = np.flatnonzero(labels == lab)
        blocks.append(Block(float(lab), linops.compress(h, idx), idx, bool(top[idx].any())))
    return blocks


@dataclass(frozen=True)
class EigenRecord:
    value: complex
    block: float | None
    boundary: bool
    branch: str = ""
    closed_form: complex | None = None


@dataclass(frozen=True)
class SpectrumReport:
    model: models.ModelSpec | None
    eigenvalues: tuple[EigenRecord, ...]
    classification: str
    max_imag_interior: float
    pairing_defect: float
    closed_form_max_delta: float | None
    tolerances: Tolerances
    method: str = "dense"
    notes: tuple[str, ...] = ()

    @property
    def values(self) -> np.ndarray:
        return np.array([r.value for r in self.eigenvalues], dtype=complex)

    @property
    def boundary_mask(self) -> np.ndarray:
        return np.array([r.boundary for r in self.eigenvalues], dtype=bool)

    @property
    def interior_values(self) -> np.ndarray:
        return self.values[~self.boundary_mask]

    def to_dict(self) -> dict:
        return {
            "model": None if self.model is None else self.model.to_dict(),
            "classification": self.classification,
            "method": self.method,
            "count": len(self.eigenvalues),
            "interior_count": int((~self.boundary_mask).sum()),
            "max_imag_interior": self.max_imag_interior,
            "pairing_defect": self.pairing_defect,
            "closed_form_max_delta": self.closed_form_max_delta,
            "tolerances": self.tolerances.to_dict(),
            "notes": list(self.notes),
        }


@dataclass(frozen=True)
class Analysis:
    report: SpectrumReport
    eigensystem: linops.Eigensystem
    matrix: np.ndarray = field(repr=False)


def scaled_imag(values) -> np.ndarray:
    values = np.asarray(values, dtype=complex)
    return np.abs(values.imag) / (1.0 + np.abs(values))


def pairing_defect(values) -> float:
    """Greedy conjugate matching: max over pairs of |lambda_i - conj(lambda_j)|.

    A value may pair with itself, which costs 2|Im lambda|.
    """
    vals = np.asarray(values, dtype=complex)
    if vals.size == 0:
        return 0.0
    order = np.lexsort((np.abs(vals.imag), vals.real))
    vals = vals[order]
    free = np.ones(vals.size, bool)
    worst = 0.0
    for i in range(vals.size):
        if not free[i]:
            continue
        free[i] = False
        cand = np.flatnonzero(free)
        self_cost = 2 * abs(vals[i].imag)
        if cand.size:
            d = np.abs(vals[cand] - np.conj(vals[i]))
            j = int(np.argmin(d))
            if d[j] < self_cost:
                free[cand[j]] = False
                worst = max(worst, float(d[j]))
                continue
        worst = max(worst, self_cost)
    return worst


def classify(eigs, boundary_mask, p: CouplingParams, tol_real: float = 1e-9,
             tol_pair: float = 1e-8, *, blocks=None, branches=None,
             model: models.ModelSpec | None = None,
             tolerances: Tolerances | None = None, method: str = "dense") -> SpectrumReport:
    values = eigs.values if isinstance(eigs, linops.Eigensystem) else np.asarray(eigs, dtype=complex)
    boundary = np.asarray(boundary_mask, dtype=bool)
    if boundary.shape != values.shape:
        raise ValueError("boundary mask does not align with the eigenvalues")
    interior = values[~boundary]
    max_imag = float(scaled_imag(interior).max()) if interior.size else 0.0
    pair = pairing_defect(interior)
    scale = max(1.0, float(np.abs(interior).max())) if interior.size else 1.0
    if p.beta == 0:
        cls = "critical_no_claim"
    elif max_imag <= tol_real:
        cls = "all_real"
    elif pair <= tol_pair * scale:
        cls = "conjugate_paired"
    else:
        cls = "mixed"
    tol = tolerances or dataclasses.replace(Tolerances(), real=tol_real, pair=tol_pair)
    n = values.size
    blocks = [None] * n if blocks is None else list(blocks)
    branches = [""] * n if branches is None else list(branches)
    records = tuple(EigenRecord(complex(v), b, bool(bd), br)
                    for v, b, bd, br in zip(values, blocks, boundary, branches))
    return SpectrumReport(model=model, eigenvalues=records, classification=cls,
                          max_imag_interior=max_imag, pairing_defect=pair,
                          closed_form_max_delta=None, tolerances=tol, method=method)


# ---------------------------------------------------------------------------
# analysis driver

def real_gauge(spec: models.ModelSpec) -> np.ndarray | None:
    """Diagonal of a unitary U with U^dag H U real, or None.

    Every coupling term of the excitation-conserving kinds moves the boson
    number by k (k = photon order), so a phase exp(-i theta N / k) on the
    boson factor removes theta.
    """
    if spec.kind == "dressed":
        return None
    k = spec.coupling_form.photons if spec.kind == "generalized" else 1
    phase = np.exp(-1j * spec.coupling.theta * models.fock_index(spec) / k)
    if spec.kind == "tcm_fermionic":
        # Q = a^dag R-: theta rides on a^dag instead of a
        phase = phase.conj()
    return phase


def _gauged(spec: models.ModelSpec, h: np.ndarray):
    u = real_gauge(spec)
    if u is None:
        return h, None
    g = u.conj()[:, None] * h * u[None, :]
    if np.abs(g.imag).max(initial=0.0) > 1e-14 * max(1.0, np.abs(g).max()):
        return h, None
    return g.real.astype(np.complex128), u


def _branches(block_vals: np.ndarray, is_ground: bool) -> list[str]:
    if block_vals.size == 1:
        return ["ground" if is_ground else ""]
    if block_vals.size == 2:
        order = np.lexsort((np.arange(2), block_vals.real))
        out = ["", ""]
        out[order[0]], out[order[1]] = "minus", "plus"
        return out
    return [""] * block_vals.size


def _boundary_weight(vectors: np.ndarray, top: np.ndarray) -> np.ndarray:
    w = np.linalg.norm(vectors[top], axis=0) ** 2
    return w / np.linalg.norm(vectors, axis=0) ** 2


def analyze(spec: models.ModelSpec, tol: Tolerances | None = None, method: str = "auto",
            h: np.ndarray | None = None) -> Analysis:
    """Diagonalise a catalogue model and classify its spectrum.

    ``method`` is ``blocks``, ``dense`` or ``auto`` (blocks whenever the model
    has a diagonal excitation operator).
    """
    tol = tol or Tolerances()
    if h is None:
        h = models.build(spec)
    top = models.top_fock_mask(spec)
    n_ex = models.excitation_operator(spec) if method != "dense" else None
    use_blocks = n_ex is not None and linops.is_diagonal(n_ex)
    if method == "blocks" and not use_blocks:
        raise NotBlockDiagonalError(float("nan"))
    work, u = _gauged(spec, h)
    dim = h.shape[0]
    if use_blocks:
        blocks = block_decompose(work, n_ex, top)
        lowest = min(b.label for b in blocks)
        vals, right, left, labels, branches = [], [], [], [], []
        for b in blocks:
            es = linops.eig_general(b.matrix)
            r = np.zeros((dim, es.dim), dtype=complex)
            l = np.zeros((dim, es.dim), dtype=complex)
            r[b.indices] = es.right
            l[b.indices] = es.left
            vals.append(es.values)
            right.append(r)
            left.append(l)
            labels += [b.label] * es.dim
            branches += _branches(es.values, b.label == lowest)
        values = np.concatenate(vals)
        right = np.hstack(right)
        left = np.hstack(left)
        order = linops.sort_order(values)
        values, right, left = values[order], right[:, order], left[:, order]
        labels = [labels[i] for i in order]
        branches = [branches[i] for i in order]
        used = "blocks"
    else:
        es = linops.eig_general(work)
        values, right, left = es.values, es.right, es.left
        labels, branches = None, None
        used = "dense"
    if u is not None:
        right = u[:, None] * right
        left = u[:, None] * left
    eigs = linops.Eigensystem(values=values, right=right, left=left)
    boundary = _boundary_weight(right, top) > tol.boundary_weight
    report = classify(eigs, boundary, spec.coupling, tol.real, tol.pair, blocks=labels,
                      branches=branches, model=spec, tolerances=tol, method=used)
    if spec.kind in ("jc_resonant", "jc_nonresonant") and spec.coupling.beta > 0:
        report = attach_closed_form(report, closed_form_for(report))
    return Analysis(report=report, eigensystem=eigs, matrix=h)


def closed_form_for(report: SpectrumReport) -> models.ClosedFormSpectrum:
    """Closed-form levels for every interior doublet of a JC report."""
    n_interior = int((~report.boundary_mask).sum())
    return models.closed_form_spectrum(report.model, max(0, (n_interior - 1) // 2))


def _match(interior: np.ndarray, cf: models.ClosedFormSpectrum):
    target = cf.values
    if interior.size < target.size:
        raise CoverageError(f"{target.size - interior.size} closed-form levels have no interior partner",
                            [e.label for e in cf.entries[interior.size:]])
    cost = np.abs(interior[:, None] - target[None, :])
    rows, cols = linear_sum_assignment(cost)
    return rows, cols, cost[rows, cols]


def compare_closed_form(report: SpectrumReport, cf: models.ClosedFormSpectrum) -> float:
    """Max |delta| of the optimal one-to-one matching of interior values to ``cf``."""
    _, _, d = _match(report.interior_values, cf)
    return float(d.max()) if d.size else 0.0


def attach_closed_form(report: SpectrumReport, cf: models.ClosedFormSpectrum) -> SpectrumReport:
    """Copy of ``report`` with matched closed-form values and the max delta stored."""
    interior_idx = np.flatnonzero(~report.boundary_mask)
    rows, cols, d = _match(report.interior_values, cf)
    recs = list(report.eigenvalues)
    for r, c in zip(rows, cols):
        k = interior_idx[r]
        recs[k] = dataclasses.replace(recs[k], closed_form=complex(cf.values[c]))
    return dataclasses.replace(report, eigenvalues=tuple(recs),
                               closed_form_max_delta=float(d.max()) if d.size else 0.0)


# ---------------------------------------------------------------------------
# bi-orthonormal bases

@dataclass(frozen=True)
class BiorthoBasis:
    right: np.ndarray
    left: np.ndarray
    gram_defect: float
    completeness_defect: float
    clusters: tuple[tuple[int, ...], ...] = ()

    @property
    def degenerate(self) -> bool:
        return any(len(c) > 1 for c in self.clusters)


def clusters(values, tol: float = 1e-8) -> list[np.ndarray]:
    """Groups of eigenvalues closer than ``tol * max(1, max|lambda|)`` (transitively)."""
    values = np.asarray(values, dtype=complex)
    n = values.size
    scale = max(1.0, float(np.abs(values).max(initial=0.0)))
    parent = np.arange(n)

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    close = np.abs(values[:, None] - values[None, :]) <= tol * scale
    for i, j in zip(*np.nonzero(np.triu(close, 1))):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
    roots = np.array([find(i) for i in range(n)])
    return [np.flatnonzero(roots == r) for r in np.unique(roots)]


def biortho(eigs: linops.Eigensystem, cluster_tol: float = 1e-8) -> BiorthoBasis:
    """Rescale the left vectors so that <phi_m | psi_n> = delta_mn.

    Inside a cluster of (near-)degenerate eigenvalues the left vectors are
    replaced by the dual basis of the cluster, L_c <- L_c (G_cc^-1)^dag.
    """
    right = eigs.right
    left = eigs.left.copy()
    groups = clusters(eigs.values, cluster_tol)
    for idx in groups:
        g = linops.dagger(left[:, idx]) @ right[:, idx]
        s = np.linalg.svd(g, compute_uv=False)
        if s[-1] <= 1e-10 * max(1.0, s[0]):
            raise DefectiveMatrixError(
                f"rank loss in eigenvector cluster {idx.tolist()} (smallest singular value {s[-1]:.2e})")
        left[:, idx] = left[:, idx] @ linops.dagger(np.linalg.inv(g))
    n = right.shape[1]
    gram = linops.dagger(left) @ right
    gram_defect = float(np.abs(gram - np.eye(n)).max())
    completeness = linops.fro(right @ linops.dagger(left) - np.eye(n))
    return BiorthoBasis(right=right, left=left, gram_defect=gram_defect,
                        completeness_defect=completeness,
                        clusters=tuple(tuple(int(i) for i in c) for c in groups))


def eta_gram(basis: np.ndarray, m: MetricSpec) -> tuple[np.ndarray, float]:
    """B^dag eta B and its max-entry deviation from the identity."""
    if not m.positive_definite:
        raise RegimeError("eta inner product needs a positive-definite metric")
    b = np.asarray(basis)
    g = linops.dagger(b) @ linops.dense(m.matrix) @ b
    return g, float(np.abs(g - np.eye(g.shape[0])).max())


def eta_orthonormal_defect(eigs: linops.Eigensystem, m: MetricSpec, cluster_tol: float = 1e-8) -> float:
    """Deviation from identity of the eta-Gram of the right eigenbasis after
    eta-normalising each vector and orthonormalising within degenerate clusters."""
    if not m.positive_definite:
        raise RegimeError("eta inner product needs a positive-definite metric")
    eta = linops.dense(m.matrix)
    r = eigs.right.copy()
    for idx in clusters(eigs.values, cluster_tol):
        g = linops.dagger(r[:, idx]) @ eta @ r[:, idx]
        c = np.linalg.cholesky(0.5 * (g + linops.dagger(g)))
        r[:, idx] = r[:, idx] @ linops.dagger(np.linalg.inv(c))
    return eta_gram(r, m)[1]


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HomotopyStep:
    c2: float
    max_deviation: float
    classification: str


def hermitian_homotopy(spec: models.ModelSpec, steps: int = 10,
                       tol: Tolerances | None = None) -> tuple[HomotopyStep, ...]:
    """Move c2 linearly to c1 and record the distance of the sorted interior
    spectrum from that of the Hermitian model (c1 = c2)."""
    tol = tol or Tolerances()
    p = spec.coupling
    herm = analyze(spec.with_params(c2=p.c1), tol).report
    ref = np.sort(herm.interior_values.real)
    out = []
    for t in np.linspace(0.0, 1.0, steps + 1):
        c2 = (1 - t) * p.c2 + t * p.c1
        rep = analyze(spec.with_params(c2=float(c2)), tol).report
        vals = rep.interior_values
        vals = vals[np.lexsort((vals.imag, vals.real))]
        k = min(vals.size, ref.size)
        dev = float(np.abs(vals[:k] - ref[:k]).max()) if k else 0.0
        out.append(HomotopyStep(float(c2), dev, rep.classification))
    return tuple(out)
