"""Built-in acceptance suite, shared by ``jcth --self-check`` and the tests.

Each ``criterion_N`` returns a :class:`CriterionResult` whose ``details``
hold only deterministic numbers; wall time is kept separately so that the
self-check report is byte-identical between runs.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import linops, models, pseudometric, shapeinv, spectra, susy
from .config import Tolerances
from .models import CouplingForm, ModelSpec
from .susy import CouplingParams

SEED = 20240611

# runtime budgets in seconds
BUDGETS = {1: 5.0, 2: 120.0, 9: 60.0, 10: 30.0}


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    details: dict = field(default_factory=dict)
    runtime: float = 0.0

    @property
    def within_budget(self) -> bool:
        budget = BUDGETS.get(self.number)
        return budget is None or self.runtime < budget

    def line(self) -> str:
        status = "PASS" if self.passed and self.within_budget else "FAIL"
        return f"[{status}] criterion {self.number}: {self.title}"


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        res.runtime = time.perf_counter() - t0
        return res

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


# ---------------------------------------------------------------------------
# 1

@_timed
def criterion_1() -> CriterionResult:
    """Resonant JC c1=4, c2=1, theta=0.7, cutoff 64 against the closed form."""
    spec = ModelSpec("jc_resonant", CouplingParams(4.0, 1.0, 0.7), cutoff=64)
    rep = spectra.analyze(spec).report
    delta = rep.closed_form_max_delta
    n_levels = (int((~rep.boundary_mask).sum()) - 1) // 2
    ok = delta is not None and delta <= 1e-10 and n_levels == spec.cutoff - 2
    return CriterionResult(1, "resonant JC closed-form spectrum", bool(ok),
                           {"max_delta": delta, "doublets_compared": n_levels,
                            "classification": rep.classification})


# ---------------------------------------------------------------------------
# 2 and 3: random model sweeps

GENERALIZED_FORMS = (
    CouplingForm("multiphoton", k=1),
    CouplingForm("multiphoton", k=2),
    CouplingForm("multiphoton", k=3),
    CouplingForm("jc", chi1=0.05, chi2=0.03),
    CouplingForm("intensity"),
    CouplingForm("q_oscillator", q=1.5),
)


def _random_specs(rng: np.random.Generator, count: int, sign: int) -> list[ModelSpec]:
    """``count`` specs cycling through the sweep kinds; sign of beta = ``sign``."""
    specs = []
    for i in range(count):
        mag1, mag2 = rng.uniform(0.2, 3.0, size=2)
        s1 = rng.choice([-1.0, 1.0])
        c1 = float(s1 * mag1)
        c2 = float(sign * s1 * mag2)
        theta = float(rng.uniform(-math.pi, math.pi))
        p = CouplingParams(c1, c2, theta)
        slot = i % 5
        if slot == 0:
            specs.append(ModelSpec("jc_resonant", p, cutoff=40))
        elif slot == 1:
            specs.append(ModelSpec("jc_nonresonant", p, delta=float(rng.uniform(-2, 2)), cutoff=40))
        elif slot in (2, 3):
            n = 1 + (i // 5) % 3
            specs.append(ModelSpec("tcm_pauli", p, cutoff=16, n_molecules=n))
        else:
            form = GENERALIZED_FORMS[(i // 5) % len(GENERALIZED_FORMS)]
            specs.append(ModelSpec("generalized", p, cutoff=32, coupling_form=form))
    return specs


@_timed
def criterion_2(points: int = 200) -> CriterionResult:
    """beta > 0 sweep: every interior eigenvalue real to 1e-9 (1 + |lambda|)."""
    rng = np.random.default_rng(SEED)
    worst = 0.0
    failures = 0
    kinds = {}
    for spec in _random_specs(rng, points, +1):
        rep = spectra.analyze(spec).report
        worst = max(worst, rep.max_imag_interior)
        failures += rep.max_imag_interior > 1e-9
        kinds[spec.kind] = kinds.get(spec.kind, 0) + 1
    return CriterionResult(2, "real spectra for beta > 0", failures == 0,
                           {"points": points, "worst_scaled_imag": worst, "failures": int(failures),
                            "per_kind": dict(sorted(kinds.items()))})


@_timed
def criterion_3(points: int = 50) -> CriterionResult:
    """beta < 0 sweep: conjugate pairing; beta = 0: no claim."""
    rng = np.random.default_rng(SEED + 1)
    worst = 0.0
    failures = 0
    no_complex = 0
    for spec in _random_specs(rng, points, -1):
        rep = spectra.analyze(spec).report
        interior = rep.interior_values
        scale = max(1.0, float(np.abs(interior).max()))
        worst = max(worst, rep.pairing_defect / scale)
        complex_count = int((spectra.scaled_imag(interior) > 1e-9).sum())
        no_complex += complex_count == 0
        failures += rep.pairing_defect > 1e-8 * scale or complex_count == 0
    critical = []
    for kind, kw in (("jc_resonant", {}), ("tcm_pauli", {"n_molecules": 2}),
                     ("jc_nonresonant", {"delta": 0.5})):
        for c1, c2 in ((1.0, 0.0), (0.0, 2.0)):
            spec = ModelSpec(kind, CouplingParams(c1, c2, 0.3), cutoff=12, **kw)
            critical.append(spectra.analyze(spec).report.classification)
    crit_ok = all(c == "critical_no_claim" for c in critical)
    return CriterionResult(3, "conjugate pairs for beta < 0", failures == 0 and crit_ok,
                           {"points": points, "worst_scaled_pairing": worst,
                            "points_without_complex": int(no_complex), "failures": int(failures),
                            "beta_zero_points": len(critical), "beta_zero_all_no_claim": crit_ok})


# ---------------------------------------------------------------------------
# 4 and 5: metrics

def catalog_pairs(p: CouplingParams) -> list[tuple[str, ModelSpec]]:
    pairs = [
        ("jc_resonant/eta", ModelSpec("jc_resonant", p, cutoff=24)),
        ("jc_nonresonant/eta", ModelSpec("jc_nonresonant", p, delta=0.8, cutoff=24)),
        ("dressed/eta", ModelSpec("dressed", p, cutoff=24,
                                  dressed_params=(1.1, 0.3, 0.2, 0.9, -0.2, 0.1, 0.7, 0.4))),
    ]
    for form in GENERALIZED_FORMS:
        label = form.g if form.g != "multiphoton" else f"multiphoton{form.k}"
        if form.is_kerr:
            label = "kerr"
        pairs.append((f"generalized[{label}]/eta", ModelSpec("generalized", p, cutoff=24, coupling_form=form)))
    for n in (1, 2, 3):
        pairs.append((f"tcm_pauli[N={n}]/eta_N", ModelSpec("tcm_pauli", p, cutoff=12, n_molecules=n)))
        pairs.append((f"tcm_fermionic[N={n}]/eta_su2", ModelSpec("tcm_fermionic", p, cutoff=12, n_molecules=n)))
    return pairs


COUPLINGS_POS = (CouplingParams(4.0, 1.0, 0.7), CouplingParams(-0.5, -2.0, -1.1))
COUPLINGS_NEG = (CouplingParams(1.5, -0.5, 0.3),)


@_timed
def criterion_4() -> CriterionResult:
    """||H^dag eta - eta H|| / scale <= 1e-12 for every catalogue pair."""
    worst = 0.0
    per = {}
    for p in COUPLINGS_POS + COUPLINGS_NEG:
        for label, spec in catalog_pairs(p):
            h = models.build(spec)
            for positive in ((True, False) if p.beta > 0 else (False,)):
                r = linops.residual_pseudoherm(h, pseudometric.eta_for(spec, positive).matrix)
                per[label] = max(per.get(label, 0.0), r)
                worst = max(worst, r)
        for n in (2, 3):
            q = susy.many_particle_charge(n, 3)
            h = susy.susy_hamiltonian(q) + susy.s_operator(q, p)
            eta = pseudometric.eta_many_particle(p, n, 3, positive=False, sparse=True)
            r = linops.residual_pseudoherm(h, eta)
            label = f"many_particle[N={n}]/eta_N"
            per[label] = max(per.get(label, 0.0), r)
            worst = max(worst, r)
    return CriterionResult(4, "pseudo-hermiticity of every catalogue pair", worst <= 1e-12,
                           {"worst": worst, "pairs": dict(sorted(per.items()))})


@_timed
def criterion_5() -> CriterionResult:
    """rho H rho^-1 Hermitian to 1e-10 and isospectral to 1e-9 (beta > 0)."""
    worst_herm = 0.0
    worst_iso = 0.0
    count = 0
    for p in COUPLINGS_POS:
        for _, spec in catalog_pairs(p):
            h = models.build(spec)
            m = pseudometric.eta_for(spec, True)
            img = pseudometric.quasi_map(h, m)
            worst_herm = max(worst_herm, pseudometric.hermiticity_defect(img))
            herm_vals = np.linalg.eigvalsh(0.5 * (img + linops.dagger(img)))
            # both sorted by real part
            vals = linops.eig_general(h).values
            worst_iso = max(worst_iso, float(np.abs(vals - herm_vals).max()))
            count += 1
    ok = worst_herm <= 1e-10 and worst_iso <= 1e-9
    return CriterionResult(5, "quasi-hermiticity and isospectrality", ok,
                           {"pairs": count, "worst_hermiticity": worst_herm, "worst_isospectral": worst_iso})


# ---------------------------------------------------------------------------
# 6 and 7: bi-orthonormal and eta_+ structure

@_timed
def criterion_6() -> CriterionResult:
    spec = ModelSpec("jc_resonant", CouplingParams(4.0, 1.0, 0.7), cutoff=32)
    an = spectra.analyze(spec)
    basis = spectra.biortho(an.eigensystem)
    psi, phi, _ = models.closed_form_basis(spec)
    gram = linops.dagger(psi) @ phi
    explicit = float(np.abs(gram - np.eye(gram.shape[0])).max())
    ok = basis.gram_defect <= 1e-10 and basis.completeness_defect <= 1e-9 and explicit <= 1e-12
    return CriterionResult(6, "bi-orthonormal completeness", ok,
                           {"gram_defect": basis.gram_defect, "completeness_defect": basis.completeness_defect,
                            "explicit_vectors_defect": explicit, "degenerate_clusters": basis.degenerate})


@_timed
def criterion_7() -> CriterionResult:
    worst = 0.0
    per = {}
    for spec in (ModelSpec("jc_resonant", CouplingParams(4.0, 1.0, 0.7), cutoff=24),
                 ModelSpec("jc_nonresonant", CouplingParams(4.0, 1.0, 0.7), delta=0.9, cutoff=24),
                 ModelSpec("jc_nonresonant", CouplingParams(0.5, 2.0, -0.4), delta=-1.3, cutoff=24)):
        psi, _, _ = models.closed_form_basis(spec)
        _, d = spectra.eta_gram(psi, pseudometric.eta_for(spec, True))
        per[f"{spec.kind}(c1={spec.coupling.c1},c2={spec.coupling.c2},delta={spec.delta})"] = d
        worst = max(worst, d)
    return CriterionResult(7, "eta_+ orthonormality of the explicit eigenvectors", worst <= 1e-12,
                           {"worst": worst, "cases": per})


# ---------------------------------------------------------------------------
# 8: superalgebra

def _rel(x, ref_norm: float) -> float:
    return linops.fro(x) / max(1.0, ref_norm)


def superalgebra_residuals(q: susy.Supercharge, p: CouplingParams,
                           epsilons=(0.5, 1.0, 2.0)) -> dict[str, float]:
    """Relative residuals of Q^2 = 0, [H, Q] = 0 and of the squares of all roots of beta H."""
    out = dict(susy.verify_superalgebra(q, relative=True))
    h = susy.susy_hamiltonian(q)
    bh = p.beta * h
    nbh = linops.fro(bh)
    s = susy.s_operator(q, p)
    out["S^2-bH"] = _rel(linops.mul(s, s) - bh, nbh)
    s1 = susy.alt_root(q, p, "s1")
    out["S1^2-bH"] = _rel(linops.mul(s1, s1) - bh, nbh)
    for eps in epsilons:
        s2 = susy.alt_root(q, p, "s2", epsilon=eps)
        out[f"S2^2-bH(eps={eps})"] = _rel(linops.mul(s2, s2) - bh, nbh)
    s3 = susy.alt_root(q, p, "s3")
    out["S3^2-bH"] = _rel(linops.mul(s3, s3) - bh, nbh)
    return out


def extended_residuals(q: susy.Supercharge, c1s, c2s, thetas) -> dict[str, float]:
    x = susy.extended_pair(q, c1s, c2s, thetas)
    out = dict(x.residuals())
    s = susy.s_extended(x)
    big_h = susy.susy_hamiltonian(x.charges[0])
    bh = x.beta_n * big_h
    out["SN^2-bNH"] = _rel(linops.mul(s, s) - bh, linops.fro(bh))
    return out


@_timed
def criterion_8() -> CriterionResult:
    p = CouplingParams(1.7, 0.6, 0.45)
    c1s, c2s, thetas = (1.7, -0.4), (0.6, 1.3), (0.45, -0.9)
    realisations = {
        "jc": susy.jc_charge(32),
        "many_particle[N=2]": susy.many_particle_charge(2, 8, sparse=True),
        "many_particle[N=3]": susy.many_particle_charge(3, 8, sparse=True),
    }
    per = {}
    worst = 0.0
    for name, q in realisations.items():
        res = superalgebra_residuals(q, p)
        res.update({f"ext:{k}": v for k, v in extended_residuals(q, c1s, c2s, thetas).items()})
        per[name] = res
        worst = max(worst, max(res.values()))
    return CriterionResult(8, "superalgebra and square roots of beta H", worst <= 1e-11,
                           {"worst": worst, "residuals": per})


# ---------------------------------------------------------------------------
# 9: many-particle metric

def eta_n_residual(p: CouplingParams, n: int, cutoff: int) -> float:
    """||H^dag - eta_N H eta_N^-1||_F / max(1, ||H||_F) for the many-particle model."""
    q = susy.many_particle_charge(n, cutoff, sparse=True)
    h = (susy.susy_hamiltonian(q) + susy.s_operator(q, p)).tocsr()
    eta = pseudometric.eta_many_particle(p, n, cutoff, positive=False, sparse=True)
    inv = eta.copy()
    inv.data = 1.0 / inv.data
    conj = eta @ h @ inv
    return linops.fro(linops.dagger(h) - conj) / max(1.0, linops.fro(h))


@_timed
def criterion_9() -> CriterionResult:
    cases = {}
    for p in (CouplingParams(3.0, 0.5, 0.4), CouplingParams(-1.2, 0.8, -0.3)):
        for n in (2, 3):
            # 8 Fock levels per mode: dims 4 x 64 and 8 x 512
            cases[f"N={n},c1={p.c1},c2={p.c2}"] = eta_n_residual(p, n, 8)
    worst = max(cases.values())
    return CriterionResult(9, "eta_N pseudo-hermiticity of the many-particle models", worst <= 1e-11,
                           {"worst": worst, "cases": cases})


def conjecture_support(p: CouplingParams, n: int, cutoff: int) -> dict:
    """eta_N residual for N >= 4 (general fermion representation); reported, never asserted."""
    r = eta_n_residual(p, n, cutoff)
    return {"n": n, "cutoff": cutoff, "residual": r, "status": "conjecture-support"}


# ---------------------------------------------------------------------------
# 10: shape invariance

@_timed
def criterion_10() -> CriterionResult:
    f = shapeinv.morse(2.0, 1.0)
    p = CouplingParams(1.0, 1.0, 0.0)
    alg = shapeinv.energies(f, 2, p)
    e_ok = np.allclose(alg.energies, (0.0, 3.0, 4.0), rtol=0, atol=1e-14)
    plus, minus = alg.jcth[0]
    doublet_ok = abs(plus - (3 + math.sqrt(3))) <= 1e-14 and abs(minus - (3 - math.sqrt(3))) <= 1e-14
    rep = shapeinv.grid_report(f, p, points=2000)
    ok = (e_ok and doublet_ok and rep.fine_defect <= 5e-3 and rep.richardson_factor >= 3.0
          and rep.max_imag <= 1e-6 and rep.identity_residual <= 1e-10)
    return CriterionResult(10, "Morse shape invariance, algebraic and on the grid", bool(ok),
                           {"energies": list(alg.energies), "doublet": [minus, plus],
                            "grid_levels": [v.real for v in rep.fine], "grid_defect": rep.fine_defect,
                            "richardson_factor": rep.richardson_factor, "grid_max_imag": rep.max_imag,
                            "identity_residual": rep.identity_residual})


CRITERIA = (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10)


def run_all() -> list[CriterionResult]:
    return [c() for c in CRITERIA]
