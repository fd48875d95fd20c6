"""Command-line front end.

    jcth run CONFIG [--out DIR] [--tol-real X] [--tol-pair X] [--max-dim N]
    jcth verify REPORT
    jcth --list-models
    jcth --self-check [--out DIR]

Config and report are JSON documents carrying ``schema_version``.  Each run
(or sweep point) writes one CSV spectrum table.  Exit status: 0 when every
verdict passes, 1 when any check fails or errors, 2 for an invalid config.
Set ``JCTH_THREADS`` to evaluate sweep points on that many threads.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import itertools
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, acceptance, config, linops, models, pseudometric, shapeinv, spectra, susy
from .config import Tolerances
from .errors import CatalogError, ConfigError, JCTHError, WriteError
from .models import ModelSpec

SCHEMA_VERSION = 1
CSV_HEADER = ["index", "block", "branch", "re", "im", "boundary", "closed_form_re", "closed_form_delta"]
CHECKS = ("superalgebra", "pseudoherm", "quasiherm", "spectrum_reality", "closed_form",
          "biortho", "eta_gram", "conjecture_etaN", "shapeinv_grid")
SWEEP_KEYS = ("c1", "c2", "theta", "delta")
JC_KINDS = ("jc_resonant", "jc_nonresonant")


def applicable(check: str, spec: ModelSpec) -> bool:
    if check == "closed_form":
        return spec.kind in JC_KINDS
    if check == "superalgebra":
        if spec.kind == "generalized":
            return not spec.coupling_form.is_kerr
        return spec.kind in JC_KINDS + ("tcm_fermionic",)
    return True


# ---------------------------------------------------------------------------
# config

@dataclass(frozen=True)
class RunSpec:
    name: str
    model: ModelSpec
    checks: tuple[str, ...]
    sweep: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    output: str = ""
    family: dict | None = None
    many_particle: dict | None = None


def _number_list(v, path):
    if not isinstance(v, list) or not v:
        raise ConfigError(path, "expected a non-empty list of numbers")
    for i, x in enumerate(v):
        if isinstance(x, bool) or not isinstance(x, (int, float)) or not math.isfinite(x):
            raise ConfigError(f"{path}[{i}]", "expected a finite number")
    return [float(x) for x in v]


def parse_config(doc) -> list[RunSpec]:
    if not isinstance(doc, dict):
        raise ConfigError("$", "config must be a JSON object")
    unknown = set(doc) - {"schema_version", "runs"}
    if unknown:
        raise ConfigError(sorted(unknown)[0], "unknown top-level field")
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ConfigError("schema_version", f"must be {SCHEMA_VERSION}")
    runs = doc.get("runs")
    if not isinstance(runs, list) or not runs:
        raise ConfigError("runs", "at least one run is required")
    out, names = [], set()
    for i, r in enumerate(runs):
        path = f"runs[{i}]"
        if not isinstance(r, dict):
            raise ConfigError(path, "run must be an object")
        unknown = set(r) - {"name", "model", "checks", "sweep", "tolerances", "output", "family", "many_particle"}
        if unknown:
            raise ConfigError(f"{path}.{sorted(unknown)[0]}", "unknown field")
        name = r.get("name")
        if not isinstance(name, str) or not name:
            raise ConfigError(f"{path}.name", "non-empty string required")
        if name in names:
            raise ConfigError(f"{path}.name", f"duplicate run name {name!r}")
        names.add(name)
        try:
            model = ModelSpec.from_dict(r.get("model") or {})
        except (JCTHError, TypeError, ValueError) as exc:
            raise ConfigError(f"{path}.model", str(exc)) from exc
        checks = r.get("checks", [])
        if not isinstance(checks, list):
            raise ConfigError(f"{path}.checks", "expected a list")
        for j, c in enumerate(checks):
            if c not in CHECKS:
                raise ConfigError(f"{path}.checks[{j}]", f"unknown check {c!r}")
            if not applicable(c, model):
                raise ConfigError(f"{path}.checks[{j}]", f"check {c!r} does not apply to {model.kind}")
        sweep = r.get("sweep") or {}
        if not isinstance(sweep, dict):
            raise ConfigError(f"{path}.sweep", "expected an object")
        clean = {}
        for k, v in sweep.items():
            if k not in SWEEP_KEYS:
                raise ConfigError(f"{path}.sweep.{k}", f"sweepable parameters are {SWEEP_KEYS}")
            if k == "delta" and model.kind != "jc_nonresonant":
                raise ConfigError(f"{path}.sweep.delta", "delta only applies to jc_nonresonant")
            clean[k] = _number_list(v, f"{path}.sweep.{k}")
        tol = r.get("tolerances") or {}
        try:
            Tolerances.from_dict(tol)
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"{path}.tolerances", f"invalid tolerance {exc}") from exc
        family = r.get("family")
        if "shapeinv_grid" in checks:
            if not isinstance(family, dict) or family.get("name") not in ("oscillator", "morse", "tanh"):
                raise ConfigError(f"{path}.family", "shapeinv_grid needs family.name in oscillator/morse/tanh")
        mp = r.get("many_particle")
        if "conjecture_etaN" in checks:
            if not isinstance(mp, dict) or not isinstance(mp.get("n"), int) or mp["n"] < 1:
                raise ConfigError(f"{path}.many_particle", "conjecture_etaN needs many_particle.n >= 1")
        output = r.get("output", name)
        if not isinstance(output, str) or not output:
            raise ConfigError(f"{path}.output", "non-empty string required")
        out.append(RunSpec(name, model, tuple(checks), clean, dict(tol), output, family, mp))
    return out


def load_config(path) -> list[RunSpec]:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(str(path), f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(str(path), f"invalid JSON: {exc}") from exc
    return parse_config(doc)


# ---------------------------------------------------------------------------
# checks

def _verdict(residuals: dict, thresholds: dict, **extra) -> dict:
    ok = all(residuals[k] <= thresholds[k] for k in thresholds)
    return {"verdict": "pass" if ok else "fail", "residuals": residuals, "thresholds": thresholds, **extra}


def _not_applicable(reason: str) -> dict:
    return {"verdict": "not_applicable", "reason": reason}


def _family(d: dict) -> shapeinv.ShapeInvariantFamily:
    name = d["name"]
    if name == "oscillator":
        return shapeinv.oscillator()
    if name == "morse":
        return shapeinv.morse(float(d.get("A", 2.0)), float(d.get("B", 1.0)))
    return shapeinv.tanh_family(float(d.get("A", 3.0)))


def _charge_for(spec: ModelSpec) -> susy.Supercharge:
    if spec.kind in JC_KINDS:
        return susy.jc_charge(spec.cutoff)
    if spec.kind == "tcm_fermionic":
        return models.tcm_charge(spec)
    g = models.coupling_matrix(spec.coupling_form, models.quanta.boson_ops(spec.cutoff)).g
    return susy.custom_charge(linops.kron(models.quanta.pauli().sp, g))


def run_check(check: str, run: RunSpec, spec: ModelSpec, an: spectra.Analysis, tol: Tolerances) -> dict:
    p = spec.coupling
    h = an.matrix
    if check == "superalgebra":
        q = _charge_for(spec)
        res = susy.verify_superalgebra(q, relative=True)
        hq = susy.susy_hamiltonian(q)
        s = susy.s_operator(q, p)
        res["S^2-bH"] = linops.fro(s @ s - p.beta * hq) / max(1.0, abs(p.beta) * linops.fro(hq))
        return _verdict(res, {k: tol.superalgebra for k in res})
    if check == "pseudoherm":
        m = pseudometric.eta_for(spec, positive=False)
        res = {"pseudoherm": linops.residual_pseudoherm(h, m.matrix)}
        return _verdict(res, {"pseudoherm": tol.pseudoherm})
    if check == "quasiherm":
        if p.beta <= 0:
            return _not_applicable("needs beta > 0")
        m = pseudometric.eta_for(spec, positive=True)
        img = pseudometric.quasi_map(h, m)
        herm_vals = np.linalg.eigvalsh(0.5 * (img + linops.dagger(img)))
        res = {"hermiticity": pseudometric.hermiticity_defect(img),
               "isospectral": float(np.abs(an.eigensystem.values - herm_vals).max())}
        extra = {}
        if spec.kind in JC_KINDS:
            ic = pseudometric.image_coupling(spec)
            extra["image_coupling"] = {"computed": ic.computed, "sqrt_beta": ic.sqrt_beta,
                                       "beta": ic.beta, "matches": ic.matches}
        return _verdict(res, {"hermiticity": tol.quasi_herm, "isospectral": tol.isospectral}, **extra)
    if check == "spectrum_reality":
        rep = an.report
        if p.beta == 0:
            return _not_applicable("critical_no_claim")
        if p.beta > 0:
            return _verdict({"max_imag_interior": rep.max_imag_interior}, {"max_imag_interior": tol.real})
        interior = rep.interior_values
        scale = max(1.0, float(np.abs(interior).max(initial=0.0)))
        has_complex = bool((spectra.scaled_imag(interior) > tol.real).any())
        res = {"pairing_defect_scaled": rep.pairing_defect / scale,
               "missing_complex": 0.0 if has_complex else 1.0}
        return _verdict(res, {"pairing_defect_scaled": tol.pair, "missing_complex": 0.0})
    if check == "closed_form":
        if p.beta <= 0:
            return _not_applicable("closed forms are compared for beta > 0")
        return _verdict({"max_delta": an.report.closed_form_max_delta}, {"max_delta": tol.closed_form})
    if check == "biortho":
        b = spectra.biortho(an.eigensystem, tol.cluster)
        res = {"gram": b.gram_defect, "completeness": b.completeness_defect}
        return _verdict(res, {"gram": tol.gram, "completeness": tol.completeness},
                        degenerate_clusters=b.degenerate)
    if check == "eta_gram":
        if p.beta <= 0:
            return _not_applicable("needs beta > 0")
        m = pseudometric.eta_for(spec, positive=True)
        res = {"eigenbasis": spectra.eta_orthonormal_defect(an.eigensystem, m, tol.cluster)}
        if spec.kind in JC_KINDS:
            psi, _, _ = models.closed_form_basis(spec)
            res["closed_form_vectors"] = spectra.eta_gram(psi, m)[1]
        return _verdict(res, {k: tol.eta_gram for k in res})
    if check == "conjecture_etaN":
        n = int(run.many_particle["n"])
        cutoff = int(run.many_particle.get("cutoff", 4))
        r = acceptance.eta_n_residual(p, n, cutoff)
        status = "verified" if n <= 3 else "conjecture-support"
        return _verdict({"eta_N": r}, {"eta_N": 1e-11}, status=status)
    if check == "shapeinv_grid":
        f = _family(run.family)
        pts = int(run.family.get("points", 2000))
        g = shapeinv.grid_report(f, p, points=pts)
        res = {"fine_defect": g.fine_defect, "inverse_richardson": 1.0 / g.richardson_factor,
               "grid_imag": g.max_imag if p.beta > 0 else 0.0, "identity": g.identity_residual}
        return _verdict(res, {"fine_defect": 5e-3, "inverse_richardson": 1.0 / 3.0,
                              "grid_imag": 1e-6, "identity": 1e-10},
                        resolution_warning=g.resolution_warning, targets=list(g.targets))
    raise CatalogError(f"unknown check {check}")


# ---------------------------------------------------------------------------
# execution

def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def emit_spectrum_csv(report: spectra.SpectrumReport, path) -> None:
    """Write the spectrum table; rows follow the report's (re, im) order."""
    recs = list(report.eigenvalues)
    order = np.lexsort((np.array([r.value.imag for r in recs]), np.array([r.value.real for r in recs])))
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_HEADER)
            for i, k in enumerate(order):
                r = recs[k]
                block = "" if r.block is None else (str(int(r.block)) if float(r.block).is_integer() else _fmt(r.block))
                show_cf = r.closed_form is not None and not r.boundary
                w.writerow([
                    i, block, r.branch, _fmt(r.value.real), _fmt(r.value.imag),
                    "true" if r.boundary else "false",
                    _fmt(r.closed_form.real) if show_cf else "",
                    _fmt(abs(r.value - r.closed_form)) if show_cf else "",
                ])
    except OSError as exc:
        raise WriteError(f"cannot write {path}: {exc}") from exc


def _points(run: RunSpec) -> list[dict]:
    if not run.sweep:
        return [{}]
    keys = [k for k in SWEEP_KEYS if k in run.sweep]
    return [dict(zip(keys, combo)) for combo in itertools.product(*(run.sweep[k] for k in keys))]


def _evaluate_point(run: RunSpec, params: dict, tol: Tolerances, out_dir: Path, csv_name: str) -> dict:
    record = {"params": params}
    try:
        spec = run.model.with_params(**params)
        record["model"] = spec.to_dict()
        record["beta"] = spec.coupling.beta
        an = spectra.analyze(spec, tol)
    except JCTHError as exc:
        record["error"] = f"{type(exc).__name__}: {exc}"
        record["checks"] = {c: {"verdict": "error", "reason": record["error"]} for c in run.checks}
        return record
    record["spectrum"] = an.report.to_dict()
    emit_spectrum_csv(an.report, out_dir / csv_name)
    record["csv"] = csv_name
    checks = {}
    for c in run.checks:
        try:
            checks[c] = run_check(c, run, spec, an, tol)
        except JCTHError as exc:
            checks[c] = {"verdict": "error", "reason": f"{type(exc).__name__}: {exc}"}
    record["checks"] = checks
    return record


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("JCTH_THREADS", "1")))
    except ValueError:
        return 1


def execute(runs: list[RunSpec], out_dir, cli_tol: dict | None = None) -> dict:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    doc_runs = []
    for run in runs:
        tol = Tolerances().merged(run.tolerances).merged(cli_tol)
        pts = _points(run)
        names = [f"{run.output}.csv" if len(pts) == 1 else f"{run.output}_{i:03d}.csv" for i in range(len(pts))]
        with ThreadPoolExecutor(max_workers=_threads()) as pool:
            records = list(pool.map(lambda a: _evaluate_point(run, a[0], tol, out_dir, a[1]), zip(pts, names)))
        entry = {"name": run.name, "checks": list(run.checks), "tolerances": tol.to_dict(), "points": records}
        if run.sweep:
            betas = [r.get("beta") for r in records if "beta" in r]
            classes = {}
            for r in records:
                if "spectrum" in r:
                    b = r["beta"]
                    key = "beta>0" if b > 0 else "beta<0" if b < 0 else "beta=0"
                    classes.setdefault(key, set()).add(r["spectrum"]["classification"])
            entry["sweep_summary"] = {
                "points": len(records),
                "critical_beta0": "evaluated" if any(b == 0 for b in betas) else "not-evaluated",
                "classifications": {k: sorted(v) for k, v in sorted(classes.items())},
            }
        doc_runs.append(entry)
    verdicts = [c["verdict"] for r in doc_runs for pt in r["points"] for c in pt["checks"].values()]
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": "jcth",
        "version": __version__,
        "runs": doc_runs,
        "summary": {v: verdicts.count(v) for v in ("pass", "fail", "error", "not_applicable")},
        "exit_code": exit_code(doc_runs),
    }


def exit_code(doc_runs) -> int:
    verdicts = [c["verdict"] for r in doc_runs for pt in r["points"] for c in pt["checks"].values()]
    return 1 if any(v in ("fail", "error") for v in verdicts) else 0


def write_json(doc, path) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True, allow_nan=True)
            fh.write("\n")
    except OSError as exc:
        raise WriteError(f"cannot write {path}: {exc}") from exc


def verify_report(doc) -> list[str]:
    """Recompute every stored pass/fail verdict from its residuals and thresholds.

    Returns the list of mismatches (empty when the report is self-consistent).
    """
    bad = []
    if doc.get("schema_version") != SCHEMA_VERSION:
        return ["schema_version mismatch"]
    if "criteria" in doc:
        for c in doc["criteria"]:
            if c["verdict"] not in ("pass", "fail"):
                bad.append(f"criterion {c['number']}: unknown verdict")
        expected = 0 if all(c["verdict"] == "pass" for c in doc["criteria"]) else 1
        if doc.get("exit_code") != expected:
            bad.append("exit_code does not match the criteria")
        return bad
    for r in doc["runs"]:
        for i, pt in enumerate(r["points"]):
            for name, c in pt["checks"].items():
                if c["verdict"] not in ("pass", "fail"):
                    continue
                redo = _verdict(c["residuals"], c["thresholds"])["verdict"]
                if redo != c["verdict"]:
                    bad.append(f"{r['name']}[{i}].{name}: stored {c['verdict']}, recomputed {redo}")
    if doc.get("exit_code") != exit_code(doc["runs"]):
        bad.append("exit_code does not match the verdicts")
    return bad


def self_check(out_dir) -> int:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    results = acceptance.run_all()
    for r in results:
        print(r.line())
        print(f"  criterion {r.number} took {r.runtime:.2f} s", file=sys.stderr)
    ok = all(r.passed and r.within_budget for r in results)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "tool": "jcth",
        "version": __version__,
        "criteria": [{"number": r.number, "title": r.title, "verdict": "pass" if r.passed else "fail",
                      "details": r.details} for r in results],
        "exit_code": 0 if all(r.passed for r in results) else 1,
    }
    write_json(_jsonable(doc), out_dir / "self_check.json")
    return 0 if ok else 1


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.floating, np.integer, np.bool_)):
        return x.item()
    if isinstance(x, complex):
        return [x.real, x.imag]
    return x


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="jcth", description="Non-Hermitian JC-type Hamiltonian checks")
    ap.add_argument("--list-models", action="store_true", help="list model kinds and exit")
    ap.add_argument("--self-check", action="store_true", help="run the built-in acceptance suite")
    ap.add_argument("--out", default="jcth-out", help="output directory (default: jcth-out)")
    ap.add_argument("--tol-real", type=float, help="override the reality tolerance")
    ap.add_argument("--tol-pair", type=float, help="override the conjugate-pairing tolerance")
    ap.add_argument("--max-dim", type=int, help=f"dimension limit (default {config.DEFAULT_MAX_DIM})")
    sub = ap.add_subparsers(dest="command")
    r = sub.add_parser("run", help="execute a config")
    r.add_argument("config")
    r.add_argument("--out", dest="run_out", default=None)
    v = sub.add_parser("verify", help="recompute verdicts of a report")
    v.add_argument("report")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.max_dim is not None:
        if args.max_dim < 1:
            print("config error at --max-dim: must be positive", file=sys.stderr)
            return 2
        config.set_max_dim(args.max_dim)
    if args.list_models:
        for k in models.KINDS:
            print(f"{k:16s} {models.KIND_DESCRIPTIONS[k]}")
        return 0
    out = getattr(args, "run_out", None) or args.out
    if args.self_check:
        return self_check(out)
    if args.command == "verify":
        try:
            with open(args.report, encoding="utf-8") as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            print(f"config error at {args.report}: {exc}", file=sys.stderr)
            return 2
        bad = verify_report(doc)
        for b in bad:
            print(b)
        print("verdicts reproduced" if not bad else f"{len(bad)} mismatches")
        return 0 if not bad else 1
    if args.command != "run":
        build_parser().print_usage(sys.stderr)
        return 2
    cli_tol = {}
    if args.tol_real is not None:
        cli_tol["real"] = args.tol_real
    if args.tol_pair is not None:
        cli_tol["pair"] = args.tol_pair
    try:
        runs = load_config(args.config)
    except ConfigError as exc:
        print(f"config error at {exc.path}: {exc.message}", file=sys.stderr)
        return 2
    t0 = time.perf_counter()
    try:
        doc = execute(runs, out, cli_tol)
        write_json(_jsonable(doc), Path(out) / "report.json")
    except WriteError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    print(f"{doc['summary']} in {time.perf_counter() - t0:.2f} s; report at {Path(out) / 'report.json'}",
          file=sys.stderr)
    return doc["exit_code"]


if __name__ == "__main__":
    sys.exit(main())
