"""Acceptance suite: one pass/fail line per criterion."""

import math

import numpy as np
import pytest

from jcth import acceptance, cli, models, spectra
from jcth.models import ModelSpec
from jcth.susy import CouplingParams

from oracles import match_distance

pytestmark = pytest.mark.acceptance

CLOSED_TOL = 1e-10


def check(result):
    print(result.line())
    assert result.passed, result.details
    assert result.within_budget, f"runtime {result.runtime:.2f} s over budget"


@pytest.mark.parametrize("fn", acceptance.CRITERIA, ids=lambda f: f.__name__)
def test_criterion(fn):
    check(fn())


def test_closed_form_matches_independent_formula():
    # levels n + 1 +- sqrt(beta (n + 1)) typed in directly, not from the package
    spec = ModelSpec("jc_resonant", CouplingParams(4, 1, 0.7), cutoff=64)
    rep = spectra.analyze(spec).report
    expected = [0.0] + [n + 1 + s * 2 * math.sqrt(n + 1) for n in range(62) for s in (1, -1)]
    assert rep.interior_values.size == len(expected)
    assert match_distance(rep.interior_values, np.array(expected)) <= CLOSED_TOL


def test_self_check_is_byte_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    assert cli.main(["--self-check", "--out", str(a)]) == 0
    assert cli.main(["--self-check", "--out", str(b)]) == 0
    same = (a / "self_check.json").read_bytes() == (b / "self_check.json").read_bytes()
    print(f"[{'PASS' if same else 'FAIL'}] criterion 11: self-check report is byte-identical across runs")
    assert same
    assert cli.main(["verify", str(a / "self_check.json")]) == 0
