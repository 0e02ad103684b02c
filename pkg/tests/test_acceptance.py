"""Acceptance criteria 1-10 at their stated tolerances.

Each test prints one PASS/FAIL line; the lines are also collected into the
"acceptance criteria" section of the pytest terminal summary.
"""
import os
import shutil
import subprocess
import sys
import time

import pytest

from scatterbounds import verification as v

RESULTS: list[str] = []


def _record(res: v.CriterionResult):
    line = res.line()
    RESULTS.append(line)
    print(line)
    for f in res.failures:
        print("    " + f)
    assert res.passed, line + "\n" + "\n".join(res.failures)


def _timed(fn):
    t0 = time.perf_counter()
    res = fn()
    res.seconds = time.perf_counter() - t0
    return res


def test_criterion_01_flux_conservation():
    assert len(v.corpus()) >= 20
    _record(_timed(v.criterion_flux))


def test_criterion_02_method_equivalence():
    _record(_timed(v.criterion_equivalence))


def test_criterion_03_bound_sandwich():
    kinds = {cs.kind for case in v.corpus() for cs in case.comparisons}
    assert {"free", "square_barrier"} <= kinds
    _record(_timed(v.criterion_sandwich))


def test_criterion_04_equal_asymptotes():
    _record(_timed(v.criterion_case1))


def test_criterion_05_collapse():
    _record(_timed(v.criterion_collapse))


def test_criterion_06_theta_self_consistency():
    _record(_timed(v.criterion_theta))


def test_criterion_07_nett_phase_residual():
    _record(_timed(v.criterion_nett_phase))


def test_criterion_08_perturbation_order():
    _record(_timed(v.criterion_perturbation))


def test_criterion_09_identity():
    _record(_timed(v.criterion_identity))


def test_criterion_10_cli_verify():
    exe = shutil.which("scatterbounds")
    cmd = [exe] if exe else [sys.executable, "-m", "scatterbounds.cli"]
    t0 = time.perf_counter()
    proc = subprocess.run(cmd + ["verify"], capture_output=True, text=True, timeout=120,
                          env={**os.environ, "PYTHONHASHSEED": "0"})
    dt = time.perf_counter() - t0
    passed = proc.returncode == 0 and dt < 60.0
    res = v.CriterionResult(10, "CLI verify end-to-end", passed,
                            f"exit code {proc.returncode}, {dt:.1f}s (< 60s)", seconds=dt)
    if not passed:
        res.failures = (proc.stdout + proc.stderr).splitlines()[-20:]
    _record(res)
    assert proc.stdout.count("[PASS]") == 9


@pytest.fixture(scope="session", autouse=True)
def _summary(request):
    yield
    request.config._acceptance_lines = list(RESULTS)
