"""Built-in verification corpus and exit criteria.

Each ``criterion_*`` function runs one check over the corpus and returns a
:class:`CriterionResult`. :func:`run_all` runs them in order; the ``verify``
CLI subcommand and the acceptance tests are thin wrappers around it.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import domain as d
from .bounds import (
    bogoliubov_bounds,
    case1_bound,
    theta_bound,
    transmission_bounds_algebraic,
)
from .domain import PotentialSpec
from .errors import ScatterError
from .perturbation import exact_shift, exact_transmission, perturbation_estimates
from .phases import nett_phase_residual, phase_trajectory, theta_mismatch
from .refsolutions import (
    ComparisonSolution,
    comparison_for,
    delta_comparison,
    free_comparison,
    square_barrier_comparison,
    step_comparison,
)
from .solver import SolverSettings, compose_bogoliubov, solve_ab_system, solve_direct

FLUX_TOL = 1e-7
FLUX_RUNTIME = 10.0
EQUIV_RTOL = 1e-6
SANDWICH_TOL = 1e-6
CASE1_TOL = 1e-12
COLLAPSE_THETA_TOL = 1e-12
COLLAPSE_T_TOL = 1e-10
THETA_TOL = 1e-5
DELTA_RESIDUAL_TOL = 1e-3
B_RATIO = (6.0, 10.0)
T_RATIO = (3.5, 4.5)
EPSILON_LADDER = (0.02, 0.01, 0.005)
IDENTITY_TOL = 1e-12
IDENTITY_GRID = 50


@dataclass(frozen=True)
class Case:
    """One corpus entry: a potential, an energy, and the comparisons to use."""

    name: str
    spec: PotentialSpec
    E: float
    comparisons: tuple[PotentialSpec, ...]
    under_barrier: bool = False

    def primary(self) -> ComparisonSolution:
        return comparison_for(self.comparisons[0], self.E)


def _tanh_step(v_plus: float) -> PotentialSpec:
    x = np.linspace(-8.0, 8.0, 161)
    v = 0.5 * v_plus * (1.0 + np.tanh(x))
    v[0], v[-1] = 0.0, v_plus
    return d.tabulated(x, v)


def corpus() -> list[Case]:
    """Potential/energy pairs covering barriers, wells, gaussians, steps and tunnelling."""
    free = d.free()
    cases = []
    sq = d.square_barrier(1.0, 1.0)
    for E in (1.1, 2.0, 3.5, 5.0):
        cases.append(Case(f"square V0=1 L=1 E={E}", sq, E,
                          (free, d.square_barrier(0.5, 1.0), d.square_barrier(0.9, 1.0))))
    well = d.square_barrier(-1.0, 2.0)
    for E in (1.1, 3.0):
        cases.append(Case(f"square well V0=-1 L=2 E={E}", well, E,
                          (free, d.square_barrier(-0.5, 2.0))))
    g = d.gaussian(1.0, 1.0)
    for E in (1.1, 2.0, 5.0):
        cases.append(Case(f"gaussian V0=1 s=1 E={E}", g, E,
                          (free, d.square_barrier(0.6, 2.0))))
    gw = d.gaussian(-0.5, 0.7)
    cases.append(Case("gaussian well V0=-0.5 s=0.7 E=0.6", gw, 0.6,
                      (free, d.square_barrier(-0.3, 1.4))))
    bump = d.shifted(sq, d.gaussian(1.0, 0.3, 0.2), 0.3)
    for E in (2.0, 4.0):
        cases.append(Case(f"square+bump E={E}", bump, E, (free, sq)))
    dl = d.delta(1.0)
    for E in (1.1, 3.0):
        cases.append(Case(f"delta l=1 E={E}", dl, E, (free, d.square_barrier(2.0, 0.5))))
    cases += [
        Case("square V0=2 L=1 E=1 (tunnelling)", d.square_barrier(2.0, 1.0), 1.0,
             (free, d.square_barrier(1.5, 1.0)), under_barrier=True),
        Case("square V0=3 L=0.5 E=1.5 (tunnelling)", d.square_barrier(3.0, 0.5), 1.5,
             (free, d.square_barrier(2.5, 0.5)), under_barrier=True),
        Case("gaussian V0=2 s=0.5 E=1 (tunnelling)", d.gaussian(2.0, 0.5), 1.0,
             (free, d.square_barrier(1.5, 1.0)), under_barrier=True),
        Case("square V0=2 + bump E=1.2 (tunnelling)",
             d.shifted(d.square_barrier(2.0, 1.0), d.gaussian(0.5, 0.3), 1.0), 1.2,
             (free, d.square_barrier(2.0, 1.0)), under_barrier=True),
    ]
    ts = _tanh_step(0.75)
    for E in (1.1, 2.0):
        cases.append(Case(f"tanh step V+=0.75 E={E}", ts, E, (d.step(0.75),)))
    sb = d.shifted(d.step(0.5), d.gaussian(0.3, 0.5), 1.0)
    for E in (0.6, 2.0):
        cases.append(Case(f"step+bump V+=0.5 E={E}", sb, E, (d.step(0.5),)))
    return cases


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0
    failures: list[str] = field(default_factory=list)

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] {self.number:2d} {self.name}: {self.detail} ({self.seconds:.2f}s)"


def criterion_flux(settings: SolverSettings | None = None) -> CriterionResult:
    settings = settings or SolverSettings()
    t0 = time.perf_counter()
    worst, fails = 0.0, []
    cases = corpus()
    for c in cases:
        _, traj = solve_ab_system(c.spec, c.primary(), c.E, settings)
        dev = traj.flux_deviation()
        worst = max(worst, dev)
        if not dev < FLUX_TOL:
            fails.append(f"{c.name}: {dev:.3g}")
    dt = time.perf_counter() - t0
    ok = not fails and dt < FLUX_RUNTIME
    return CriterionResult(1, "flux conservation", ok,
                           f"{len(cases)} cases, max ||a|^2-|b|^2-1| = {worst:.2e} "
                           f"(< {FLUX_TOL:g}), runtime {dt:.2f}s (< {FLUX_RUNTIME:g}s)",
                           failures=fails)


def criterion_equivalence(settings: SolverSettings | None = None) -> CriterionResult:
    settings = settings or SolverSettings()
    worst, fails, under = 0.0, [], 0
    for c in corpus():
        comp = c.primary()
        direct = solve_direct(c.spec, c.E, settings)
        final, _ = solve_ab_system(c.spec, comp, c.E, settings)
        composed = compose_bogoliubov(comp, final)
        rel = abs(direct.T - composed.T) / direct.T
        worst = max(worst, rel)
        under += c.under_barrier
        if not rel < EQUIV_RTOL:
            fails.append(f"{c.name}: {rel:.3g}")
    ok = not fails and under >= 3
    return CriterionResult(2, "method equivalence", ok,
                           f"max relative |T_direct - T_ab| = {worst:.2e} (< {EQUIV_RTOL:g}), "
                           f"{under} under-barrier cases", failures=fails)


def criterion_sandwich(settings: SolverSettings | None = None,
                       quad_tol: float = 1e-12) -> CriterionResult:
    settings = settings or SolverSettings()
    checks, valid_upper, fails = 0, 0, []
    for c in corpus():
        direct = solve_direct(c.spec, c.E, settings)
        for cs in c.comparisons:
            comp = comparison_for(cs, c.E)
            tb = theta_bound(c.spec, comp, c.E, quad_tol, settings)
            rep = bogoliubov_bounds(tb, comp)
            checks += 1
            label = f"{c.name} vs {cs.kind}"
            if not direct.T >= rep.T_lower - SANDWICH_TOL:
                fails.append(f"{label}: T={direct.T:.8g} < T_lower={rep.T_lower:.8g}")
            if rep.upper_valid:
                valid_upper += 1
                if not direct.T <= rep.T_upper + SANDWICH_TOL:
                    fails.append(f"{label}: T={direct.T:.8g} > T_upper={rep.T_upper:.8g}")
            final, _ = solve_ab_system(c.spec, comp, c.E, settings)
            if abs(final.a) > math.cosh(tb) + SANDWICH_TOL:
                fails.append(f"{label}: |a(inf)| above cosh(theta_bound)")
            if abs(final.b) > math.sinh(tb) + SANDWICH_TOL:
                fails.append(f"{label}: |b(inf)| above sinh(theta_bound)")
    return CriterionResult(3, "bound sandwich", not fails,
                           f"{checks} potential/comparison pairs, {valid_upper} with a valid "
                           f"upper bound, {len(fails)} violations", failures=fails)


def criterion_case1(settings: SolverSettings | None = None,
                    quad_tol: float = 1e-12) -> CriterionResult:
    settings = settings or SolverSettings()
    worst, fails = 0.0, []
    for c in corpus():
        if c.spec.v_minus_inf != c.spec.v_plus_inf:
            continue
        general = bogoliubov_bounds(
            theta_bound(c.spec, free_comparison(c.E), c.E, quad_tol, settings),
            free_comparison(c.E)).alpha_upper
        special = case1_bound(c.spec, c.E, quad_tol, settings)
        diff = abs(general - special)
        worst = max(worst, diff)
        if not diff <= CASE1_TOL:
            fails.append(f"{c.name}: {diff:.3g}")
    sq = d.square_barrier(1.0, 1.0)
    expected_theta = 1.0 / (2.0 * math.sqrt(2.0))
    cb = case1_bound(sq, 2.0, quad_tol, settings)
    if abs(cb - math.cosh(expected_theta)) > CASE1_TOL:
        fails.append(f"square barrier equal-asymptote bound {cb!r} != cosh(1/(2 sqrt 2))")
    t_lower = bogoliubov_bounds(expected_theta, free_comparison(2.0)).T_lower
    t_closed = 1.0 / (1.0 + math.sin(1.0) ** 2 / 8.0)
    t_exact = solve_direct(sq, 2.0, settings).T
    if abs(t_exact - t_closed) > 1e-6:
        fails.append(f"square barrier T={t_exact!r} differs from closed form {t_closed!r}")
    if not t_lower <= t_exact:
        fails.append("square barrier T below its equal-asymptote lower bound")
    return CriterionResult(4, "equal-asymptote bound", not fails,
                           f"max |general - closed form| = {worst:.2e} (<= {CASE1_TOL:g}); square "
                           f"barrier E=2: bound {cb:.6f}, T_lower {t_lower:.6f}, "
                           f"T {t_exact:.6f}", failures=fails)


def criterion_collapse(settings: SolverSettings | None = None,
                       quad_tol: float = 1e-12) -> CriterionResult:
    settings = settings or SolverSettings()
    fails = []
    comps = [free_comparison(2.0), square_barrier_comparison(1.0, 1.0, 2.0),
             delta_comparison(1.0, 1.0), step_comparison(0.75, 1.0)]
    worst = 0.0
    for comp in comps:
        tb = theta_bound(comp.spec, comp, comp.energy, quad_tol, settings)
        rep = bogoliubov_bounds(tb, comp)
        err = max(abs(rep.T_lower - comp.T0), abs(rep.T_upper - comp.T0))
        worst = max(worst, err)
        if not (tb < COLLAPSE_THETA_TOL and err <= COLLAPSE_T_TOL and rep.upper_valid):
            fails.append(f"{comp.spec.kind}: theta_bound={tb:.3g}, T error {err:.3g}")
    return CriterionResult(5, "collapse to comparison", not fails,
                           f"4 comparison kinds, max |T_bound - T0| = {worst:.2e}",
                           failures=fails)


def phase_cases() -> list[Case]:
    sq = d.square_barrier(1.0, 1.0)
    return [
        Case("square vs free E=2", sq, 2.0, (d.free(),)),
        Case("gaussian vs free E=2", d.gaussian(1.0, 1.0), 2.0, (d.free(),)),
        Case("tunnelling square vs free E=1", d.square_barrier(2.0, 1.0), 1.0, (d.free(),)),
        Case("square+bump vs square E=2", d.shifted(sq, d.gaussian(1.0, 0.3, 0.2), 0.3), 2.0,
             (sq,)),
        Case("step+bump vs step E=2", d.shifted(d.step(0.5), d.gaussian(0.3, 0.5), 1.0), 2.0,
             (d.step(0.5),)),
    ]


def criterion_theta(settings: SolverSettings | None = None) -> CriterionResult:
    settings = settings or SolverSettings()
    worst, fails = 0.0, []
    for c in phase_cases():
        comp = c.primary()
        _, traj = solve_ab_system(c.spec, comp, c.E, settings)
        m = theta_mismatch(phase_trajectory(traj, comp), comp, c.spec)
        worst = max(worst, m)
        if not m < THETA_TOL:
            fails.append(f"{c.name}: {m:.3g}")
    return CriterionResult(6, "Theta self-consistency", not fails,
                           f"5 cases, max |arccosh|a| - running integral| = {worst:.2e} "
                           f"(< {THETA_TOL:g})", failures=fails)


def criterion_nett_phase(settings: SolverSettings | None = None) -> CriterionResult:
    settings = settings or SolverSettings()
    worst, fails = 0.0, []
    for c in phase_cases():
        comp = c.primary()
        _, traj = solve_ab_system(c.spec, comp, c.E, settings)
        try:
            r = nett_phase_residual(phase_trajectory(traj, comp), comp, c.spec)
        except ScatterError as exc:
            fails.append(f"{c.name}: {exc}")
            continue
        worst = max(worst, r)
        if not r < DELTA_RESIDUAL_TOL:
            fails.append(f"{c.name}: {r:.3g}")
    return CriterionResult(7, "nett-phase residual", not fails,
                           f"5 cases, max residual = {worst:.2e} (< {DELTA_RESIDUAL_TOL:g})",
                           failures=fails)


def criterion_perturbation(settings: SolverSettings | None = None,
                           quad_tol: float = 1e-10) -> CriterionResult:
    settings = settings or SolverSettings()
    fails = []
    # b~ scaling: free comparison with a narrow square bump
    comp_b = free_comparison(1.0)
    dv_b = d.square_barrier(1.0, 0.1, 0.05)
    b_err = []
    for eps in EPSILON_LADDER:
        est = perturbation_estimates(comp_b, dv_b, eps, quad_tol, settings)
        ex = exact_shift(comp_b, dv_b, eps, settings)
        b_err.append(abs(abs(est.b_tilde_est) - abs(ex.b_inf)))
        if not est.b_abs_bound >= abs(ex.b_inf):
            fails.append(f"b bound {est.b_abs_bound:.6g} < |b| {abs(ex.b_inf):.6g} at eps={eps}")
    # delta T scaling: square barrier comparison with a gaussian bump
    comp_t = square_barrier_comparison(1.0, 1.0, 2.0)
    dv_t = d.gaussian(1.0, 0.3)
    t_err = []
    for eps in EPSILON_LADDER:
        est = perturbation_estimates(comp_t, dv_t, eps, quad_tol, settings)
        dT = exact_transmission(comp_t, dv_t, eps, settings) - comp_t.T0
        ex = exact_shift(comp_t, dv_t, eps, settings)
        t_err.append(abs(est.delta_T_est - dT))
        if not est.delta_T_bound >= abs(dT):
            fails.append(f"dT bound {est.delta_T_bound:.6g} < |dT| {abs(dT):.6g} at eps={eps}")
        if not est.b_abs_bound >= abs(ex.b_inf):
            fails.append(f"b bound < |b| for square comparison at eps={eps}")
    b_ratios = [b_err[i] / b_err[i + 1] for i in range(len(b_err) - 1)]
    t_ratios = [t_err[i] / t_err[i + 1] for i in range(len(t_err) - 1)]
    for r in b_ratios:
        if not B_RATIO[0] <= r <= B_RATIO[1]:
            fails.append(f"b error ratio {r:.4g} outside {B_RATIO}")
    for r in t_ratios:
        if not T_RATIO[0] <= r <= T_RATIO[1]:
            fails.append(f"dT error ratio {r:.4g} outside {T_RATIO}")
    fmt = lambda rs: ", ".join(f"{r:.3f}" for r in rs)  # noqa: E731
    return CriterionResult(8, "perturbation order", not fails,
                           f"|b~| error ratios [{fmt(b_ratios)}], dT error ratios "
                           f"[{fmt(t_ratios)}], bounds dominate", failures=fails)


def criterion_identity() -> CriterionResult:
    worst, fails = 0.0, []
    thetas = np.linspace(0.0, 3.0, IDENTITY_GRID)
    t0s = np.linspace(1.0 / IDENTITY_GRID, 1.0, IDENTITY_GRID)
    for tb in thetas:
        for T0 in t0s:
            rep = bogoliubov_bounds(float(tb), _T0Only(float(T0)))
            lo, hi, _ = transmission_bounds_algebraic(float(tb), float(T0))
            err = max(abs(lo - rep.T_lower), abs(hi - rep.T_upper))
            worst = max(worst, err)
            if not err <= IDENTITY_TOL:
                fails.append(f"theta_b={tb:.4g}, T0={T0:.4g}: {err:.3g}")
    return CriterionResult(9, "sech^2 / algebraic identity", not fails,
                           f"{IDENTITY_GRID}x{IDENTITY_GRID} grid, max difference {worst:.2e} "
                           f"(<= {IDENTITY_TOL:g})", failures=fails)


@dataclass(frozen=True)
class _T0Only:
    T0: float


CRITERIA: tuple[Callable[[], CriterionResult], ...] = (
    criterion_flux, criterion_equivalence, criterion_sandwich, criterion_case1,
    criterion_collapse, criterion_theta, criterion_nett_phase, criterion_perturbation,
    criterion_identity,
)


def run_all(report: Callable[[CriterionResult], None] | None = None) -> list[CriterionResult]:
    results = []
    for fn in CRITERIA:
        t0 = time.perf_counter()
        try:
            res = fn()
        except ScatterError as exc:
            num = CRITERIA.index(fn) + 1
            res = CriterionResult(num, fn.__name__.removeprefix("criterion_"), False,
                                  f"numerical failure: {exc}")
        res.seconds = time.perf_counter() - t0
        if report is not None:
            report(res)
        results.append(res)
    return results
