"""Energy sweeps and report serialisation.

Rows are computed independently per energy (optionally in worker processes)
and always emitted in ascending energy order. Solver failures are recorded in
the row's ``status`` column instead of aborting the sweep.
"""
from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bounds import bogoliubov_bounds, theta_bound
from .config import ScenarioConfig
from .errors import ConfigError, ScatterError
from .perturbation import exact_shift, perturbation_estimates
from .refsolutions import comparison_for
from .solver import compose_bogoliubov, solve_ab_system, solve_direct

SANDWICH_TOL = 1e-6
NAN = float("nan")


@dataclass(frozen=True)
class SweepRow:
    E: float
    T_exact: float
    T0: float
    theta_bound: float
    T_lower: float
    T_upper: float
    upper_valid: bool
    alpha_abs: float
    beta_abs: float
    alpha_upper: float
    alpha_lower: float
    sandwich_ok: bool
    status: str = "ok"


@dataclass(frozen=True)
class BoundsRow:
    E: float
    T0: float
    theta_bound: float
    theta0: float
    T_lower: float
    T_upper: float
    upper_valid: bool
    alpha_upper: float
    alpha_lower: float
    beta_upper: float
    beta_lower: float
    status: str = "ok"


@dataclass(frozen=True)
class PerturbRow:
    E: float
    epsilon: float
    b_tilde_abs: float
    b_exact_abs: float
    b_error: float
    b_abs_bound: float
    delta_T_est: float
    delta_T_exact: float
    delta_T_error: float
    delta_T_bound: float
    delta_N_est: float
    delta_N_exact: float
    delta_N_bound: float
    b_error_ratio: float
    delta_T_error_ratio: float
    status: str = "ok"


def sandwich_ok(T_exact: float, T_lower: float, T_upper: float, upper_valid: bool,
                tol: float = SANDWICH_TOL) -> bool:
    upper = T_upper if upper_valid else 1.0
    return bool(T_lower - tol <= T_exact <= upper + tol)


def sweep_row(cfg: ScenarioConfig, E: float) -> SweepRow:
    try:
        comp = comparison_for(cfg.comparison, E)
        exact = solve_direct(cfg.potential, E, cfg.solver)
        tb = theta_bound(cfg.potential, comp, E, cfg.quad_tol, cfg.solver)
        rep = bogoliubov_bounds(tb, comp)
    except ScatterError as exc:
        return SweepRow(E, NAN, NAN, NAN, NAN, NAN, False, NAN, NAN, NAN, NAN, False,
                        status=f"error: {exc}")
    return SweepRow(
        E=E, T_exact=exact.T, T0=comp.T0, theta_bound=tb, T_lower=rep.T_lower,
        T_upper=rep.T_upper, upper_valid=rep.upper_valid, alpha_abs=abs(exact.alpha),
        beta_abs=abs(exact.beta), alpha_upper=rep.alpha_upper, alpha_lower=rep.alpha_lower,
        sandwich_ok=sandwich_ok(exact.T, rep.T_lower, rep.T_upper, rep.upper_valid),
    )


def bounds_row(cfg: ScenarioConfig, E: float) -> BoundsRow:
    try:
        comp = comparison_for(cfg.comparison, E)
        tb = theta_bound(cfg.potential, comp, E, cfg.quad_tol, cfg.solver)
        rep = bogoliubov_bounds(tb, comp)
    except ScatterError as exc:
        return BoundsRow(E, NAN, NAN, NAN, NAN, NAN, False, NAN, NAN, NAN, NAN,
                         status=f"error: {exc}")
    return BoundsRow(E=E, T0=comp.T0, theta_bound=tb, theta0=rep.theta0, T_lower=rep.T_lower,
                     T_upper=rep.T_upper, upper_valid=rep.upper_valid,
                     alpha_upper=rep.alpha_upper, alpha_lower=rep.alpha_lower,
                     beta_upper=rep.beta_upper, beta_lower=rep.beta_lower)


def _map(fn, cfg: ScenarioConfig, jobs: int):
    energies = cfg.energy_values()
    if jobs <= 1 or len(energies) <= 1:
        return [fn(cfg, E) for E in energies]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        # map preserves input order, so rows stay sorted by energy
        return list(pool.map(fn, [cfg] * len(energies), energies))


def run_sweep(cfg: ScenarioConfig, jobs: int = 1) -> list[SweepRow]:
    """Exact T, comparison T0 and all bounds at every configured energy."""
    return _map(sweep_row, cfg, jobs)


def run_bounds(cfg: ScenarioConfig, jobs: int = 1) -> list[BoundsRow]:
    """Bounds only; the full problem is never solved."""
    return _map(bounds_row, cfg, jobs)


def solve_report(cfg: ScenarioConfig, E: float) -> dict:
    """Full detail at one energy: both solution routes, comparison data and bounds."""
    comp = comparison_for(cfg.comparison, E)
    direct = solve_direct(cfg.potential, E, cfg.solver)
    final, traj = solve_ab_system(cfg.potential, comp, E, cfg.solver)
    composed = compose_bogoliubov(comp, final)
    tb = theta_bound(cfg.potential, comp, E, cfg.quad_tol, cfg.solver)
    rep = bogoliubov_bounds(tb, comp)

    def cx(z):
        return [z.real, z.imag]

    return {
        "E": E,
        "direct": {"alpha": cx(direct.alpha), "beta": cx(direct.beta), "T": direct.T,
                   "R": direct.R},
        "ab_system": {"a_inf": cx(final.a), "b_inf": cx(final.b),
                      "alpha": cx(composed.alpha), "beta": cx(composed.beta),
                      "T": composed.T, "flux_deviation": traj.flux_deviation(),
                      "steps": traj.steps},
        "comparison": {"kind": comp.spec.kind, "alpha0": cx(comp.alpha0),
                       "beta0": cx(comp.beta0), "T0": comp.T0},
        "bounds": dataclasses.asdict(rep),
        "sandwich_ok": sandwich_ok(direct.T, rep.T_lower, rep.T_upper, rep.upper_valid),
    }


def _ratio(prev: float, cur: float) -> float:
    if prev is None or cur == 0.0 or math.isnan(cur) or math.isnan(prev):
        return NAN
    return prev / cur


def run_perturb(cfg: ScenarioConfig) -> list[PerturbRow]:
    """First-order estimates against exact solves over the epsilon ladder."""
    if cfg.epsilons is None:
        raise ConfigError("epsilons: perturb mode needs an epsilon ladder")
    if cfg.potential.kind != "shifted":
        raise ConfigError("potential.kind: perturb mode needs a shifted potential")
    base, dv = cfg.potential.base, cfg.potential.delta_v
    if base.kind not in ("free", "step", "square_barrier", "delta"):
        raise ConfigError(f"potential.base.kind: {base.kind!r} has no closed-form comparison")
    rows = []
    for E in cfg.energy_values():
        prev_b = prev_t = None
        for eps in cfg.epsilons:
            try:
                comp = comparison_for(base, E)
                est = perturbation_estimates(comp, dv, eps, cfg.quad_tol, cfg.solver)
                ex = exact_shift(comp, dv, eps, cfg.solver)
            except ScatterError as exc:
                rows.append(PerturbRow(E, eps, *([NAN] * 13), status=f"error: {exc}"))
                prev_b = prev_t = None
                continue
            b_err = abs(abs(est.b_tilde_est) - abs(ex.b_inf))
            t_err = abs(est.delta_T_est - ex.delta_T)
            rows.append(PerturbRow(
                E=E, epsilon=eps, b_tilde_abs=abs(est.b_tilde_est), b_exact_abs=abs(ex.b_inf),
                b_error=b_err, b_abs_bound=est.b_abs_bound, delta_T_est=est.delta_T_est,
                delta_T_exact=ex.delta_T, delta_T_error=t_err, delta_T_bound=est.delta_T_bound,
                delta_N_est=est.delta_N_est, delta_N_exact=ex.delta_N,
                delta_N_bound=est.delta_N_bound, b_error_ratio=_ratio(prev_b, b_err),
                delta_T_error_ratio=_ratio(prev_t, t_err)))
            prev_b, prev_t = b_err, t_err
    return rows


def _plain(v):
    # numpy scalars leak out of vectorised helpers; serialise them as Python values
    if isinstance(v, np.generic):
        return v.item()
    return v


def _cell(v) -> str:
    v = _plain(v)
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def to_csv(rows) -> str:
    buf = io.StringIO()
    if not rows:
        return ""
    names = [f.name for f in dataclasses.fields(rows[0])]
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(names)
    for r in rows:
        w.writerow([_cell(getattr(r, n)) for n in names])
    return buf.getvalue()


def _jsonable(v):
    v = _plain(v)
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def to_json(payload) -> str:
    if isinstance(payload, list):
        payload = [dataclasses.asdict(r) if dataclasses.is_dataclass(r) else r for r in payload]
    return json.dumps(_jsonable(payload), indent=2) + "\n"
