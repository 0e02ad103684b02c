"""Upper and lower bounds on |alpha|, |beta| and T relative to a comparison problem.

Everything is driven by two numbers: Theta_0 = arccosh|alpha0| of the
comparison problem and

    theta_bound = 1/2 int |k^2 - k0^2| |psi0|^2 dx,

which caps the growth Theta = arccosh|a(inf)| of the (a, b) system.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .domain import PotentialSpec, regular_potential
from .errors import NoOpenChannelError
from .quadrature import integrate_segments
from .refsolutions import ComparisonSolution, step_comparison
from .solver import SolverSettings, _check_pair, shift_point_masses, shift_window


@dataclass(frozen=True)
class BoundReport:
    theta_bound: float
    theta0: float
    T0: float
    alpha_upper: float
    beta_upper: float
    alpha_lower: float
    beta_lower: float
    T_lower: float
    T_upper: float
    upper_valid: bool
    lower_nontrivial: bool

    def brackets(self, T: float, tol: float = 1e-6) -> bool:
        """Whether ``T`` lies inside [T_lower, T_upper] up to ``tol``."""
        upper = self.T_upper if self.upper_valid else 1.0
        return self.T_lower - tol <= T <= upper + tol


def theta0_from_T0(T0: float) -> float:
    """arccosh(1/sqrt(T0)), evaluated as arcsinh(sqrt((1 - T0)/T0)) to stay accurate near T0 = 1."""
    if not 0.0 < T0 <= 1.0:
        raise ValueError(f"T0 must lie in (0, 1], got {T0}")
    return math.asinh(math.sqrt((1.0 - T0) / T0))


def _sech2(x: float) -> float:
    return 1.0 / math.cosh(x) ** 2


def theta_bound(spec: PotentialSpec, comparison: ComparisonSolution, E: float,
                quad_tol: float = 1e-12, settings: SolverSettings | None = None) -> float:
    """1/2 int |k^2 - k0^2| |psi0|^2 dx over the truncated domain.

    Point masses of the shift contribute 1/2 |w| |psi0(x_w)|^2 exactly.
    """
    settings = settings or SolverSettings()
    _check_pair(spec, comparison, E)
    edges, active = shift_window(spec, comparison, E, settings)
    cspec = comparison.spec

    def integrand(x, s):
        d = regular_potential(cspec, x) - regular_potential(spec, x)
        return abs(d) * abs(comparison.psi0_scalar(x)) ** 2

    total = integrate_segments(integrand, edges, quad_tol, skip=[not a for a in active])
    for x, w in shift_point_masses(spec, comparison):
        total += abs(w) * abs(comparison.psi0_scalar(x)) ** 2
    return 0.5 * total


def bounds_from_T0(theta_b: float, T0: float) -> BoundReport:
    if theta_b < 0:
        raise ValueError("theta_bound must be non-negative")
    th0 = theta0_from_T0(T0)
    up = th0 + theta_b
    gap = th0 - theta_b
    lower_nontrivial = theta_b < th0
    # sech^2 is even; past gap = 0 the upper formula stops bounding anything
    upper_valid = theta_b <= th0
    return BoundReport(
        theta_bound=theta_b, theta0=th0, T0=T0,
        alpha_upper=math.cosh(up),
        beta_upper=math.sinh(up),
        alpha_lower=math.cosh(gap) if lower_nontrivial else 1.0,
        beta_lower=math.sinh(gap) if lower_nontrivial else 0.0,
        T_lower=_sech2(up),
        T_upper=_sech2(gap) if upper_valid else 1.0,
        upper_valid=upper_valid,
        lower_nontrivial=lower_nontrivial,
    )


def bogoliubov_bounds(theta_b: float, comparison: ComparisonSolution) -> BoundReport:
    """All bounds for a given theta_bound and comparison solution.

    |alpha| <= cosh(Theta_0 + theta_b), |beta| <= sinh(Theta_0 + theta_b),
    T >= sech^2(Theta_0 + theta_b); and while theta_b <= Theta_0 also
    |alpha| >= cosh(Theta_0 - theta_b), T <= sech^2(Theta_0 - theta_b).
    Otherwise the lower bounds fall back to |alpha| >= 1, |beta| >= 0 and
    T_upper is reported as 1 with ``upper_valid`` False.
    """
    return bounds_from_T0(theta_b, comparison.T0)


def transmission_bounds_algebraic(theta_b: float, T0: float) -> tuple[float, float, bool]:
    """Transmission bounds written directly in terms of T0.

    T >= T0 / [cosh(theta_b) + sqrt(1 - T0) sinh(theta_b)]^2 and
    T <= T0 / [cosh(theta_b) - sqrt(1 - T0) sinh(theta_b)]^2, the latter only
    while sqrt(1 - T0) cosh(theta_b) >= sinh(theta_b), i.e. theta_b <= Theta_0.
    """
    if not 0.0 < T0 <= 1.0:
        raise ValueError(f"T0 must lie in (0, 1], got {T0}")
    if theta_b < 0:
        raise ValueError("theta_bound must be non-negative")
    c, s = math.cosh(theta_b), math.sinh(theta_b)
    r = math.sqrt(1.0 - T0)
    lower = T0 / (c + r * s) ** 2
    valid = r * c >= s
    upper = T0 / (c - r * s) ** 2 if valid else 1.0
    return lower, upper, valid


def _flat_comparison(level: float, E: float) -> ComparisonSolution:
    return step_comparison(level, E, level)


def case1_bound(spec: PotentialSpec, E: float, quad_tol: float = 1e-12,
                settings: SolverSettings | None = None) -> float:
    """cosh{(1/2 k0) int |k^2 - k0^2| dx} for equal asymptotes and a flat comparison."""
    if spec.v_minus_inf != spec.v_plus_inf:
        raise ValueError("closed-form bound needs equal asymptotic values")
    level = spec.v_minus_inf
    if not E > level:
        raise NoOpenChannelError(f"E={E} must exceed asymptote {level}")
    settings = settings or SolverSettings()
    k0 = math.sqrt(E - level)
    comp = _flat_comparison(level, E)
    edges, active = shift_window(spec, comp, E, settings)

    def integrand(x, s):
        return abs(regular_potential(spec, x) - level)

    total = integrate_segments(integrand, edges, quad_tol, skip=[not a for a in active])
    total += sum(abs(w) for _, w in shift_point_masses(spec, comp))
    return math.cosh(total / (2.0 * k0))
