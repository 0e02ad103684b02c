"""First-order response to a small shift V = V0 + epsilon * dV.

In k^2 units the shift is k^2 = k0^2 + epsilon * dv with dv = -dV. The
distorted-Born estimate of the phase-rotated coefficient is

    b~(inf) = -(i eps/2) int dv psi0^2 exp(+i eps int^x dv |psi0|^2) dx + O(eps^3),

and |b~(inf)| = |b(inf)|. The changes in transmission and particle number
follow from the composition law at first order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .domain import PotentialSpec, point_masses, regular_potential, shifted
from .errors import QuadratureError
from .quadrature import integrate_segments
from .refsolutions import ComparisonSolution
from .solver import (
    SolverSettings,
    compose_bogoliubov,
    solve_ab_system,
    solve_direct,
    truncation_window,
)

MAX_LEVELS = 16


@dataclass(frozen=True)
class PerturbationResult:
    epsilon: float
    b_tilde_est: complex
    b_infinity_est: complex
    b_abs_bound: float
    delta_T_est: float
    delta_T_bound: float
    delta_N_est: float
    delta_N_bound: float


def _grid(edges, active, per_unit):
    xs, segs = [], []
    for s, (lo, hi) in enumerate(zip(edges[:-1], edges[1:])):
        n = max(9, int(math.ceil(per_unit * (hi - lo))) + 1) if active[s] else 2
        xs.append(np.linspace(lo, hi, n))
        segs.append(np.full(n, s))
    return xs, segs


def _shift_layout(comparison: ComparisonSolution, delta_v: PotentialSpec,
                  settings: SolverSettings):
    win = truncation_window([delta_v, comparison.spec], comparison.energy, settings)
    edges = win.edges
    active = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        probe = np.linspace(lo, hi, 19)[1:-1]
        active.append(bool(np.any(regular_potential(delta_v, probe) != 0.0)))
    return edges, active


def _born_pass(comparison, dv_on, masses, epsilon, xs):
    """One nested-trapezoid evaluation: returns (outer integral, total phase)."""
    carry = 0.0
    outer = 0j
    mass_at = dict(masses)
    for j, x in enumerate(xs):
        p = comparison.psi0(x)
        g = dv_on[j] * np.abs(p) ** 2
        inner = carry + epsilon * np.concatenate(
            [[0.0], np.cumsum(0.5 * (g[1:] + g[:-1]) * np.diff(x))])
        h = dv_on[j] * p * p * np.exp(1j * inner)
        outer += np.sum(0.5 * (h[1:] + h[:-1]) * np.diff(x))
        carry = inner[-1]
        w = mass_at.get(x[-1]) if j < len(xs) - 1 else None
        if w:
            # k^2 carries -w delta(x); the running phase jumps across the mass
            p = comparison.psi0_scalar(x[-1])
            jump = -epsilon * w * abs(p) ** 2
            outer += -w * p * p * np.exp(1j * (carry + 0.5 * jump))
            carry += jump
    return outer, carry


def _distorted_born(comparison: ComparisonSolution, delta_v: PotentialSpec, epsilon: float,
                    quad_tol: float, settings: SolverSettings | None = None):
    """Return ``(b_tilde, Phi)`` with ``Phi = eps * int dv |psi0|^2`` over the domain."""
    if epsilon == 0.0:
        return 0j, 0.0
    settings = settings or SolverSettings()
    edges, active = _shift_layout(comparison, delta_v, settings)
    masses = point_masses(delta_v)
    length = sum(hi - lo for (lo, hi), on in zip(zip(edges[:-1], edges[1:]), active) if on)
    per_unit = 64.0 / max(length, 1e-3) if length > 0 else 1.0
    prev = None
    prev_rich = None
    for level in range(MAX_LEVELS):
        xs, segs = _grid(edges, active, per_unit * 2 ** level)
        dv_on = []
        for x, s in zip(xs, segs):
            lo, hi = edges[s[0]], edges[s[0] + 1]
            eps = 1e-12 * (hi - lo)
            dv_on.append(-regular_potential(delta_v, np.clip(x, lo + eps, hi - eps)))
        val = _born_pass(comparison, dv_on, masses, epsilon, xs)
        if prev is not None:
            rich = ((4 * val[0] - prev[0]) / 3, (4 * val[1] - prev[1]) / 3)
            if prev_rich is not None:
                err = abs(rich[0] - prev_rich[0])
                if err <= quad_tol * abs(rich[0]) or err == 0.0:
                    return -0.5j * epsilon * rich[0], rich[1]
            prev_rich = rich
        prev = val
    raise QuadratureError("distorted-Born quadrature did not converge")


def distorted_born_b(comparison: ComparisonSolution, delta_v: PotentialSpec, epsilon: float,
                     quad_tol: float = 1e-10, settings: SolverSettings | None = None) -> complex:
    """Distorted-Born estimate of the phase-rotated coefficient b~(inf).

    The running phase and the outer integral share one grid that is refined by
    halving; successive trapezoid levels are Richardson-extrapolated until
    they agree to ``quad_tol`` relative.
    """
    return _distorted_born(comparison, delta_v, epsilon, quad_tol, settings)[0]


def first_order_b(comparison: ComparisonSolution, delta_v: PotentialSpec, epsilon: float,
                  quad_tol: float = 1e-10, settings: SolverSettings | None = None) -> complex:
    """b(inf) = b~(inf) exp(-i Phi / 2), the coefficient used in the composition law."""
    bt, phi = _distorted_born(comparison, delta_v, epsilon, quad_tol, settings)
    return bt * np.exp(-0.5j * phi)


def shift_integral(comparison: ComparisonSolution, delta_v: PotentialSpec,
                   quad_tol: float = 1e-12, settings: SolverSettings | None = None) -> float:
    """int |dv| |psi0|^2 dx, point masses included."""
    settings = settings or SolverSettings()
    edges, active = _shift_layout(comparison, delta_v, settings)

    def integrand(x, s):
        return abs(regular_potential(delta_v, x)) * abs(comparison.psi0_scalar(x)) ** 2

    total = integrate_segments(integrand, edges, quad_tol, skip=[not a for a in active])
    total += sum(abs(w) * abs(comparison.psi0_scalar(x)) ** 2 for x, w in point_masses(delta_v))
    return total


def delta_T_first_order(comparison: ComparisonSolution, b_inf: complex) -> float:
    """delta T = -2 T0 Re{conj(beta0) b(inf) / alpha0}."""
    return -2.0 * comparison.T0 * float(np.real(np.conj(comparison.beta0) * b_inf
                                                / comparison.alpha0))


def delta_N_first_order(comparison: ComparisonSolution, b_inf: complex) -> float:
    """delta |beta|^2 = 2 Re{conj(beta0) conj(alpha0) b(inf)}, from |beta0 + conj(alpha0) b|^2."""
    return 2.0 * float(np.real(np.conj(comparison.beta0 * comparison.alpha0) * b_inf))


def delta_T_bound(comparison: ComparisonSolution, delta_v: PotentialSpec, epsilon: float,
                  quad_tol: float = 1e-12, settings: SolverSettings | None = None) -> float:
    """|delta T| <= |eps| T0 sqrt(1 - T0) int |dv| |psi0|^2 dx (first order)."""
    T0 = comparison.T0
    if epsilon == 0.0 or T0 >= 1.0:
        return 0.0
    return abs(epsilon) * T0 * math.sqrt(1.0 - T0) * shift_integral(
        comparison, delta_v, quad_tol, settings)


def delta_N_bound(comparison: ComparisonSolution, delta_v: PotentialSpec, epsilon: float,
                  quad_tol: float = 1e-12, settings: SolverSettings | None = None) -> float:
    """|delta N| <= |eps| sqrt(N0 (N0 + 1)) int |dv| |psi0|^2 dx with N0 = |beta0|^2."""
    n0 = abs(comparison.beta0) ** 2
    if epsilon == 0.0 or n0 == 0.0:
        return 0.0
    return abs(epsilon) * math.sqrt(n0 * (n0 + 1.0)) * shift_integral(
        comparison, delta_v, quad_tol, settings)


def perturbation_estimates(comparison: ComparisonSolution, delta_v: PotentialSpec,
                           epsilon: float, quad_tol: float = 1e-10,
                           settings: SolverSettings | None = None) -> PerturbationResult:
    bt, phi = _distorted_born(comparison, delta_v, epsilon, quad_tol, settings)
    b_inf = bt * np.exp(-0.5j * phi)
    integral = shift_integral(comparison, delta_v, min(quad_tol, 1e-12), settings) \
        if epsilon != 0.0 else 0.0
    T0 = comparison.T0
    n0 = abs(comparison.beta0) ** 2
    eps = abs(epsilon)
    return PerturbationResult(
        epsilon=epsilon,
        b_tilde_est=complex(bt),
        b_infinity_est=complex(b_inf),
        b_abs_bound=0.5 * eps * integral,
        delta_T_est=delta_T_first_order(comparison, b_inf),
        delta_T_bound=eps * T0 * math.sqrt(max(0.0, 1.0 - T0)) * integral,
        delta_N_est=delta_N_first_order(comparison, b_inf),
        delta_N_bound=eps * math.sqrt(n0 * (n0 + 1.0)) * integral,
    )


@dataclass(frozen=True)
class ExactShift:
    epsilon: float
    b_inf: complex
    T: float
    delta_T: float
    delta_N: float
    beta: complex


def exact_shift(comparison: ComparisonSolution, delta_v: PotentialSpec, epsilon: float,
                settings: SolverSettings | None = None) -> ExactShift:
    """Solve the shifted problem exactly for comparison against the estimates."""
    settings = settings or SolverSettings()
    E = comparison.energy
    spec = shifted(comparison.spec, delta_v, epsilon)
    final, _ = solve_ab_system(spec, comparison, E, settings)
    res = compose_bogoliubov(comparison, final)
    return ExactShift(epsilon=epsilon, b_inf=final.b, T=res.T, delta_T=res.T - comparison.T0,
                      delta_N=abs(res.beta) ** 2 - abs(comparison.beta0) ** 2, beta=res.beta)


def exact_transmission(comparison: ComparisonSolution, delta_v: PotentialSpec,
                       epsilon: float, settings: SolverSettings | None = None) -> float:
    """T of the shifted problem by direct integration of the Schroedinger equation."""
    return solve_direct(shifted(comparison.spec, delta_v, epsilon), comparison.energy,
                        settings).T
