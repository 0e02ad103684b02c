"""Magnitude/phase diagnostics of a solved (a, b) trajectory.

With |a| = cosh(Theta), |b| = sinh(Theta) and the nett phase
Delta = phi_a - phi_b + 2 phi_0, the trajectory must satisfy

    Theta(x) = 1/2 int_{-inf}^x (k^2 - k0^2) |psi0|^2 sin(Delta) dx

and the nett-phase equation checked by :func:`nett_phase_residual`. These are
residual checks on the computed trajectory; the Delta equation is singular at
b = 0 and is never integrated forward.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .domain import PotentialSpec
from .errors import InsufficientDataError, PhaseResolutionError
from .refsolutions import ComparisonSolution
from .solver import Trajectory, shift_on_nodes

# below this |b| the phase of b carries no information
B_FLOOR = 1e-13
# largest admissible phase change between adjacent nodes of one segment
MAX_PHASE_STEP = 0.5 * np.pi


@dataclass(frozen=True)
class PhaseState:
    x: float
    theta: float
    delta: float
    phi0: float


@dataclass(frozen=True)
class PhaseTrajectory:
    x: np.ndarray
    theta: np.ndarray
    phi_a: np.ndarray
    phi_b: np.ndarray
    phi0: np.ndarray
    delta: np.ndarray
    abs_a: np.ndarray
    abs_b: np.ndarray
    segment: np.ndarray
    edges: np.ndarray

    def states(self) -> list[PhaseState]:
        return [PhaseState(float(x), float(t), float(d), float(p))
                for x, t, d, p in zip(self.x, self.theta, self.delta, self.phi0)]


def _unwrap(phase: np.ndarray, segment: np.ndarray, what: str) -> np.ndarray:
    """Nearest-branch continuation; only segment boundaries may jump freely."""
    steps = np.diff(phase)
    wrapped = (steps + np.pi) % (2 * np.pi) - np.pi
    inner = segment[1:] == segment[:-1]
    bad = inner & (np.abs(wrapped) > MAX_PHASE_STEP)
    if np.any(bad):
        i = int(np.argmax(bad))
        raise PhaseResolutionError(
            f"{what} changes by {abs(wrapped[i]):.3f} rad between adjacent nodes near "
            f"x={i}; store a denser trajectory (increase n_nodes)")
    return np.concatenate([[phase[0]], phase[0] + np.cumsum(wrapped)])


def _fill_unresolved(phase: np.ndarray, ok: np.ndarray) -> np.ndarray:
    if ok.all():
        return phase
    if not ok.any():
        return np.zeros_like(phase)
    idx = np.arange(phase.size)
    good = idx[ok]
    nearest = good[np.clip(np.searchsorted(good, idx), 0, good.size - 1)]
    return np.where(ok, phase, phase[nearest])


def phase_trajectory(trajectory: Trajectory, comparison: ComparisonSolution) -> PhaseTrajectory:
    """Theta, unwrapped phases and Delta at every stored node."""
    a, b, x = trajectory.a, trajectory.b, trajectory.x
    abs_a, abs_b = np.abs(a), np.abs(b)
    theta = np.arccosh(np.maximum(abs_a, 1.0))
    psi0 = comparison.psi0(x)
    seg = trajectory.segment
    phi_a = _unwrap(np.angle(a), seg, "phase of a")
    phi0 = _unwrap(np.angle(psi0), seg, "phase of psi0")
    ok = abs_b > B_FLOOR
    raw_b = _fill_unresolved(np.angle(b), ok)
    phi_b = _unwrap(raw_b, seg, "phase of b")
    delta = phi_a - phi_b + 2.0 * phi0
    return PhaseTrajectory(x=x, theta=theta, phi_a=phi_a, phi_b=phi_b, phi0=phi0,
                           delta=delta, abs_a=abs_a, abs_b=abs_b, segment=seg,
                           edges=trajectory.edges)


def _shift_weight(phases: PhaseTrajectory, comparison: ComparisonSolution,
                  spec: PotentialSpec):
    d = shift_on_nodes(spec, comparison, phases.x, phases.segment, phases.edges)
    rho0 = np.abs(comparison.psi0(phases.x)) ** 2
    return d, rho0


def theta_running_integral(phases: PhaseTrajectory, comparison: ComparisonSolution,
                           spec: PotentialSpec) -> np.ndarray:
    """Trapezoid accumulation of 1/2 (k^2 - k0^2)|psi0|^2 sin(Delta) along the nodes.

    Point masses act between segments; their contribution is taken as the
    observed jump of Theta across the interface.
    """
    d, rho0 = _shift_weight(phases, comparison, spec)
    f = 0.5 * d * rho0 * np.sin(phases.delta)
    out = np.empty_like(f)
    carry = 0.0
    seg = phases.segment
    prev_end = None
    for s in np.unique(seg):
        idx = np.flatnonzero(seg == s)
        if prev_end is not None:
            carry += phases.theta[idx[0]] - phases.theta[prev_end]
        out[idx] = carry + cumulative_trapezoid(f[idx], phases.x[idx], initial=0.0)
        carry = out[idx[-1]]
        prev_end = idx[-1]
    return out


def theta_mismatch(phases: PhaseTrajectory, comparison: ComparisonSolution,
                   spec: PotentialSpec) -> float:
    """max |arccosh|a(x)| - running integral| over stored nodes."""
    return float(np.max(np.abs(phases.theta
                               - theta_running_integral(phases, comparison, spec))))


def nett_phase_residual(phases: PhaseTrajectory, comparison: ComparisonSolution,
                        spec: PotentialSpec, *, cos_factor: str = "coth",
                        min_sinh: float = 1e-3) -> float:
    """Largest residual of the nett-phase equation on the stored nodes.

    Residual of

        Delta' - [(k^2 - k0^2)|psi0|^2 + 2 phi0'] - (k^2 - k0^2)|psi0|^2 C(2 Theta) cos(Delta)

    with Delta' from finite differences inside each segment, phi0' = J0/|psi0|^2
    and 2 Theta taken from the running integral. Subtracting the imaginary
    parts of the magnitude/phase equations gives the cos term the factor
    (|a|^2 + |b|^2)/(2|a||b|), so ``cos_factor="coth"`` uses
    C = coth(2 Theta). ``cos_factor="csch"`` uses C = 1/sinh(2 Theta), the
    form obtained by setting |a|^2 + |b|^2 to 1; it is kept for comparison
    and does not vanish on exact trajectories.

    Only nodes with sinh(2 Theta) > ``min_sinh`` are used, since the equation
    is singular where b = 0.
    """
    if cos_factor not in ("coth", "csch"):
        raise ValueError("cos_factor must be 'coth' or 'csch'")
    d, rho0 = _shift_weight(phases, comparison, spec)
    two_theta = 2.0 * theta_running_integral(phases, comparison, spec)
    sh = np.sinh(two_theta)
    usable = sh > min_sinh
    worst, count = 0.0, 0
    for s in np.unique(phases.segment):
        idx = np.flatnonzero(phases.segment == s)
        if idx.size < 3:
            continue
        m = usable[idx]
        if not m.any():
            continue
        xs = phases.x[idx]
        ddelta = np.gradient(phases.delta[idx], xs, edge_order=2)
        w = d[idx] * rho0[idx]
        c = np.cosh(two_theta[idx]) if cos_factor == "coth" else 1.0
        with np.errstate(divide="ignore", invalid="ignore"):
            rhs = w + 2.0 * comparison.J0 / rho0[idx] + w * c * np.cos(phases.delta[idx]) / sh[idx]
        r = np.abs(ddelta - rhs)[m]
        worst = max(worst, float(r.max()))
        count += int(m.sum())
    if count < 3:
        raise InsufficientDataError(
            f"only {count} nodes with sinh(2 Theta) > {min_sinh}; residual undefined")
    return worst
