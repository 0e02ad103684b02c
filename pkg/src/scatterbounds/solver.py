"""Error-controlled integration of the scattering problem.

Two routes are provided. :func:`solve_direct` integrates psi'' = -k^2 psi
itself. :func:`solve_ab_system` integrates the first-order system for the
position-dependent Bogoliubov coefficients (a, b) defined by
psi = a psi0 + b conj(psi0) with the gauge a' psi0 + b' conj(psi0) = 0:

    a' = +(i/2) (k^2 - k0^2) (a |psi0|^2 + b conj(psi0)^2)
    b' = -(i/2) (k^2 - k0^2) (a psi0^2   + b |psi0|^2)

Both use an embedded 8(5,3) Runge-Kutta pair with per-step error control,
split at every breakpoint of the potentials so that the right-hand side is
smooth inside each segment. Point masses enter as exact jump conditions
between segments.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import DOP853

from .domain import (
    PotentialSpec,
    ScatterResult,
    Window,
    breakpoints,
    merge_point_masses,
    point_masses,
    regular_potential,
    support,
    wave_number_profile,
)
from .errors import StepLimitError, TruncationError
from .refsolutions import ComparisonSolution

MAX_WINDOW = 1.0e6


@dataclass(frozen=True)
class SolverSettings:
    """Integration and truncation controls.

    ``asymptote_tol`` is relative to ``max(1, |E|)``; ``n_nodes`` is the
    approximate number of stored trajectory nodes.
    """

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    asymptote_tol: float = 1e-12
    domain_pad: float = 1.0
    max_steps: int = 200_000
    n_nodes: int = 4001

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol", "asymptote_tol", "domain_pad"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.max_steps <= 0:
            raise ValueError("max_steps must be positive")
        if self.n_nodes < 3:
            raise ValueError("n_nodes must be at least 3")


@dataclass(frozen=True)
class AmplitudeState:
    x: float
    a: complex
    b: complex


@dataclass(frozen=True)
class Trajectory:
    """Stored (a, b) nodes; segment boundaries appear twice (before/after)."""

    x: np.ndarray
    a: np.ndarray
    b: np.ndarray
    segment: np.ndarray
    edges: np.ndarray
    steps: int

    def __len__(self):
        return self.x.size

    @property
    def final(self) -> AmplitudeState:
        return AmplitudeState(float(self.x[-1]), complex(self.a[-1]), complex(self.b[-1]))

    def states(self) -> list[AmplitudeState]:
        return [AmplitudeState(float(x), complex(a), complex(b))
                for x, a, b in zip(self.x, self.a, self.b)]

    def flux_deviation(self) -> float:
        """max |(|a|^2 - |b|^2) - 1| over the stored nodes."""
        return float(np.max(np.abs(np.abs(self.a) ** 2 - np.abs(self.b) ** 2 - 1.0)))


def flux(psi, dpsi):
    """Probability current Im{conj(psi) psi'}."""
    out = np.imag(np.conj(psi) * dpsi)
    return float(out) if np.ndim(out) == 0 else out


def truncation_window(specs, E: float, settings: SolverSettings) -> Window:
    """Finite domain outside which every potential is flat to tolerance."""
    thr = settings.asymptote_tol * max(1.0, abs(E))
    lo, hi = math.inf, -math.inf
    breaks: set[float] = set()
    for spec in specs:
        s = support(spec, 0.5 * thr)
        if s is not None:
            lo, hi = min(lo, s[0]), max(hi, s[1])
        breaks.update(breakpoints(spec))
    if lo > hi:
        lo = hi = 0.0
    pad = settings.domain_pad
    x_min, x_max = lo - pad, hi + pad
    if not (math.isfinite(x_min) and math.isfinite(x_max)) or x_max - x_min > MAX_WINDOW:
        raise TruncationError(f"window [{x_min}, {x_max}] is not acceptable")
    for spec in specs:
        left = regular_potential(spec, x_min)
        right = regular_potential(spec, x_max)
        if abs(left - spec.v_minus_inf) >= thr or abs(right - spec.v_plus_inf) >= thr:
            raise TruncationError(
                f"potential not flat to {thr:g} at window edges [{x_min}, {x_max}]")
    return Window(x_min, x_max, tuple(sorted(breaks)))


def _clamp(lo: float, hi: float) -> Callable[[float], float]:
    # one-sided limits at segment ends, so discontinuous V takes the segment's value
    eps = 1e-12 * (hi - lo)
    a, b = lo + eps, hi - eps

    def clamp(x: float) -> float:
        return a if x < a else (b if x > b else x)

    return clamp


def _node_counts(edges: np.ndarray, active: list[bool], n_nodes: int) -> list[int]:
    lengths = np.diff(edges)
    act_len = sum(l for l, on in zip(lengths, active) if on)
    counts = []
    for l, on in zip(lengths, active):
        if on and act_len > 0:
            counts.append(max(16, int(math.ceil(n_nodes * l / act_len)) + 1))
        else:
            counts.append(3)
    return counts


def _integrate(rhs_for, y0, edges, counts, jump, settings: SolverSettings, skip=None):
    """Run the RK pair across consecutive segments, storing dense output.

    ``rhs_for(lo, hi)`` returns the right-hand side for one segment;
    ``jump(x, y)`` maps the state across an interior edge. Segments flagged in
    ``skip`` have an identically zero right-hand side and are not integrated.
    """
    y = np.asarray(y0, dtype=complex)
    xs, ys, segs = [], [], []
    steps = 0
    nseg = len(edges) - 1
    for s in range(nseg):
        lo, hi = float(edges[s]), float(edges[s + 1])
        nodes = np.linspace(lo, hi, counts[s])
        out = np.empty((nodes.size, y.size), dtype=complex)
        out[0] = y
        if skip is not None and skip[s]:
            out[:] = y
        else:
            solver = DOP853(rhs_for(lo, hi), lo, y, hi,
                            rtol=settings.rel_tol, atol=settings.abs_tol)
            k = 1
            while solver.status == "running":
                msg = solver.step()
                steps += 1
                if solver.status == "failed":
                    raise StepLimitError(f"integrator failed at x={solver.t}: {msg}")
                if steps > settings.max_steps:
                    raise StepLimitError(
                        f"exceeded max_steps={settings.max_steps} at x={solver.t}")
                j = int(np.searchsorted(nodes, solver.t, side="right"))
                if j > k:
                    out[k:j] = solver.dense_output()(nodes[k:j]).T
                    k = j
            out[-1] = solver.y
        xs.append(nodes)
        ys.append(out)
        segs.append(np.full(nodes.size, s))
        y = out[-1]
        if s < nseg - 1:
            y = jump(hi, y)
    return np.concatenate(xs), np.concatenate(ys), np.concatenate(segs), steps


def _weight_map(points) -> dict[float, float]:
    return dict(points)


def integrate_direct(spec: PotentialSpec, E: float, settings: SolverSettings):
    """Integrate psi'' = -k^2 psi from the left edge; return result and nodes.

    Returns ``(ScatterResult, x, psi, dpsi)``.
    """
    profile = wave_number_profile(spec, E)
    win = truncation_window([spec], E, settings)
    edges = win.edges
    weights = _weight_map(point_masses(spec))
    km, kp = profile.k_minus_inf, profile.k_plus_inf

    def rhs_for(lo, hi):
        clamp = _clamp(lo, hi)

        def rhs(x, y):
            k2 = E - regular_potential(spec, clamp(x))
            return np.array([y[1], -k2 * y[0]])

        return rhs

    def jump(x, y):
        w = weights.get(x, 0.0)
        return np.array([y[0], y[1] + w * y[0]]) if w else y

    counts = [max(8, int(settings.n_nodes * l / (edges[-1] - edges[0]))) for l in np.diff(edges)]
    psi_l = np.exp(1j * km * edges[0]) / math.sqrt(km)
    xs, ys, _, _ = _integrate(rhs_for, [psi_l, 1j * km * psi_l], edges, counts, jump, settings)
    x_r = xs[-1]
    psi, dpsi = ys[-1]
    r = dpsi / (1j * kp)
    alpha = math.sqrt(kp) * np.exp(-1j * kp * x_r) * 0.5 * (psi + r)
    beta = math.sqrt(kp) * np.exp(1j * kp * x_r) * 0.5 * (psi - r)
    return ScatterResult.from_coefficients(alpha, beta), xs, ys[:, 0], ys[:, 1]


def solve_direct(spec: PotentialSpec, E: float,
                 settings: SolverSettings | None = None) -> ScatterResult:
    """Exact Bogoliubov coefficients of ``spec`` at energy ``E``.

    The wave function starts as ``exp(i k_- x)/sqrt(k_-)`` at the left window
    edge and is decomposed into ``exp(+-i k_+ x)/sqrt(k_+)`` at the right edge.
    """
    return integrate_direct(spec, E, settings or SolverSettings())[0]


def _check_pair(spec: PotentialSpec, comparison: ComparisonSolution, E: float):
    if E != comparison.energy:
        raise ValueError(f"comparison built at E={comparison.energy}, asked for E={E}")
    cs = comparison.spec
    scale = max(1.0, abs(E))
    if (abs(spec.v_minus_inf - cs.v_minus_inf) > 1e-12 * scale
            or abs(spec.v_plus_inf - cs.v_plus_inf) > 1e-12 * scale):
        raise ValueError("potential and comparison must share asymptotic values")
    if abs(comparison.J0 - 1.0) > 1e-12:
        raise ValueError("comparison must be normalised to unit flux")


def shift_point_masses(spec: PotentialSpec, comparison: ComparisonSolution):
    """Point masses of V - V0 as ``(x, weight)``; k^2 - k0^2 carries ``-weight``."""
    pts = list(point_masses(spec)) + [(x, -w) for x, w in point_masses(comparison.spec)]
    return tuple((x, w) for x, w in merge_point_masses(pts) if w != 0.0)


def shift_window(spec: PotentialSpec, comparison: ComparisonSolution, E: float,
                 settings: SolverSettings) -> tuple[np.ndarray, list[bool]]:
    """Segment edges for the (a, b) system and whether k^2 - k0^2 is nonzero on each."""
    win = truncation_window([spec, comparison.spec], E, settings)
    edges = win.edges
    active = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        probe = np.linspace(lo, hi, 19)[1:-1]
        d = regular_potential(comparison.spec, probe) - regular_potential(spec, probe)
        active.append(bool(np.any(d != 0.0)))
    return edges, active


def shift_on_nodes(spec: PotentialSpec, comparison: ComparisonSolution,
                   x: np.ndarray, segment: np.ndarray, edges: np.ndarray) -> np.ndarray:
    """Regular part of k^2 - k0^2 at stored nodes, one-sided within each segment."""
    out = np.empty_like(x, dtype=float)
    for s in np.unique(segment):
        m = segment == s
        lo, hi = edges[s], edges[s + 1]
        eps = 1e-12 * (hi - lo)
        xc = np.clip(x[m], lo + eps, hi - eps)
        out[m] = regular_potential(comparison.spec, xc) - regular_potential(spec, xc)
    return out


def solve_ab_system(spec: PotentialSpec, comparison: ComparisonSolution, E: float,
                    settings: SolverSettings | None = None):
    """Integrate the (a, b) system from (1, 0) at the left window edge.

    Returns ``(final_state, trajectory)``.
    """
    settings = settings or SolverSettings()
    _check_pair(spec, comparison, E)
    edges, active = shift_window(spec, comparison, E, settings)
    weights = _weight_map(shift_point_masses(spec, comparison))
    cspec = comparison.spec
    psi0 = comparison.psi0_scalar

    def rhs_for(lo, hi):
        clamp = _clamp(lo, hi)

        def rhs(x, y):
            xc = clamp(x)
            d = regular_potential(cspec, xc) - regular_potential(spec, xc)
            if d == 0.0:
                return np.zeros(2, dtype=complex)
            p = psi0(x)
            p2 = p * p
            r = p.real * p.real + p.imag * p.imag
            a, b = y
            return np.array([0.5j * d * (a * r + b * p2.conjugate()),
                             -0.5j * d * (a * p2 + b * r)])

        return rhs

    def jump(x, y):
        w = weights.get(x, 0.0)
        if not w:
            return y
        p = psi0(x)
        r = abs(p) ** 2
        a, b = y
        return np.array([a - 0.5j * w * (a * r + b * np.conj(p) ** 2),
                         b + 0.5j * w * (a * p * p + b * r)])

    counts = _node_counts(edges, active, settings.n_nodes)
    xs, ys, segs, steps = _integrate(rhs_for, [1.0 + 0j, 0j], edges, counts, jump,
                                     settings, skip=[not on for on in active])
    traj = Trajectory(x=xs, a=ys[:, 0], b=ys[:, 1], segment=segs, edges=edges, steps=steps)
    return traj.final, traj


def compose_bogoliubov(comparison: ComparisonSolution, final: AmplitudeState) -> ScatterResult:
    """alpha = alpha0 a + conj(beta0) b,  beta = beta0 a + conj(alpha0) b."""
    a0, b0 = comparison.alpha0, comparison.beta0
    alpha = a0 * final.a + np.conj(b0) * final.b
    beta = b0 * final.a + np.conj(a0) * final.b
    return ScatterResult.from_coefficients(alpha, beta)


def reconstruct(comparison: ComparisonSolution, traj: Trajectory):
    """psi = a psi0 + b conj(psi0) and psi' = a psi0' + b conj(psi0') on the nodes."""
    p = comparison.psi0(traj.x)
    dp = comparison.dpsi0(traj.x)
    return traj.a * p + traj.b * np.conj(p), traj.a * dp + traj.b * np.conj(dp)
