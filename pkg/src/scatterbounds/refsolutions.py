"""Exactly solvable comparison problems.

Every comparison potential here is piecewise constant, possibly with point
masses at region boundaries. The wave function is assembled region by region
from plane waves (real exponentials under the barrier), matched in value and
slope, and normalised to unit flux with pure ``exp(i k x)/sqrt(k)`` behaviour
on the far left.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import domain
from .domain import PotentialSpec, WaveNumberProfile, wave_number_profile
from .errors import DegenerateCaseError, NoOpenChannelError


@dataclass(frozen=True)
class ComparisonSolution:
    """Closed-form unit-flux solution psi0 of a solvable potential at energy E.

    ``alpha0`` and ``beta0`` depend on the global phase convention (plane
    waves referred to x = 0); ``|alpha0|``, ``|beta0|`` and ``T0`` do not.
    """

    spec: PotentialSpec
    profile: WaveNumberProfile
    alpha0: complex
    beta0: complex
    T0: float
    J0: float
    edges: tuple[float, ...]
    kappas: tuple[complex, ...]
    origins: tuple[float, ...]
    coefs: tuple[tuple[complex, complex], ...]

    @property
    def energy(self) -> float:
        return self.profile.energy

    def _pieces(self, x):
        x = np.asarray(x, dtype=float)
        idx = np.searchsorted(np.asarray(self.edges), x, side="right")
        kap = np.asarray(self.kappas)[idx]
        u = x - np.asarray(self.origins)[idx]
        cp = np.asarray([c[0] for c in self.coefs])[idx]
        cm = np.asarray([c[1] for c in self.coefs])[idx]
        ep = np.exp(1j * kap * u)
        em = np.exp(-1j * kap * u)
        return kap, cp * ep, cm * em

    def psi0(self, x):
        _, fp, fm = self._pieces(x)
        out = fp + fm
        return complex(out) if out.ndim == 0 else out

    def dpsi0(self, x):
        kap, fp, fm = self._pieces(x)
        out = 1j * kap * (fp - fm)
        return complex(out) if out.ndim == 0 else out

    def psi0_scalar(self, x: float) -> complex:
        """Fast scalar evaluation for ODE right-hand sides."""
        i = 0
        for e in self.edges:
            if x >= e:
                i += 1
            else:
                break
        kap = self.kappas[i]
        ph = cmath.exp(1j * kap * (x - self.origins[i]))
        cp, cm = self.coefs[i]
        return cp * ph + cm / ph


def _piecewise(spec: PotentialSpec, E: float, edges, levels, weights) -> ComparisonSolution:
    """Match plane waves across ``edges``.

    ``levels[j]`` is the constant potential on region j (len(edges) + 1
    regions); ``weights[j]`` is a point mass sitting on ``edges[j]``.
    """
    profile = wave_number_profile(spec, E)
    kappas = []
    for j, v in enumerate(levels):
        if E == v:
            raise DegenerateCaseError(
                f"E={E} equals the flat level {v} of region {j}; solution is linear there")
        kappas.append(cmath.sqrt(complex(E - v)))
    # principal sqrt of a negative number is +i q, so exp(i kappa u) decays
    km, kp = profile.k_minus_inf, profile.k_plus_inf
    kappas[0] = complex(km)
    kappas[-1] = complex(kp)
    # outer regions are referred to x = 0, inner regions to their left edge
    origins = [0.0] + [float(e) for e in edges[:-1]] + [0.0] if edges else [0.0]
    coefs = [(1.0 / math.sqrt(km) + 0j, 0j)]
    for j, e in enumerate(edges):
        kap, o = kappas[j], origins[j]
        cp, cm = coefs[j]
        ep = cmath.exp(1j * kap * (e - o))
        psi = cp * ep + cm / ep
        dpsi = 1j * kap * (cp * ep - cm / ep) + weights[j] * psi
        kn, on = kappas[j + 1], origins[j + 1]
        en = cmath.exp(1j * kn * (e - on))
        r = dpsi / (1j * kn)
        coefs.append((0.5 * (psi + r) / en, 0.5 * (psi - r) * en))
    alpha0 = math.sqrt(kp) * coefs[-1][0]
    beta0 = math.sqrt(kp) * coefs[-1][1]
    # |alpha0| >= 1 exactly; matching round-off can dip below it for reflectionless cases
    return ComparisonSolution(
        spec=spec, profile=profile, alpha0=alpha0, beta0=beta0,
        T0=min(1.0, 1.0 / abs(alpha0) ** 2), J0=1.0,
        edges=tuple(float(e) for e in edges), kappas=tuple(kappas),
        origins=tuple(origins), coefs=tuple(coefs),
    )


def free_comparison(E: float) -> ComparisonSolution:
    """psi0 = exp(i k0 x)/sqrt(k0): alpha0 = 1, beta0 = 0, T0 = 1."""
    if not E > 0:
        raise NoOpenChannelError(f"free comparison needs E > 0, got {E}")
    return _piecewise(domain.free(), E, [], [0.0], [])


def square_barrier_comparison(V0: float, L: float, E: float,
                              center: float = 0.0) -> ComparisonSolution:
    if not L > 0:
        raise ValueError("barrier width must be positive")
    spec = domain.square_barrier(V0, L, center)
    if not E > 0:
        raise NoOpenChannelError(f"square barrier comparison needs E > 0, got {E}")
    if V0 == 0.0:
        return _piecewise(spec, E, [], [0.0], [])
    edges = [center - 0.5 * L, center + 0.5 * L]
    return _piecewise(spec, E, edges, [0.0, V0, 0.0], [0.0, 0.0])


def delta_comparison(lam: float, E: float, center: float = 0.0) -> ComparisonSolution:
    """Single point mass; the slope jumps by ``lam * psi0`` at ``center``."""
    return delta_points_comparison(domain.delta(lam, center), E)


def delta_points_comparison(spec: PotentialSpec, E: float) -> ComparisonSolution:
    if not E > 0:
        raise NoOpenChannelError(f"delta comparison needs E > 0, got {E}")
    pts = spec.points
    return _piecewise(spec, E, [x for x, _ in pts], [0.0] * (len(pts) + 1),
                      [w for _, w in pts])


def step_comparison(V_plus: float, E: float, V_minus: float = 0.0,
                    center: float = 0.0) -> ComparisonSolution:
    spec = domain.step(V_plus, V_minus, center)
    if not E > max(V_plus, V_minus):
        raise NoOpenChannelError(
            f"step comparison needs E > max({V_minus}, {V_plus}), got {E}")
    if V_plus == V_minus:
        return _piecewise(spec, E, [], [V_minus], [])
    return _piecewise(spec, E, [center], [V_minus, V_plus], [0.0])


def comparison_for(spec: PotentialSpec, E: float) -> ComparisonSolution:
    """Build the comparison solution for any solvable potential description."""
    if spec.kind == "free":
        return free_comparison(E)
    if spec.kind == "square_barrier":
        return square_barrier_comparison(spec.height, spec.width, E, spec.center)
    if spec.kind == "delta":
        return delta_points_comparison(spec, E)
    if spec.kind == "step":
        return step_comparison(spec.v_plus_inf, E, spec.v_minus_inf, spec.center)
    raise ValueError(f"no closed-form comparison for kind {spec.kind!r}")
