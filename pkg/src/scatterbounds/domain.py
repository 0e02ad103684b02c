"""Potential descriptions, wave-number profiles and scattering result types.

Units are natural throughout: 2m = hbar = 1, so that k(x)^2 = E - V(x).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DomainError, NoOpenChannelError

KINDS = ("free", "step", "square_barrier", "delta", "gaussian", "tabulated", "shifted")


@dataclass(frozen=True)
class PotentialSpec:
    """Tagged analytic description of a one-dimensional potential.

    Only the fields relevant to ``kind`` are used:

    * ``free``: nothing.
    * ``step``: ``v_minus_inf``, ``v_plus_inf``, jump located at ``center``.
    * ``square_barrier``: ``height`` on ``|x - center| < width / 2`` (negative
      height gives a well).
    * ``delta``: ``points``, a tuple of ``(position, weight)`` pairs.
    * ``gaussian``: ``height * exp(-(x - center)**2 / (2 sigma**2))``.
    * ``tabulated``: samples ``table_x``, ``table_v``; linear in between.
    * ``shifted``: ``base + epsilon * delta_v``.

    Use the module-level constructors (:func:`square_barrier` etc.) rather
    than building instances by hand.
    """

    kind: str
    height: float = 0.0
    width: float = 0.0
    center: float = 0.0
    sigma: float = 0.0
    points: tuple[tuple[float, float], ...] = ()
    table_x: tuple[float, ...] = ()
    table_v: tuple[float, ...] = ()
    v_minus_inf: float = 0.0
    v_plus_inf: float = 0.0
    base: PotentialSpec | None = None
    delta_v: PotentialSpec | None = None
    epsilon: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown potential kind {self.kind!r}")
        if not (math.isfinite(self.v_minus_inf) and math.isfinite(self.v_plus_inf)):
            raise ValueError("asymptotic values must be finite")
        if self.kind == "square_barrier" and not self.width > 0:
            raise ValueError("square barrier width must be positive")
        if self.kind == "gaussian" and not self.sigma > 0:
            raise ValueError("gaussian sigma must be positive")
        if self.kind == "tabulated":
            xs = np.asarray(self.table_x, dtype=float)
            if xs.size < 2 or xs.size != len(self.table_v):
                raise ValueError("tabulated potential needs matching x/v samples, at least two")
            if np.any(np.diff(xs) <= 0):
                raise ValueError("tabulated x samples must be strictly increasing")
        if self.kind == "shifted" and (self.base is None or self.delta_v is None):
            raise ValueError("shifted potential needs base and delta_v")

    @property
    def is_smooth_free(self) -> bool:
        """True when the regular (non point-mass) part vanishes identically."""
        if self.kind in ("free", "delta"):
            return True
        if self.kind == "shifted":
            return self.base.is_smooth_free and (
                self.epsilon == 0.0 or self.delta_v.is_smooth_free)
        return False


def free() -> PotentialSpec:
    return PotentialSpec("free")


def step(v_plus: float, v_minus: float = 0.0, center: float = 0.0) -> PotentialSpec:
    return PotentialSpec("step", center=center, v_minus_inf=v_minus, v_plus_inf=v_plus)


def square_barrier(height: float, width: float, center: float = 0.0) -> PotentialSpec:
    return PotentialSpec("square_barrier", height=height, width=width, center=center)


def delta(strength: float, center: float = 0.0) -> PotentialSpec:
    return PotentialSpec("delta", points=((float(center), float(strength)),))


def delta_points(points: Sequence[tuple[float, float]]) -> PotentialSpec:
    pts = tuple(sorted((float(x), float(w)) for x, w in points))
    return PotentialSpec("delta", points=pts)


def gaussian(height: float, sigma: float, center: float = 0.0) -> PotentialSpec:
    return PotentialSpec("gaussian", height=height, sigma=sigma, center=center)


def tabulated(x: Sequence[float], v: Sequence[float]) -> PotentialSpec:
    """Piecewise-linear potential; asymptotes are the end samples."""
    xs = tuple(float(t) for t in x)
    vs = tuple(float(t) for t in v)
    if not vs:
        raise ValueError("empty table")
    return PotentialSpec("tabulated", table_x=xs, table_v=vs,
                         v_minus_inf=vs[0], v_plus_inf=vs[-1])


def shifted(base: PotentialSpec, delta_v: PotentialSpec, epsilon: float) -> PotentialSpec:
    """``base + epsilon * delta_v``."""
    return PotentialSpec(
        "shifted", base=base, delta_v=delta_v, epsilon=float(epsilon),
        v_minus_inf=base.v_minus_inf + epsilon * delta_v.v_minus_inf,
        v_plus_inf=base.v_plus_inf + epsilon * delta_v.v_plus_inf,
    )


def _regular(spec: PotentialSpec, x, strict: bool):
    """Regular part of V(x), vectorised. Point masses contribute nothing."""
    kind = spec.kind
    if kind in ("free", "delta"):
        return np.zeros_like(x, dtype=float)
    if kind == "square_barrier":
        return np.where(np.abs(x - spec.center) < 0.5 * spec.width, spec.height, 0.0)
    if kind == "gaussian":
        return spec.height * np.exp(-0.5 * ((x - spec.center) / spec.sigma) ** 2)
    if kind == "step":
        return np.where(x < spec.center, spec.v_minus_inf, spec.v_plus_inf)
    if kind == "tabulated":
        xs = spec.table_x
        if strict and (np.any(x < xs[0]) or np.any(x > xs[-1])):
            raise DomainError(f"x outside tabulated range [{xs[0]}, {xs[-1]}]")
        return np.interp(x, xs, spec.table_v)
    # shifted
    out = _regular(spec.base, x, strict)
    if spec.epsilon != 0.0:
        out = out + spec.epsilon * _regular(spec.delta_v, x, strict)
    return out


def _regular_scalar(spec: PotentialSpec, x: float) -> float:
    kind = spec.kind
    if kind in ("free", "delta"):
        return 0.0
    if kind == "square_barrier":
        return spec.height if abs(x - spec.center) < 0.5 * spec.width else 0.0
    if kind == "gaussian":
        u = (x - spec.center) / spec.sigma
        return spec.height * math.exp(-0.5 * u * u)
    if kind == "step":
        return spec.v_minus_inf if x < spec.center else spec.v_plus_inf
    if kind == "tabulated":
        return float(np.interp(x, spec.table_x, spec.table_v))
    v = _regular_scalar(spec.base, x)
    if spec.epsilon != 0.0:
        v += spec.epsilon * _regular_scalar(spec.delta_v, x)
    return v


def _contains_delta_kind(spec: PotentialSpec) -> bool:
    if spec.kind == "delta":
        return True
    if spec.kind == "shifted":
        return _contains_delta_kind(spec.base) or _contains_delta_kind(spec.delta_v)
    return False


def evaluate_potential(spec: PotentialSpec, x):
    """Pointwise V(x) for a potential without point masses.

    Exact for the analytic kinds, piecewise-linear for tabulated ones.
    Raises :class:`DomainError` when ``x`` lies outside a table, and
    ``ValueError`` for delta potentials, whose point masses are read with
    :func:`point_masses` instead.
    """
    if _contains_delta_kind(spec):
        raise ValueError("delta potentials have no pointwise values; use point_masses()")
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("x must be finite")
    out = _regular(spec, arr, strict=True)
    return float(out) if out.ndim == 0 else out


def regular_potential(spec: PotentialSpec, x):
    """V(x) without point masses, extrapolating tables by their end values."""
    if np.ndim(x) == 0:
        return _regular_scalar(spec, float(x))
    return _regular(spec, np.asarray(x, dtype=float), strict=False)


def point_masses(spec: PotentialSpec) -> tuple[tuple[float, float], ...]:
    """Point-mass terms ``(position, weight)`` with V containing ``weight * delta(x - position)``."""
    if spec.kind == "delta":
        return spec.points
    if spec.kind == "shifted":
        out = list(point_masses(spec.base))
        if spec.epsilon != 0.0:
            out += [(x, spec.epsilon * w) for x, w in point_masses(spec.delta_v)]
        return merge_point_masses(out)
    return ()


def merge_point_masses(points) -> tuple[tuple[float, float], ...]:
    """Sum weights at coincident positions, sorted by position."""
    acc: dict[float, float] = {}
    for x, w in points:
        acc[x] = acc.get(x, 0.0) + w
    return tuple(sorted(acc.items()))


def breakpoints(spec: PotentialSpec) -> tuple[float, ...]:
    """Positions where V or its derivative is discontinuous, sorted."""
    kind = spec.kind
    if kind == "square_barrier":
        pts = {spec.center - 0.5 * spec.width, spec.center + 0.5 * spec.width}
    elif kind == "step":
        pts = {spec.center}
    elif kind == "delta":
        pts = {x for x, _ in spec.points}
    elif kind == "tabulated":
        pts = set(spec.table_x)
    elif kind == "shifted":
        pts = set(breakpoints(spec.base))
        if spec.epsilon != 0.0:
            pts |= set(breakpoints(spec.delta_v))
    else:
        pts = set()
    return tuple(sorted(pts))


def support(spec: PotentialSpec, threshold: float) -> tuple[float, float] | None:
    """Interval outside which |V - V(+-inf)| < threshold, or None if V is flat.

    Point masses are included in the interval.
    """
    kind = spec.kind
    if kind == "free":
        return None
    if kind == "square_barrier":
        if spec.height == 0.0:
            return None
        return (spec.center - 0.5 * spec.width, spec.center + 0.5 * spec.width)
    if kind == "step":
        if spec.v_minus_inf == spec.v_plus_inf:
            return None
        return (spec.center, spec.center)
    if kind == "delta":
        pts = [x for x, w in spec.points if w != 0.0]
        return (min(pts), max(pts)) if pts else None
    if kind == "gaussian":
        h = abs(spec.height)
        if h < threshold:
            return None
        half = spec.sigma * math.sqrt(2.0 * math.log(h / threshold))
        return (spec.center - half, spec.center + half)
    if kind == "tabulated":
        return (spec.table_x[0], spec.table_x[-1])
    parts = [support(spec.base, 0.5 * threshold)]
    if spec.epsilon != 0.0:
        parts.append(support(spec.delta_v, 0.5 * threshold / abs(spec.epsilon)))
    parts = [p for p in parts if p is not None]
    if not parts:
        return None
    return (min(p[0] for p in parts), max(p[1] for p in parts))


@dataclass(frozen=True)
class WaveNumberProfile:
    """k(x)^2 = E - V(x) for a fixed energy, with the open-channel wave numbers."""

    energy: float
    spec: PotentialSpec
    k_minus_inf: float
    k_plus_inf: float

    def k_squared(self, x):
        """Regular part of E - V(x); point masses enter only through matching."""
        return self.energy - regular_potential(self.spec, x)


def wave_number_profile(spec: PotentialSpec, E: float) -> WaveNumberProfile:
    vmax = max(spec.v_minus_inf, spec.v_plus_inf)
    if not E > vmax:
        raise NoOpenChannelError(
            f"no open scattering channel: E={E} must exceed max asymptote {vmax}")
    return WaveNumberProfile(
        energy=float(E), spec=spec,
        k_minus_inf=math.sqrt(E - spec.v_minus_inf),
        k_plus_inf=math.sqrt(E - spec.v_plus_inf),
    )


@dataclass(frozen=True)
class ScatterResult:
    """Bogoliubov coefficients of the full problem at one energy.

    With the wave function normalised to ``exp(i k_- x) / sqrt(k_-)`` on the
    left, the right-hand asymptotic form is
    ``(alpha exp(i k_+ x) + beta exp(-i k_+ x)) / sqrt(k_+)``.
    """

    alpha: complex
    beta: complex
    T: float
    R: float

    @classmethod
    def from_coefficients(cls, alpha: complex, beta: complex) -> ScatterResult:
        T = 1.0 / abs(alpha) ** 2
        return cls(complex(alpha), complex(beta), T, 1.0 - T)

    @property
    def flux_defect(self) -> float:
        """``|alpha|^2 - |beta|^2 - 1``; zero for exact solutions."""
        return abs(self.alpha) ** 2 - abs(self.beta) ** 2 - 1.0


@dataclass(frozen=True)
class Window:
    """Truncated integration domain and the breakpoints inside it."""

    x_min: float
    x_max: float
    breaks: tuple[float, ...] = field(default=())

    @property
    def edges(self) -> np.ndarray:
        inner = [b for b in self.breaks if self.x_min < b < self.x_max]
        return np.array([self.x_min, *inner, self.x_max])
