"""Scenario configuration: YAML ingestion, validation and serialisation.

Example::

    potential:
      kind: square_barrier
      height: 1.0
      width: 1.0
    comparison:
      kind: free
    energies: {min: 1.5, max: 3.0, count: 4}
    solver: {rel_tol: 1.0e-10, abs_tol: 1.0e-12}
    quad_tol: 1.0e-12
    output: {path: sweep.csv, format: csv}

Unknown keys are errors, reported with their dotted path.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from . import domain
from .domain import PotentialSpec
from .errors import ConfigError
from .solver import SolverSettings

TOP_KEYS = {"potential", "comparison", "energies", "solver", "quad_tol", "epsilons", "output"}
COMPARISON_KINDS = ("free", "step", "square_barrier", "delta")
FORMATS = ("csv", "json")

_POTENTIAL_KEYS = {
    "free": set(),
    "step": {"v_minus", "v_plus", "center"},
    "square_barrier": {"height", "width", "center"},
    "delta": {"strength", "center", "points"},
    "gaussian": {"height", "sigma", "center"},
    "tabulated": {"x", "v"},
    "shifted": {"base", "delta_v", "epsilon"},
}
_REQUIRED = {
    "step": {"v_plus"},
    "square_barrier": {"height", "width"},
    "gaussian": {"height", "sigma"},
    "tabulated": {"x", "v"},
    "shifted": {"base", "delta_v", "epsilon"},
}


@dataclass(frozen=True)
class EnergyRange:
    min: float
    max: float
    count: int

    def values(self) -> tuple[float, ...]:
        if self.count == 1:
            return (self.min,)
        return tuple(float(e) for e in np.linspace(self.min, self.max, self.count))


@dataclass(frozen=True)
class ScenarioConfig:
    potential: PotentialSpec
    comparison: PotentialSpec = field(default_factory=domain.free)
    energies: EnergyRange | tuple[float, ...] = ()
    solver: SolverSettings = field(default_factory=SolverSettings)
    quad_tol: float = 1e-12
    epsilons: tuple[float, ...] | None = None
    output_path: str | None = None
    output_format: str = "csv"

    def energy_values(self) -> tuple[float, ...]:
        if isinstance(self.energies, EnergyRange):
            return self.energies.values()
        return tuple(sorted(self.energies))


def _num(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}: expected a number, got {value!r}")
    return float(value)


def _mapping(value, path: str) -> dict:
    if not isinstance(value, dict):
        raise ConfigError(f"{path}: expected a mapping, got {type(value).__name__}")
    return value


def _check_keys(d: dict, allowed: set, path: str):
    unknown = set(d) - allowed
    if unknown:
        raise ConfigError(f"{path}: unknown key(s) {sorted(unknown)}; allowed {sorted(allowed)}")


def parse_potential(d, path: str = "potential") -> PotentialSpec:
    d = _mapping(d, path)
    kind = d.get("kind")
    if kind not in _POTENTIAL_KEYS:
        raise ConfigError(f"{path}.kind: expected one of {sorted(_POTENTIAL_KEYS)}, got {kind!r}")
    body = {k: v for k, v in d.items() if k != "kind"}
    _check_keys(body, _POTENTIAL_KEYS[kind], path)
    missing = _REQUIRED.get(kind, set()) - set(body)
    if missing:
        raise ConfigError(f"{path}: missing key(s) {sorted(missing)} for kind {kind!r}")
    g = lambda k, default=0.0: _num(body.get(k, default), f"{path}.{k}")  # noqa: E731
    try:
        if kind == "free":
            return domain.free()
        if kind == "step":
            return domain.step(g("v_plus"), g("v_minus"), g("center"))
        if kind == "square_barrier":
            return domain.square_barrier(g("height"), g("width"), g("center"))
        if kind == "gaussian":
            return domain.gaussian(g("height"), g("sigma"), g("center"))
        if kind == "delta":
            if "points" in body:
                if "strength" in body or "center" in body:
                    raise ConfigError(f"{path}: give either points or strength/center")
                pts = body["points"]
                if not isinstance(pts, list) or not all(
                        isinstance(p, list) and len(p) == 2 for p in pts):
                    raise ConfigError(f"{path}.points: expected a list of [x, weight] pairs")
                return domain.delta_points(
                    [(_num(x, f"{path}.points"), _num(w, f"{path}.points")) for x, w in pts])
            if "strength" not in body:
                raise ConfigError(f"{path}: delta needs strength or points")
            return domain.delta(g("strength"), g("center"))
        if kind == "tabulated":
            xs, vs = body["x"], body["v"]
            if not isinstance(xs, list) or not isinstance(vs, list):
                raise ConfigError(f"{path}: x and v must be lists")
            return domain.tabulated([_num(t, f"{path}.x") for t in xs],
                                    [_num(t, f"{path}.v") for t in vs])
        return domain.shifted(parse_potential(body["base"], f"{path}.base"),
                              parse_potential(body["delta_v"], f"{path}.delta_v"),
                              g("epsilon"))
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def dump_potential(spec: PotentialSpec) -> dict:
    kind = spec.kind
    if kind == "free":
        return {"kind": "free"}
    if kind == "step":
        return {"kind": "step", "v_minus": spec.v_minus_inf, "v_plus": spec.v_plus_inf,
                "center": spec.center}
    if kind == "square_barrier":
        return {"kind": kind, "height": spec.height, "width": spec.width, "center": spec.center}
    if kind == "gaussian":
        return {"kind": kind, "height": spec.height, "sigma": spec.sigma, "center": spec.center}
    if kind == "delta":
        return {"kind": kind, "points": [[x, w] for x, w in spec.points]}
    if kind == "tabulated":
        return {"kind": kind, "x": list(spec.table_x), "v": list(spec.table_v)}
    return {"kind": kind, "base": dump_potential(spec.base),
            "delta_v": dump_potential(spec.delta_v), "epsilon": spec.epsilon}


def _parse_energies(value, vmax: float):
    if value is None:
        raise ConfigError("energies: missing")
    if isinstance(value, dict):
        _check_keys(value, {"min", "max", "count"}, "energies")
        missing = {"min", "max", "count"} - set(value)
        if missing:
            raise ConfigError(f"energies: missing key(s) {sorted(missing)}")
        count = value["count"]
        if isinstance(count, bool) or not isinstance(count, int) or count < 1:
            raise ConfigError(f"energies.count: expected an integer >= 1, got {count!r}")
        rng = EnergyRange(_num(value["min"], "energies.min"),
                          _num(value["max"], "energies.max"), count)
        if rng.max < rng.min:
            raise ConfigError("energies: max must not be below min")
        vals = rng.values()
        out = rng
    elif isinstance(value, list):
        if not value:
            raise ConfigError("energies: empty energy list")
        vals = tuple(_num(e, f"energies[{i}]") for i, e in enumerate(value))
        out = vals
    else:
        raise ConfigError("energies: expected {min, max, count} or a list")
    bad = [e for e in vals if not e > vmax]
    if bad:
        raise ConfigError(f"energies: {bad} do not exceed the largest asymptote {vmax}")
    return out


def _parse_solver(value) -> SolverSettings:
    if value is None:
        return SolverSettings()
    value = _mapping(value, "solver")
    names = {f.name for f in dataclasses.fields(SolverSettings)}
    _check_keys(value, names, "solver")
    kw = {}
    for k, v in value.items():
        if k in ("max_steps", "n_nodes"):
            if isinstance(v, bool) or not isinstance(v, int):
                raise ConfigError(f"solver.{k}: expected an integer, got {v!r}")
            kw[k] = v
        else:
            kw[k] = _num(v, f"solver.{k}")
    try:
        return SolverSettings(**kw)
    except ValueError as exc:
        raise ConfigError(f"solver: {exc}") from exc


def config_from_dict(d) -> ScenarioConfig:
    d = _mapping(d, "config")
    _check_keys(d, TOP_KEYS, "config")
    if "potential" not in d:
        raise ConfigError("potential: missing")
    potential = parse_potential(d["potential"])
    comparison = parse_potential(d.get("comparison", {"kind": "free"}), "comparison")
    if comparison.kind not in COMPARISON_KINDS:
        raise ConfigError(f"comparison.kind: expected one of {COMPARISON_KINDS}, "
                          f"got {comparison.kind!r}")
    if (comparison.v_minus_inf, comparison.v_plus_inf) != (potential.v_minus_inf,
                                                           potential.v_plus_inf):
        raise ConfigError("comparison: asymptotic values must match the potential's "
                          f"({potential.v_minus_inf}, {potential.v_plus_inf})")
    vmax = max(potential.v_minus_inf, potential.v_plus_inf)
    energies = _parse_energies(d.get("energies"), vmax)
    quad_tol = _num(d.get("quad_tol", 1e-12), "quad_tol")
    if not quad_tol > 0:
        raise ConfigError("quad_tol: must be positive")
    epsilons = d.get("epsilons")
    if epsilons is not None:
        if not isinstance(epsilons, list) or not epsilons:
            raise ConfigError("epsilons: expected a non-empty list")
        epsilons = tuple(_num(e, f"epsilons[{i}]") for i, e in enumerate(epsilons))
    out = _mapping(d.get("output", {}), "output")
    _check_keys(out, {"path", "format"}, "output")
    fmt = out.get("format", "csv")
    if fmt not in FORMATS:
        raise ConfigError(f"output.format: expected one of {FORMATS}, got {fmt!r}")
    path = out.get("path")
    if path is not None and not isinstance(path, str):
        raise ConfigError("output.path: expected a string")
    return ScenarioConfig(potential=potential, comparison=comparison, energies=energies,
                          solver=_parse_solver(d.get("solver")), quad_tol=quad_tol,
                          epsilons=epsilons, output_path=path, output_format=fmt)


def config_to_dict(cfg: ScenarioConfig) -> dict:
    energies = (dataclasses.asdict(cfg.energies) if isinstance(cfg.energies, EnergyRange)
                else list(cfg.energies))
    d = {
        "potential": dump_potential(cfg.potential),
        "comparison": dump_potential(cfg.comparison),
        "energies": energies,
        "solver": dataclasses.asdict(cfg.solver),
        "quad_tol": cfg.quad_tol,
    }
    if cfg.epsilons is not None:
        d["epsilons"] = list(cfg.epsilons)
    out = {"format": cfg.output_format}
    if cfg.output_path is not None:
        out["path"] = cfg.output_path
    d["output"] = out
    return d


def loads(text: str) -> ScenarioConfig:
    try:
        data = yaml.safe_load(text)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark
        where = f"line {mark.line + 1}, column {mark.column + 1}" if mark else "unknown position"
        raise ConfigError(f"YAML syntax error at {where}: {exc.problem}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"YAML error: {exc}") from exc
    return config_from_dict(data)


def dumps(cfg: ScenarioConfig) -> str:
    return yaml.safe_dump(config_to_dict(cfg), sort_keys=False)


def load(path) -> ScenarioConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return loads(text)
