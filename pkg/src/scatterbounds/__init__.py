"""Exact transmission and rigorous bounds for 1D scattering problems.

The direct route integrates the Schroedinger equation; the second route
evolves Bogoliubov-like amplitudes (a, b) relative to an exactly solvable
comparison problem, which also yields cheap bounds on |alpha|, |beta| and T.
"""
from .bounds import (
    BoundReport,
    bogoliubov_bounds,
    bounds_from_T0,
    case1_bound,
    theta0_from_T0,
    theta_bound,
    transmission_bounds_algebraic,
)
from .config import ScenarioConfig
from .domain import (
    PotentialSpec,
    ScatterResult,
    delta,
    delta_points,
    evaluate_potential,
    free,
    gaussian,
    shifted,
    square_barrier,
    step,
    tabulated,
    wave_number_profile,
)
from .errors import (
    ConfigError,
    DegenerateCaseError,
    DomainError,
    NoOpenChannelError,
    ScatterError,
)
from .perturbation import distorted_born_b, exact_shift, perturbation_estimates
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

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
