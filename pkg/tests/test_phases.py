import math

import numpy as np
import pytest

from scatterbounds import domain as d
from scatterbounds.errors import InsufficientDataError, PhaseResolutionError
from scatterbounds.phases import (
    nett_phase_residual,
    phase_trajectory,
    theta_mismatch,
    theta_running_integral,
)
from scatterbounds.refsolutions import free_comparison, square_barrier_comparison
from scatterbounds.solver import SolverSettings, Trajectory, solve_ab_system


def _phases(spec, comp, settings=None):
    _, traj = solve_ab_system(spec, comp, comp.energy, settings)
    return traj, phase_trajectory(traj, comp)


def test_trivial_trajectory_has_zero_theta():
    comp = square_barrier_comparison(1.0, 1.0, 2.0)
    _, ph = _phases(comp.spec, comp)
    assert np.all(ph.theta == 0.0)
    with pytest.raises(InsufficientDataError):
        nett_phase_residual(ph, comp, comp.spec)


@pytest.mark.parametrize("spec", [d.square_barrier(1.0, 1.0), d.gaussian(1.0, 1.0)])
def test_theta_definition_at_end(spec):
    traj, ph = _phases(spec, free_comparison(2.0))
    assert abs(math.cosh(ph.theta[-1]) - abs(traj.a[-1])) < 1e-10


def test_theta_running_integral_square_barrier():
    comp = free_comparison(2.0)
    _, ph = _phases(d.square_barrier(1.0, 1.0), comp)
    assert theta_mismatch(ph, comp, d.square_barrier(1.0, 1.0)) < 1e-6
    run = theta_running_integral(ph, comp, d.square_barrier(1.0, 1.0))
    assert run[0] == 0.0


@pytest.mark.parametrize("spec", [d.square_barrier(1.0, 1.0), d.gaussian(1.0, 1.0)])
def test_nett_phase_residual_small(spec):
    comp = free_comparison(2.0)
    _, ph = _phases(spec, comp)
    assert nett_phase_residual(ph, comp, spec) < 1e-3


def test_csch_factor_does_not_satisfy_the_equation():
    """With 1/sinh(2 Theta) in place of coth(2 Theta) the residual stays O(0.1)."""
    spec = d.square_barrier(1.0, 1.0)
    comp = free_comparison(2.0)
    _, ph = _phases(spec, comp)
    assert nett_phase_residual(ph, comp, spec, cos_factor="csch") > 0.05
    with pytest.raises(ValueError):
        nett_phase_residual(ph, comp, spec, cos_factor="sech")


def test_point_mass_jump_carried_over():
    spec = d.shifted(d.square_barrier(1.0, 1.0), d.delta(0.4, 0.2), 1.0)
    comp = square_barrier_comparison(1.0, 1.0, 2.0)
    _, ph = _phases(spec, comp)
    assert theta_mismatch(ph, comp, spec) < 1e-9


def test_coarse_trajectory_rejected():
    comp = free_comparison(25.0)
    _, traj = solve_ab_system(d.square_barrier(1.0, 4.0), comp, 25.0)
    keep = np.r_[0:traj.x.size:400, traj.x.size - 1]
    coarse = Trajectory(traj.x[keep], traj.a[keep], traj.b[keep], traj.segment[keep],
                        traj.edges, traj.steps)
    with pytest.raises(PhaseResolutionError):
        phase_trajectory(coarse, comp)
