import math

import numpy as np
import pytest
from hypothesis import given, settings as hsettings, strategies as st

from scatterbounds import domain as d
from scatterbounds.errors import StepLimitError, TruncationError
from scatterbounds.refsolutions import (
    comparison_for,
    free_comparison,
    square_barrier_comparison,
    step_comparison,
)
from scatterbounds.solver import (
    AmplitudeState,
    SolverSettings,
    compose_bogoliubov,
    flux,
    reconstruct,
    solve_ab_system,
    solve_direct,
)


def test_free_particle_is_transparent():
    r = solve_direct(d.free(), 1.0)
    assert r.T == pytest.approx(1.0, abs=1e-9) and abs(r.beta) < 1e-9


@pytest.mark.parametrize("V0,L,E", [(1.0, 1.0, 2.0), (2.0, 1.0, 1.0), (-1.0, 2.0, 0.3),
                                    (3.0, 0.5, 1.5), (1.0, 1.0, 5.0)])
def test_square_barrier_closed_form(oracles, V0, L, E):
    assert solve_direct(d.square_barrier(V0, L), E).T == pytest.approx(
        oracles["square"](V0, L, E), rel=1e-9)


def test_square_barrier_reference_values():
    # closed-form values evaluated independently of the package
    assert solve_direct(d.square_barrier(1.0, 1.0), 2.0).T == pytest.approx(
        0.9186877068827065, abs=1e-9)
    assert solve_direct(d.square_barrier(2.0, 1.0), 1.0).T == pytest.approx(
        0.4199743416140261, abs=1e-9)


def test_delta_and_step_closed_forms(oracles):
    assert solve_direct(d.delta(1.0), 1.0).T == pytest.approx(0.8, rel=1e-9)
    assert solve_direct(d.delta(-2.5, 0.4), 0.7).T == pytest.approx(
        oracles["delta"](-2.5, 0.7), rel=1e-9)
    assert solve_direct(d.step(0.75), 1.0).T == pytest.approx(8 / 9, rel=1e-9)


def _double_delta_T(points, E):
    """Plane-wave transfer matrices across each delta; independent of the package."""
    k = math.sqrt(E)
    M = np.eye(2, dtype=complex)
    for x, w in points:
        e = np.exp(1j * k * x)
        # columns: coefficients of e^{ikx}, e^{-ikx}; psi' jumps by w psi
        P = np.array([[e, 1 / e], [1j * k * e, -1j * k / e]])
        J = np.array([[1, 0], [w, 1]], dtype=complex)
        M = np.linalg.solve(P, J @ P) @ M
    return 1.0 / abs(M[0, 0]) ** 2


def test_multiple_point_masses():
    pts = [(-0.4, 0.8), (0.7, 1.3)]
    assert solve_direct(d.delta_points(pts), 1.3).T == pytest.approx(
        _double_delta_T(pts, 1.3), rel=1e-9)


def test_tanh_step_tabulated_between_sharp_step_and_unity():
    x = np.linspace(-8, 8, 161)
    v = 0.375 * (1 + np.tanh(x))
    v[0], v[-1] = 0.0, 0.75
    T = solve_direct(d.tabulated(x, v), 1.1).T
    assert step_comparison(0.75, 1.1).T0 < T < 1.0


@hsettings(max_examples=25, deadline=None)
@given(h=st.floats(-1.5, 3.0), s=st.floats(0.2, 2.0), E=st.floats(0.3, 6.0))
def test_flux_conservation_property(h, s, E):
    spec = d.gaussian(h, s)
    r = solve_direct(spec, E)
    assert r.flux_defect < 1e-7
    _, traj = solve_ab_system(spec, free_comparison(E), E)
    assert traj.flux_deviation() < 1e-7


def test_ab_system_trivial_when_spec_equals_comparison():
    comp = square_barrier_comparison(1.0, 1.0, 2.0)
    final, traj = solve_ab_system(comp.spec, comp, 2.0)
    assert final.a == 1 and final.b == 0
    assert traj.flux_deviation() == 0.0


@pytest.mark.parametrize("spec,comp_spec,E", [
    (d.square_barrier(1.0, 1.0), d.free(), 2.0),
    (d.gaussian(1.0, 1.0), d.square_barrier(0.6, 2.0), 1.1),
    (d.square_barrier(2.0, 1.0), d.square_barrier(1.5, 1.0), 1.0),
    (d.shifted(d.square_barrier(1.0, 1.0), d.gaussian(1.0, 0.3), 0.05), d.square_barrier(1.0, 1.0), 2.0),
    (d.delta_points([(0.0, 1.0), (1.0, -0.5)]), d.delta(1.0), 1.2),
    (d.shifted(d.step(0.5), d.gaussian(0.3, 0.5), 1.0), d.step(0.5), 0.6),
])
def test_two_routes_agree(spec, comp_spec, E):
    comp = comparison_for(comp_spec, E)
    final, traj = solve_ab_system(spec, comp, E)
    assert abs(final.a) ** 2 - abs(final.b) ** 2 == pytest.approx(1.0, abs=1e-8)
    composed = compose_bogoliubov(comp, final)
    direct = solve_direct(spec, E)
    assert composed.T == pytest.approx(direct.T, rel=1e-8)
    assert abs(composed.alpha - direct.alpha) < 1e-7
    assert abs(composed.beta - direct.beta) < 1e-7


def test_reconstructed_wavefunction_solves_schroedinger():
    spec, E = d.gaussian(1.0, 1.0), 2.0
    comp = free_comparison(E)
    _, traj = solve_ab_system(spec, comp, E)
    psi, dpsi = reconstruct(comp, traj)
    assert np.max(np.abs(flux(psi, dpsi) - 1.0)) < 1e-8
    x = traj.x
    h = np.diff(x)
    assert np.allclose(h, h[0], rtol=1e-9)  # single smooth segment, uniform nodes
    h = h[0]
    # fourth-order central difference of psi'
    d2 = (-dpsi[4:] + 8 * dpsi[3:-1] - 8 * dpsi[1:-3] + dpsi[:-4]) / (12 * h)
    k2 = E - d.evaluate_potential(spec, x[2:-2])
    assert np.max(np.abs(d2 + k2 * psi[2:-2])) < 1e-6


def test_compose_trivial_cases():
    comp = square_barrier_comparison(1.0, 1.0, 2.0)
    r = compose_bogoliubov(comp, AmplitudeState(0.0, 1 + 0j, 0j))
    assert r.alpha == comp.alpha0 and r.beta == comp.beta0
    assert r.T == pytest.approx(comp.T0, rel=1e-15)
    free = free_comparison(2.0)
    r = compose_bogoliubov(free, AmplitudeState(0.0, 1.2 + 0.3j, 0.1 - 0.7j))
    assert r.alpha == 1.2 + 0.3j and r.beta == 0.1 - 0.7j


def test_flux_examples():
    x = 0.37
    assert flux(np.exp(1j * x), 1j * np.exp(1j * x)) == pytest.approx(1.0)
    assert flux(0.3 + 0j, -1.2 + 0j) == 0.0
    comp = square_barrier_comparison(1.0, 1.0, 2.0)
    a, b = math.cosh(0.4) * np.exp(0.3j), math.sinh(0.4) * np.exp(-1.1j)
    p, dp = comp.psi0_scalar(0.2), comp.dpsi0(np.array([0.2]))[0]
    assert flux(a * p + b * np.conj(p), a * dp + b * np.conj(dp)) == pytest.approx(1.0, abs=1e-13)


def test_pair_preconditions():
    comp = free_comparison(2.0)
    with pytest.raises(ValueError):
        solve_ab_system(d.square_barrier(1.0, 1.0), comp, 3.0)
    with pytest.raises(ValueError):
        solve_ab_system(d.step(0.5), comp, 2.0)


def test_step_budget_and_truncation_errors():
    with pytest.raises(StepLimitError):
        solve_direct(d.gaussian(1.0, 1.0), 2.0, SolverSettings(max_steps=2))
    with pytest.raises(TruncationError):
        solve_direct(d.gaussian(1.0, 1e5), 2.0)


@pytest.mark.parametrize("kw", [{"rel_tol": 0}, {"abs_tol": -1}, {"max_steps": 0},
                                {"n_nodes": 2}, {"domain_pad": 0}])
def test_settings_validation(kw):
    with pytest.raises(ValueError):
        SolverSettings(**kw)
