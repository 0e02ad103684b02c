import math

import numpy as np
import pytest

from scatterbounds import domain as d
from scatterbounds.perturbation import (
    delta_N_bound,
    delta_N_first_order,
    delta_T_bound,
    delta_T_first_order,
    distorted_born_b,
    exact_shift,
    exact_transmission,
    first_order_b,
    perturbation_estimates,
    shift_integral,
)
from scatterbounds.refsolutions import (
    free_comparison,
    square_barrier_comparison,
    step_comparison,
)

LADDER = (0.02, 0.01, 0.005)


def _ratios(errs):
    return [errs[i] / errs[i + 1] for i in range(len(errs) - 1)]


def test_zero_epsilon_gives_zero():
    comp = square_barrier_comparison(1.0, 1.0, 2.0)
    bump = d.gaussian(1.0, 0.3)
    assert distorted_born_b(comp, bump, 0.0) == 0
    assert delta_T_bound(comp, bump, 0.0) == 0.0
    assert delta_N_bound(comp, bump, 0.0) == 0.0
    est = perturbation_estimates(comp, bump, 0.0)
    assert est.delta_T_est == 0.0 and est.delta_N_est == 0.0 and est.b_abs_bound == 0.0


def test_reflectionless_comparison_has_no_first_order_T_change():
    comp = free_comparison(1.0)
    assert delta_T_first_order(comp, 0.3 - 0.2j) == 0.0
    assert delta_N_first_order(comp, 0.3 - 0.2j) == 0.0
    assert delta_T_bound(comp, d.gaussian(1.0, 0.3), 0.01) == 0.0
    assert delta_N_bound(comp, d.gaussian(1.0, 0.3), 0.01) == 0.0
    sq = square_barrier_comparison(1.0, 1.0, 2.0)
    assert delta_T_first_order(sq, 0j) == 0.0


def test_shift_integral_for_free_comparison():
    # |psi0|^2 = 1/k0, so the integral is int|dV| / k0
    comp = free_comparison(4.0)
    assert shift_integral(comp, d.gaussian(1.0, 0.5)) == pytest.approx(
        0.5 * math.sqrt(2 * math.pi) / 2.0, rel=1e-12)
    assert shift_integral(comp, d.delta(-3.0, 1.0)) == pytest.approx(1.5, rel=1e-14)


def test_born_b_is_third_order_accurate_for_free_comparison():
    comp = free_comparison(1.0)
    bump = d.square_barrier(1.0, 0.1, 0.05)
    errs = []
    for eps in LADDER:
        bt = distorted_born_b(comp, bump, eps)
        ex = exact_shift(comp, bump, eps)
        assert abs(ex.b_inf) <= 0.5 * eps * shift_integral(comp, bump)
        assert abs(bt) <= 0.5 * eps * shift_integral(comp, bump) * (1 + 1e-12)
        errs.append(abs(abs(bt) - abs(ex.b_inf)))
    for r in _ratios(errs):
        assert 6.0 <= r <= 10.0


def test_phase_restored_b_matches_exact_coefficient():
    comp = square_barrier_comparison(1.0, 1.0, 2.0)
    bump = d.gaussian(1.0, 0.3)
    errs = []
    for eps in LADDER:
        b1 = first_order_b(comp, bump, eps)
        errs.append(abs(b1 - exact_shift(comp, bump, eps).b_inf))
    # restoring the phase exp(-i Phi/2) keeps the complex coefficient O(eps^3) accurate
    for r in _ratios(errs):
        assert 6.0 <= r <= 10.0


def test_delta_T_is_first_order_accurate():
    comp = square_barrier_comparison(1.0, 1.0, 2.0)
    bump = d.gaussian(1.0, 0.3)
    errs = []
    for eps in LADDER:
        est = perturbation_estimates(comp, bump, eps)
        dT = exact_transmission(comp, bump, eps) - comp.T0
        assert abs(dT) <= est.delta_T_bound
        assert abs(est.delta_T_est) <= est.delta_T_bound * (1 + 1e-12)
        errs.append(abs(est.delta_T_est - dT))
    for r in _ratios(errs):
        assert 3.5 <= r <= 4.5


def test_delta_T_bound_unit_bump():
    comp = square_barrier_comparison(1.0, 1.0, 2.0)
    bump = d.square_barrier(1.0, 1.0, 0.5)  # unit height on [0, 1]
    eps = 0.01
    x = np.linspace(0.0, 1.0, 20001)
    integral = np.trapezoid(np.abs(comp.psi0(x)) ** 2, x)
    expected = eps * comp.T0 * math.sqrt(1 - comp.T0) * integral
    assert delta_T_bound(comp, bump, eps) == pytest.approx(expected, rel=1e-8)
    dT = exact_transmission(comp, bump, eps) - comp.T0
    assert abs(dT) <= delta_T_bound(comp, bump, eps)


def test_delta_N_bound_step_comparison():
    comp = step_comparison(0.75, 1.0)
    bump = d.gaussian(0.5, 0.4, 0.3)
    eps = 0.01
    x = np.linspace(-6, 6, 48001)
    integral = np.trapezoid(np.abs(d.evaluate_potential(bump, x)) * np.abs(comp.psi0(x)) ** 2, x)
    assert abs(comp.beta0) ** 2 == pytest.approx(1 / 8, rel=1e-13)
    assert delta_N_bound(comp, bump, eps) == pytest.approx(eps * 3 / 8 * integral, rel=1e-8)
    ex = exact_shift(comp, bump, eps)
    assert abs(ex.delta_N) <= delta_N_bound(comp, bump, eps)
    est = perturbation_estimates(comp, bump, eps)
    assert est.delta_N_est == pytest.approx(ex.delta_N, rel=0.05)


def test_delta_N_first_order_matches_direct_expansion():
    comp = square_barrier_comparison(1.0, 1.0, 2.0)
    b = 1e-6 * (0.3 + 0.8j)
    beta = comp.beta0 + np.conj(comp.alpha0) * b
    exact = abs(beta) ** 2 - abs(comp.beta0) ** 2
    assert delta_N_first_order(comp, b) == pytest.approx(exact, rel=1e-5)
    alpha = comp.alpha0 + np.conj(comp.beta0) * b
    assert delta_T_first_order(comp, b) == pytest.approx(1 / abs(alpha) ** 2 - comp.T0, rel=1e-5)


def test_negative_epsilon_and_point_mass_shift():
    comp = square_barrier_comparison(1.0, 1.0, 2.0)
    kick = d.delta(1.0, 0.2)
    est = perturbation_estimates(comp, kick, -0.01)
    ex = exact_shift(comp, kick, -0.01)
    assert abs(ex.b_inf) <= est.b_abs_bound
    assert abs(abs(est.b_tilde_est) - abs(ex.b_inf)) < 1e-5 * abs(ex.b_inf)
