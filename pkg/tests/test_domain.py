import math

import numpy as np
import pytest

from scatterbounds import domain as d
from scatterbounds.errors import DomainError, NoOpenChannelError


def test_square_barrier_inside_and_outside():
    sq = d.square_barrier(1.0, 1.0)
    assert d.evaluate_potential(sq, 0.0) == 1.0
    assert d.evaluate_potential(sq, 10.0) == 0.0


def test_gaussian_definition():
    g = d.gaussian(1.0, 1.0)
    assert d.evaluate_potential(g, 1.0) == pytest.approx(math.exp(-0.5), rel=1e-15)


def test_evaluate_is_vectorised():
    g = d.gaussian(2.0, 0.5, 1.0)
    x = np.linspace(-2, 3, 7)
    np.testing.assert_allclose(d.evaluate_potential(g, x), 2.0 * np.exp(-(x - 1) ** 2 / 0.5))


def test_step_asymptotes():
    s = d.step(0.5, 0.2, 1.0)
    assert d.evaluate_potential(s, -100.0) == 0.2
    assert d.evaluate_potential(s, 100.0) == 0.5


def test_tabulated_interpolates_and_rejects_out_of_range():
    t = d.tabulated([0.0, 1.0, 2.0], [0.0, 1.0, 0.0])
    assert d.evaluate_potential(t, 0.5) == pytest.approx(0.5)
    with pytest.raises(DomainError):
        d.evaluate_potential(t, 2.5)


def test_delta_is_not_a_pointwise_function():
    with pytest.raises(ValueError):
        d.evaluate_potential(d.delta(1.0), 0.0)


def test_shifted_scales_the_perturbation():
    s = d.shifted(d.square_barrier(1.0, 1.0), d.gaussian(1.0, 0.3), 0.1)
    assert d.evaluate_potential(s, 0.0) == pytest.approx(1.1)
    assert d.point_masses(d.shifted(d.free(), d.delta(2.0, 0.5), 0.25)) == ((0.5, 0.5),)


@pytest.mark.parametrize("bad", [
    lambda: d.square_barrier(1.0, 0.0),
    lambda: d.gaussian(1.0, -1.0),
    lambda: d.tabulated([0.0, 0.0], [1.0, 1.0]),
    lambda: d.tabulated([0.0], [1.0]),
])
def test_invalid_specs_rejected(bad):
    with pytest.raises(ValueError):
        bad()


def test_wave_number_profiles():
    p = d.wave_number_profile(d.free(), 2.0)
    assert p.k_minus_inf == p.k_plus_inf == pytest.approx(math.sqrt(2))
    assert p.k_squared(3.7) == 2.0
    sq = d.wave_number_profile(d.square_barrier(1.0, 1.0), 2.0)
    assert sq.k_squared(0.0) == 1.0 and sq.k_squared(5.0) == 2.0
    st = d.wave_number_profile(d.step(0.5), 1.0)
    assert st.k_minus_inf == 1.0
    assert st.k_plus_inf == pytest.approx(math.sqrt(0.5))


@pytest.mark.parametrize("spec,E", [(d.free(), 0.0), (d.step(0.5), 0.5), (d.step(0.5), 0.2)])
def test_closed_channel(spec, E):
    with pytest.raises(NoOpenChannelError):
        d.wave_number_profile(spec, E)


def test_support_of_gaussian_reaches_threshold():
    g = d.gaussian(1.0, 1.0, 2.0)
    lo, hi = d.support(g, 1e-12)
    assert d.evaluate_potential(g, hi) == pytest.approx(1e-12, rel=1e-6)
    assert lo == pytest.approx(4.0 - hi)


def test_scatter_result_from_coefficients():
    r = d.ScatterResult.from_coefficients(math.sqrt(2.0) + 0j, 1j)
    assert r.T == pytest.approx(0.5) and r.R == pytest.approx(0.5)
    assert r.flux_defect == pytest.approx(0.0, abs=1e-15)
