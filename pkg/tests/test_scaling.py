import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fractal_coherence.generators import path, ring, star, torus2d, tree_like, vicsek
from fractal_coherence.graph import GraphError
from fractal_coherence.scaling import (
    ball_growth,
    compare_power_vs_log,
    default_center,
    estimate_fractal_dimension,
    estimate_spectral_dimension,
    fit_exponent,
    fit_log_linear,
    fractal_dimension_sensitivity,
    graph_diameter,
    leave_one_out_spread,
    predicted_exponents_from_df,
    predicted_exponents_from_ds,
    spectral_dimension_fit,
)
from fractal_coherence.spectral import spectrum


@given(
    st.floats(-3, 3, allow_nan=False),
    st.floats(-5, 5, allow_nan=False),
    st.lists(st.integers(2, 10**6), min_size=3, max_size=8, unique=True),
)
def test_exact_power_law_recovered(alpha, logc, ns):
    pts = [(n, math.exp(logc) * n**alpha) for n in ns]
    fit = fit_exponent(pts)
    assert fit.exponent == pytest.approx(alpha, abs=1e-8)
    assert fit.predict(ns[0]) == pytest.approx(pts[0][1], rel=1e-7)
    assert fit.r_squared == pytest.approx(1.0, abs=1e-9) or abs(alpha) < 1e-9


def test_fit_rejects_bad_points():
    with pytest.raises(ValueError, match="at least 3"):
        fit_exponent([(1, 1), (2, 2)])
    with pytest.raises(ValueError, match="positive"):
        fit_exponent([(1, 1), (2, 0), (3, 3)])


def test_leave_one_out_spread():
    exact = [(n, 2.0 * n**1.5) for n in (10, 20, 40, 80)]
    assert leave_one_out_spread(exact) == pytest.approx(0.0, abs=1e-10)
    noisy = [(10, 1.0), (20, 2.2), (40, 3.9), (80, 8.4)]
    assert leave_one_out_spread(noisy) > 0
    with pytest.raises(ValueError):
        leave_one_out_spread(exact[:3])


def test_log_vs_power_comparison():
    logish = [(n, 0.3 * math.log(n) + 0.1) for n in (64, 256, 1024, 4096)]
    assert compare_power_vs_log(logish).prefers_logarithmic
    powerish = [(n, n**1.2) for n in (64, 256, 1024, 4096)]
    assert not compare_power_vs_log(powerish).prefers_logarithmic
    lf = fit_log_linear(logish)
    assert lf.slope == pytest.approx(0.3)


def test_ball_growth_on_path():
    prof = ball_growth(path(41), center=20)
    np.testing.assert_array_equal(prof.sizes[:4], [1, 3, 5, 7])
    assert prof.diameter == 40
    assert prof.num_nodes == 41
    # |B(r)| = 2r + 1, so the finite window sits a little below slope 1
    assert estimate_fractal_dimension(prof) == pytest.approx(1.0, abs=0.1)


def test_diameter():
    assert graph_diameter(ring(10)) == 5
    assert graph_diameter(vicsek(4, 3)) == 26
    assert graph_diameter(torus2d(6)) == 6
    assert default_center(star(4)) == 0


def test_insufficient_scaling_range():
    with pytest.raises(GraphError, match="insufficient scaling range"):
        estimate_fractal_dimension(ball_growth(star(5)))


def test_fractal_dimension_of_vicsek():
    d = estimate_fractal_dimension(ball_growth(vicsek(4, 4)))
    assert d == pytest.approx(math.log(5) / math.log(3), rel=0.15)


def test_fractal_dimension_sensitivity():
    est = fractal_dimension_sensitivity(tree_like(2, 5), centers=3, seed=1)
    assert len(est) == 3
    assert all(1.2 < d < 2.6 for d in est)


def test_spectral_dimension_of_ring():
    fit = spectral_dimension_fit(spectrum(ring(1024)))
    assert fit.d_s == pytest.approx(1.0, rel=0.10)
    assert fit.x_low < fit.x_high
    assert estimate_spectral_dimension(spectrum(ring(1024))) == fit.d_s


def test_spectral_dimension_degenerate_window():
    with pytest.raises(GraphError, match="degenerate"):
        spectral_dimension_fit(spectrum(star(6)))


def test_predicted_exponents():
    assert predicted_exponents_from_df(2.0) == (0.5, 2.0)
    assert predicted_exponents_from_ds(1.0) == (1.0, 3.0)
    d_f = math.log(3) / math.log(2)
    d_s = 2 * d_f / (d_f + 1)
    # both routes to the exponents coincide when d_s = 2 d_f / (d_f + 1)
    np.testing.assert_allclose(predicted_exponents_from_df(d_f), predicted_exponents_from_ds(d_s))
