from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import exact_tree_sums
from fractal_coherence.generators import vicsek
from fractal_coherence.spectral import spectrum
from fractal_coherence.vicsek_recursion import (
    S_closed,
    SpectrumInvariantError,
    cubic_children,
    degenerate_inverse_sum_closed,
    delta,
    gamma_deg,
    gamma_nd,
    nondegenerate_inverse_sum_closed,
    reconstruct_spectrum,
    theta_deg,
    theta_deg_closed,
    theta_nd,
    theta_nd_closed,
    vicsek_coherence_exponents,
    vicsek_S,
    vicsek_S2,
    vicsek_sums,
)


@pytest.mark.parametrize(
    "g, S, S2",
    [(1, Fraction(16, 5), Fraction(76, 25)), (2, Fraction(296, 5), Fraction(16096, 25))],
)
def test_hand_anchored_v4(g, S, S2):
    assert vicsek_S(4, g) == S
    assert vicsek_S2(4, g) == S2
    assert float(vicsek_S(4, 2)) == 59.2
    assert float(vicsek_S2(4, 2)) == pytest.approx(643.84, rel=1e-15)


def test_small_values():
    assert theta_nd(4, 1) == Fraction(29, 5)
    assert theta_deg(4, 1) == 209
    assert theta_deg(4, 2) == 46785
    assert [delta(4, k) for k in (1, 2, 3)] == [3, 11, 51]
    assert gamma_nd(4, 2) == 45 and gamma_deg(4, 2) == 225


@pytest.mark.parametrize("v", [2, 3, 4, 5])
@pytest.mark.parametrize("g", [1, 2, 3])
def test_sums_match_exact_distance_oracle(v, g):
    S, S2 = exact_tree_sums(vicsek(v, g))
    assert vicsek_S(v, g) == S
    assert vicsek_S2(v, g) == S2


@given(st.integers(2, 8), st.integers(0, 10))
def test_theta_closed_forms_solve_the_recursions(v, i):
    assert theta_nd(v, i) == theta_nd_closed(v, i)
    assert theta_deg(v, i) == theta_deg_closed(v, i)


@given(st.integers(2, 8), st.integers(1, 10))
def test_reciprocal_sum_closed_forms(v, g):
    sums = vicsek_sums(v, g)
    nd = sum(sums.gamma_nd)
    assert nd == nondegenerate_inverse_sum_closed(v, g)
    assert sums.S_g - nd == degenerate_inverse_sum_closed(v, g)
    assert sums.S_g == S_closed(v, g)


@given(st.integers(2, 6), st.integers(1, 10))
def test_theta_growth_ratio_tends_to_positive_constant(v, i):
    a = 3 * (v + 1)
    r = theta_nd(v, i) / Fraction(a) ** (2 * i)
    assert r > 0
    limit = Fraction(1, (v + 1) ** 2) - Fraction(2 * (v + 4), a * (v + 1) * (3 * v + 2))
    assert abs(float(r / limit) - 1) <= float(Fraction(1, a) ** i) * 2


@given(st.integers(2, 6), st.floats(1e-4, 1.0))
def test_child_sum_identities(v, frac):
    # Laplacian eigenvalues of these trees lie in (0, v + 1]
    lam = frac * (v + 1)
    kids = cubic_children(lam, v)
    a = 3 * (v + 1)
    assert np.sum(1 / kids) == pytest.approx(a / lam, rel=1e-10)
    assert np.sum(1 / kids**2) == pytest.approx(a * a / lam**2 - 2 * (v + 4) / lam, rel=1e-10)
    assert np.all(kids > 0)


def test_child_of_zero_includes_zero():
    np.testing.assert_allclose(cubic_children(0.0, 4), [0.0, 3.0, 5.0], atol=1e-12)
    with pytest.raises(ValueError):
        cubic_children(-1.0, 4)


@pytest.mark.parametrize("v", [2, 3, 4, 5])
@pytest.mark.parametrize("g", [1, 2, 3])
def test_reconstruction_matches_dense_spectrum(v, g):
    rec = reconstruct_spectrum(v, g)
    sp = spectrum(vicsek(v, g))
    assert rec.size == (v + 1) ** g
    np.testing.assert_allclose(rec.sorted_values(), sp.eigenvalues, atol=1e-6)
    assert rec.multiplicity_of(1.0) == delta(v, g)
    S, S2 = rec.inverse_sums()
    assert S == pytest.approx(float(vicsek_S(v, g)), rel=1e-10)
    assert S2 == pytest.approx(float(vicsek_S2(v, g)), rel=1e-10)


def test_generation2_contains_generation1_spectrum():
    # at g = 2 every eigenvalue of the star survives; later generations drop some
    g1 = Counter(np.round(reconstruct_spectrum(4, 1).sorted_values(), 9))
    g2 = Counter(np.round(reconstruct_spectrum(4, 2).sorted_values(), 9))
    assert all(g2[k] >= c for k, c in g1.items())


def test_eigenvalue_one_multiplicity_dense():
    for v, g in [(3, 3), (4, 3), (5, 2)]:
        ev = spectrum(vicsek(v, g)).eigenvalues
        assert int(np.sum(np.abs(ev - 1) < 1e-8)) == delta(v, g)


def test_argument_validation():
    with pytest.raises(ValueError):
        delta(1, 2)
    with pytest.raises(ValueError):
        vicsek_sums(4, 0)
    with pytest.raises(ValueError):
        reconstruct_spectrum(1, 2)
    with pytest.raises(ValueError):
        theta_nd(4, -1)


def test_exception_type_is_runtime_error():
    assert issubclass(SpectrumInvariantError, RuntimeError)


def test_coherence_exponents():
    fo, so = vicsek_coherence_exponents(2)
    assert fo == pytest.approx(1.0)
    assert so == pytest.approx(3.0)
