import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate as sci
from scipy.special import erfc

from hermbound.bandlimit import fourier_transform
from hermbound.functions import (
    PRESETS,
    GaussianMixture,
    black_box,
    hermite_function,
    mixture_fourier,
    mixture_tails,
    standard_normal,
    trimodal,
    windowed,
)
from hermbound.quadrature import integrate_line

from conftest import TWO_BUMP, phi

SQRT_2PI = math.sqrt(2 * math.pi)


def quad(g, a, b, points=None):
    return sci.quad(g, a, b, points=points, limit=500, epsabs=1e-14, epsrel=1e-12)[0]


def test_trimodal_components():
    assert trimodal().components == ((0.5, 1.0, 0.0), (3.0, 10.0, 0.8), (2.0, 10.0, 1.2))


def test_trimodal_integrates_to_one():
    f = trimodal()
    # 0.5 + 3/10 + 2/10
    assert integrate_line(f, f.core_radius, breakpoints=f.breakpoints).value == pytest.approx(1.0, rel=1e-12)


def test_trimodal_point_value():
    expected = 0.5 * phi(0.8) + 3 * phi(0.0) + 2 * phi(-4.0)
    assert trimodal()(0.8) == pytest.approx(float(expected), rel=1e-15)


def test_trimodal_mass_outside_window():
    f = trimodal()
    tail = quad(f, 3, np.inf) + quad(f, -np.inf, -3)
    # only the broad component reaches past 3; its tail is 0.5 erfc(3/sqrt2)
    assert tail == pytest.approx(0.5 * erfc(3 / math.sqrt(2)), rel=1e-8)
    assert tail < 0.0014


def test_fourier_at_zero():
    assert mixture_fourier(trimodal(), 0.0) == pytest.approx(1 / SQRT_2PI, rel=1e-15)


def test_fourier_single_component():
    w = np.linspace(-5, 5, 11)
    np.testing.assert_allclose(standard_normal().fourier(w), np.exp(-w * w / 2) / SQRT_2PI, rtol=1e-15)


def test_fourier_shift_is_a_phase():
    m = GaussianMixture(((1.0, 2.0, 1.5),))
    w = np.linspace(-6, 6, 13)
    np.testing.assert_allclose(m.fourier(w), np.exp(-1.5j * w) * GaussianMixture(((1.0, 2.0, 0.0),)).fourier(w),
                               rtol=1e-14, atol=1e-17)


@pytest.mark.parametrize("mixture", [trimodal(), standard_normal(), TWO_BUMP])
def test_fourier_matches_quadrature(mixture):
    w = np.linspace(-40, 40, 41)
    numeric = fourier_transform(mixture.as_test_function(), w)
    assert np.abs(numeric - mixture.fourier(w)).max() < 1e-8


def test_tails_of_unit_normal_square():
    m = GaussianMixture(((1.0, 1.0, 0.0),))
    # |phi|^2 integrates to 1/(2 sqrt pi)
    assert m.l2_tail(0.0) == pytest.approx(1 / (2 * math.sqrt(math.pi)), rel=1e-14)
    assert m.fourier_l2_tail(0.0) == pytest.approx(1 / (2 * math.sqrt(math.pi)), rel=1e-14)


def test_trimodal_tail_terms():
    time_tail, freq_tail = mixture_tails(trimodal(), 3.0, 31.6543796)
    # only the broad component reaches past 3
    assert time_tail == pytest.approx(0.25 * erfc(3.0) / (2 * math.sqrt(math.pi)), rel=1e-13)
    assert 1.002 * math.sqrt(freq_tail / 6) < 0.00088


def test_trimodal_time_tail_term_below_reference_value():
    time_tail, _ = mixture_tails(trimodal(), 3.0, 31.6543796)
    assert 1.002 * math.sqrt(time_tail / 6) < 0.00051


@pytest.mark.parametrize("mixture", [trimodal(), TWO_BUMP, GaussianMixture(((2, 0.7, -1), (-1, 3, 2)))])
@pytest.mark.parametrize("T", [0.5, 1.0, 3.0])
def test_time_tail_matches_quadrature(mixture, T):
    g = lambda t: mixture(t) ** 2  # noqa: E731
    expected = quad(g, T, np.inf) + quad(g, -np.inf, -T)
    assert mixture.l2_tail(T) == pytest.approx(expected, rel=1e-9, abs=1e-16)


@pytest.mark.parametrize("mixture", [trimodal(), TWO_BUMP])
@pytest.mark.parametrize("N", [0.5, 3.0, 10.0])
def test_frequency_tail_matches_quadrature(mixture, N):
    g = lambda w: abs(mixture.fourier(w)) ** 2  # noqa: E731
    expected = quad(g, N, np.inf) + quad(g, -np.inf, -N)
    assert mixture.fourier_l2_tail(N) == pytest.approx(expected, rel=1e-9, abs=1e-16)


@pytest.mark.parametrize("mixture", [trimodal(), TWO_BUMP])
def test_derivative_matches_central_differences(mixture, rng):
    t = rng.uniform(-4, 4, 100)
    step = 1e-6
    fd = (mixture(t + step) - mixture(t - step)) / (2 * step)
    np.testing.assert_allclose(mixture.derivative(t), fd, atol=1e-6)


@pytest.mark.parametrize("j", range(8))
@pytest.mark.parametrize("T", [1.0, 3.0])
def test_abs_moment_matches_quadrature(j, T):
    f = trimodal()
    expected = quad(lambda t: abs(f(t) * t ** j), -T, T, points=[0.0, 0.8, 1.2])
    assert f.abs_moment(j, T) == pytest.approx(expected, rel=1e-9)


def test_abs_moment_of_normal():
    # int_{-3}^{3} |t| phi = 2 (phi(0) - phi(3))
    value = standard_normal().abs_moment(1, 3.0)
    assert value == pytest.approx(2 * float(phi(0.0) - phi(3.0)), rel=1e-14)
    assert round(value, 6) == 0.789021


def test_abs_moment_needs_nonnegative_weights():
    with pytest.raises(ValueError):
        GaussianMixture(((1.0, 1.0, 0.0), (-0.2, 3.0, 1.0))).abs_moment(0, 1.0)


@pytest.mark.parametrize("mixture", [trimodal(), TWO_BUMP])
@pytest.mark.parametrize("j", [0, 3, 7])
def test_l2_moment_matches_quadrature(mixture, j):
    expected = math.sqrt(quad(lambda t: (mixture(t) * t ** j) ** 2, -3, 3, points=[0.0, 0.8, 1.2, 2.0, -0.5]))
    assert mixture.l2_moment(j, 3.0) == pytest.approx(expected, rel=1e-9)


def _mixtures():
    comp = st.tuples(st.floats(-3, 3), st.floats(0.3, 5), st.floats(-3, 3))
    return st.lists(comp, min_size=1, max_size=4).map(lambda c: GaussianMixture(tuple(c)))


@settings(max_examples=30, deadline=None)
@given(_mixtures())
def test_parseval(mixture):
    time = mixture.l2_tail(0.0)
    freq = mixture.fourier_l2_tail(0.0)
    assert freq == pytest.approx(time, rel=1e-9, abs=1e-14)


@settings(max_examples=30, deadline=None)
@given(_mixtures(), st.floats(0.1, 20))
def test_band_limited_closed_form_matches_spectrum(mixture, N):
    t = np.linspace(-3, 3, 7)
    g = lambda w, s: (mixture.fourier(w) * np.exp(1j * s * w)).real  # noqa: E731
    expected = [quad(lambda w: g(w, s), -N, N) / SQRT_2PI for s in t]
    scale = sum(abs(w) * a for w, a, _ in mixture.components) + 1e-3
    np.testing.assert_allclose(mixture.band_limited(N, t), expected, atol=1e-9 * scale)


def test_json_round_trip():
    m = GaussianMixture.from_json("[[1, 2, -0.5], [0.5, 4, 1]]")
    assert m == TWO_BUMP
    assert GaussianMixture.from_json(m.to_json()) == m


@pytest.mark.parametrize("text", ["{}", "[[1, 2]]", "[1, 2, 3]", "[[1, 0, 0]]", "[[1, -2, 0]]"])
def test_bad_mixture_rejected(text):
    with pytest.raises(ValueError):
        GaussianMixture.from_json(text)


def test_scaled():
    t = np.linspace(-2, 2, 5)
    np.testing.assert_allclose(trimodal().scaled(2.5)(t), 2.5 * trimodal()(t), rtol=1e-15)


def test_presets():
    assert set(PRESETS) == {"trimodal", "normal"}
    assert PRESETS["normal"]() == standard_normal()


def test_hermite_function_is_a_fourier_eigenfunction():
    h = hermite_function(3)
    w = np.linspace(-5, 5, 21)
    assert np.abs(fourier_transform(h, w) - h.fourier(w)).max() < 1e-10


def test_black_box_has_no_shortcuts():
    f = black_box(np.cos, core_radius=3.0)
    assert f.fourier is None and f.band_limited is None and f.derivative is None
    assert f(0.0) == 1.0


def test_windowed_cuts_outside():
    f = windowed(trimodal().as_test_function(), 1.0)
    assert f(1.5) == 0.0
    assert f(0.5) == pytest.approx(float(trimodal()(0.5)))
    assert f.breakpoints == (-1.0, 0.0, 0.8, 1.0)
