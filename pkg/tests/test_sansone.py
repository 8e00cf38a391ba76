import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hermbound import bound, hermite
from hermbound.bandlimit import band_edge
from hermbound.functions import GaussianMixture, standard_normal, trimodal
from hermbound.sansone import (
    CONVENTIONS,
    MAX_DIRECT_N,
    PRINTED,
    BadIndexError,
    ExpensiveComputationError,
    SansoneParams,
    decomposition_check,
    decomposition_ratio,
    direct_sansone,
    m_term,
    m_terms,
    remainder_majorants,
    remainders,
)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 10**6))
def test_frequency_identity(n):
    p = SansoneParams(n, 1.0)
    assert abs(p.p - p.q - 1 / p.N) <= 1e-12
    assert abs((p.p + p.q) / 2 - p.N) <= 1e-12 * p.N
    if n <= 2000:
        assert p.N == pytest.approx(band_edge(2 * n), rel=1e-15)


def test_params_fields():
    p = SansoneParams(5, 2.0)
    h0, dh0 = hermite.values_at_zero(5)
    assert p.K == 10
    assert p.a_n == pytest.approx(1 / (dh0 * math.sqrt(23)), rel=1e-15)
    assert p.b_n == pytest.approx(1 / (h0 * 21), rel=1e-15)
    assert p.b_n < 0  # h_10(0) < 0


@pytest.mark.parametrize("n,T", [(0, 1.0), (3, 0.0)])
def test_params_validation(n, T):
    with pytest.raises(ValueError):
        SansoneParams(n, T)


@pytest.mark.parametrize("n", [1, 5, 50])
def test_remainders_vanish_at_zero(n):
    r = remainders(SansoneParams(n, 3.0), 0.0)
    assert r.y == 0.0
    assert abs(r.t_even) < 1e-12 and abs(r.t_odd) < 1e-12


def test_remainder_definitions_reconstruct_hermite_functions():
    p = SansoneParams(4, 3.0)
    y = np.linspace(-2, 2, 41)
    r = remainders(p, y)
    h = hermite.eval_all(9, y)
    y3 = y ** 3 / 6
    even = p.h_even0 * (np.cos(p.q * y) + y3 * np.sin(p.q * y) / p.q) + r.t_even / p.q ** 2
    odd = p.dh_odd0 * (np.sin(p.p * y) / p.p - y3 * np.cos(p.p * y) / p.p ** 2) + r.t_odd / p.p ** 2
    np.testing.assert_allclose(even, h[8], atol=1e-13)
    np.testing.assert_allclose(odd, h[9], atol=1e-13)


def test_odd_remainder_at_one_obeys_majorant():
    p = SansoneParams(5, 3.0)
    r = remainders(p, 1.0)
    limit = 1 / (math.sqrt(math.pi) * 5 ** 0.25) * (1 / 18 + 1) + 4 / 187 / math.sqrt(21)
    assert abs(r.t_odd) < limit
    assert remainder_majorants(p, 1.0)[1] == pytest.approx(limit, rel=1e-14)


def test_even_remainder_at_two_obeys_majorant():
    p = SansoneParams(5, 3.0)
    assert abs(remainders(p, 2.0).t_even) < remainder_majorants(p, 2.0)[0]


@pytest.mark.parametrize("n", [2, 5, 10, 50])
def test_remainder_majorants(n):
    p = SansoneParams(n, 3.0)
    y = np.linspace(0, 3, 200)
    r = remainders(p, y)
    even, odd = remainder_majorants(p, y)
    assert np.max(np.abs(r.t_even) - even) <= 1e-12
    assert np.max(np.abs(r.t_odd) - odd) <= 1e-12


def test_m1_vanishes_on_diagonal():
    p = SansoneParams(7, 3.0)
    x = np.linspace(-3, 3, 31)
    assert np.abs(m_term(p, 1, x, x)).max() < 1e-15


@pytest.mark.parametrize("convention", CONVENTIONS)
def test_every_term_vanishes_on_diagonal(convention):
    p = SansoneParams(6, 3.0)
    x = np.linspace(-3, 3, 31)
    assert np.abs(m_terms(p, x, x, convention)).max() < 1e-12


def test_m1_matches_written_form(rng):
    p = SansoneParams(9, 3.0)
    x, a = rng.uniform(-3, 3, (2, 50))
    N = p.N
    expected = (np.cos(N * (x + a)) * np.sin((x - a) / (2 * N))
                - 2 * np.sin((x + a) / (4 * N)) ** 2 * np.sin(N * (x - a)))
    np.testing.assert_allclose(m_term(p, 1, x, a), expected, atol=1e-14)


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_terms_are_antisymmetric(k, rng):
    p = SansoneParams(10, 3.0)
    x, a = rng.uniform(-3, 3, (2, 100))
    np.testing.assert_allclose(m_term(p, k, x, a), -m_term(p, k, a, x), atol=1e-13)


@pytest.mark.parametrize("k", [0, 6, -1])
def test_bad_index(k):
    with pytest.raises(BadIndexError):
        m_term(SansoneParams(2, 1.0), k, 0.1, 0.2)


def test_scalar_term_is_float():
    assert isinstance(m_term(SansoneParams(2, 1.0), 3, 0.1, 0.2), float)


def test_kernel_forms_differ_by_sign():
    p = SansoneParams(5, 3.0)
    x, a = np.array([0.4, -1.1]), np.array([1.3, 0.2])
    r1, d1 = decomposition_ratio(p, x, a, kernel_form="alpha-x")
    r2, d2 = decomposition_ratio(p, x, a, kernel_form="x-alpha")
    np.testing.assert_array_equal(d1, d2)
    np.testing.assert_allclose(r1, -r2, rtol=1e-15)


def test_unknown_kernel_form():
    with pytest.raises(ValueError):
        decomposition_ratio(SansoneParams(5, 3.0), 0.1, 0.2, kernel_form="other")


@pytest.mark.parametrize("n", [5, 10, 25])
def test_decomposition_diagnostic_finds_a_consistent_sign(n):
    # The printed combination is scored first; when it misses, the best of the
    # four sign combinations is named instead of silently substituted.
    rep = decomposition_check(n)
    assert rep.pairs > 300
    assert rep.band == pytest.approx(1 / (4 * n) + 5e-3)
    assert set(rep.fractions) >= {PRINTED}
    if rep.adopted != PRINTED:
        assert rep.discrepancy is not None and "printed form fits" in rep.discrepancy
    assert rep.passed
    assert rep.fractions[rep.adopted] >= 0.95


def test_decomposition_check_is_seeded():
    assert decomposition_check(5, seed=3) == decomposition_check(5, seed=3)


def _brute_force(f, p, nodes=1500, convention="printed"):
    """Tensor Gauss-Legendre grid; inner and outer node counts differ so no pair coincides."""
    T = p.T
    xo, wo = np.polynomial.legendre.leggauss(nodes)
    xi, wi = np.polynomial.legendre.leggauss(nodes + 1)
    xo, wo, xi, wi = T * xo, T * wo, T * xi, T * wi
    out = np.zeros(5)
    fa = f(xi) * wi
    for start in range(0, nodes, 100):
        xs = xo[start:start + 100]
        M = m_terms(p, xs[:, None], xi[None, :], convention)
        inner = np.sum(M / (xs[:, None] - xi[None, :]) * fa[None, None, :], axis=2)
        out += np.sum(inner ** 2 * wo[start:start + 100], axis=1)
    return np.sqrt(out / (2 * T))


@pytest.mark.parametrize("n,T", [(2, 2.0), (5, 3.0)])
def test_direct_matches_tensor_grid(n, T):
    f = standard_normal().as_test_function()
    p = SansoneParams(n, T)
    np.testing.assert_allclose(direct_sansone(f, p), _brute_force(f, p), rtol=1e-7, atol=1e-12)


def test_direct_of_zero_function():
    f = GaussianMixture(((0.0, 1.0, 0.0),)).as_test_function()
    np.testing.assert_array_equal(direct_sansone(f, SansoneParams(2, 1.0)), np.zeros(5))


def test_direct_is_homogeneous():
    m = trimodal()
    p = SansoneParams(3, 2.0)
    base = direct_sansone(m.as_test_function(), p)
    double = direct_sansone(m.scaled(2.0).as_test_function(), p)
    np.testing.assert_allclose(double, 2 * base, rtol=1e-9)


def test_direct_dominated_by_ledger_for_normal():
    p = SansoneParams(5, 2.0)
    m = standard_normal()
    direct = direct_sansone(m.as_test_function(), p)
    assert np.all(direct >= 0)
    assert direct.sum() <= bound.theorem1_bound(m, 10, 2.0).sansone_sum


def test_direct_refuses_large_orders():
    f = standard_normal().as_test_function()
    with pytest.raises(ExpensiveComputationError):
        direct_sansone(f, SansoneParams(MAX_DIRECT_N + 1, 2.0))


def test_direct_large_order_when_forced():
    f = standard_normal().as_test_function()
    values = direct_sansone(f, SansoneParams(MAX_DIRECT_N + 1, 1.0), force=True)
    assert values.shape == (5,) and np.all(np.isfinite(values))
