"""Invariant suites run by ``hermbound verify``.

Each suite returns a list of :class:`Check` rows; a suite passes when
every row does.  ``depth="quick"`` trims the grids so the whole run
stays well under a minute; ``"full"`` covers the complete matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import bandlimit, bound, hermite, sansone, series
from .functions import GaussianMixture, hermite_function, standard_normal, trimodal
from .quadrature import integrate_line

__all__ = ["Check", "SUITES", "run_suites"]


@dataclass(frozen=True)
class Check:
    suite: str
    label: str
    value: float
    limit: float
    ok: bool
    note: str = ""


def _le(suite, label, value, limit, note=""):
    return Check(suite, label, float(value), float(limit), bool(value <= limit), note)


def orthonormality(depth):
    top = 40 if depth == "full" else 20

    def integrand(t):
        h = hermite.eval_all(top, t)
        return (h[:, None, :] * h[None, :, :]).reshape(-1, t.size)

    gram = integrate_line(integrand, math.sqrt(2 * top + 1) + 10, frequency=math.sqrt(4 * top + 2))
    dev = np.abs(np.asarray(gram.value).reshape(top + 1, top + 1) - np.eye(top + 1)).max()
    return [_le("orthonormality", f"max |<h_j,h_k> - delta_jk|, j,k <= {top}", dev, 1e-9)]


def fourier_eigen(depth):
    rows = []
    omega = np.linspace(-6, 6, 25)
    for k in range(9):
        h = hermite_function(k)
        numeric = bandlimit.fourier_transform(h, omega)
        dev = np.abs(numeric - (-1j) ** k * h(omega)).max()
        rows.append(_le("fourier-eigen", f"k={k}", dev, 1e-8))
    return rows


def cd_kernel(depth):
    rng = np.random.default_rng(1)
    rows = []
    for n in range(11):
        x, a = rng.uniform(-5, 5, (2, 100))
        direct = hermite.diagonal_sum(2 * n, x, a)
        closed = math.sqrt((2 * n + 1) / 2) * hermite.cd_kernel(n, x, a)
        rows.append(_le("cd-kernel", f"n={n}", np.abs(closed - direct).max(), 1e-10))
    return rows


def _lemma2_cases(depth):
    tri, phi = trimodal(), standard_normal()
    two = GaussianMixture(((1, 2, -0.5), (0.5, 4, 1)))
    cases = [(hermite_function(0), 8.0, 8.0), (tri.as_test_function(), 3.0, bandlimit.band_edge(500)),
             (phi.as_test_function(), 0.5, 1.0), (phi.as_test_function(), 1.0, 2.0),
             (phi.as_test_function(), 3.0, 3.0), (tri.as_test_function(), 1.0, 5.0),
             (tri.as_test_function(), 2.0, 10.0), (two.as_test_function(), 2.0, 4.0),
             (two.as_test_function(), 0.5, 2.0), (hermite_function(3), 2.0, 3.0),
             (hermite_function(6), 4.0, 6.0)]
    return cases if depth == "full" else cases[:10]


def lemma2(depth):
    rows = []
    for f, T, N in _lemma2_cases(depth):
        lhs, rhs = bandlimit.lemma2_residual(f, bandlimit.BandLimitParams(N, T), sansone.NESTED_SPEC)
        rows.append(_le("lemma2", f"{f.name} T={T:g} N={N:.6g}", lhs, rhs + 1e-8))
    return rows


def remainders(depth):
    rows = []
    y = np.linspace(0, 3, 200)
    for n in (2, 5, 10, 50):
        p = sansone.SansoneParams(n, 3.0)
        r = sansone.remainders(p, y)
        even, odd = sansone.remainder_majorants(p, y)
        # rounding floor at y = 0 where both sides vanish
        rows.append(_le("remainders", f"n={n} even", np.max(np.abs(r.t_even) - even), 1e-12))
        rows.append(_le("remainders", f"n={n} odd", np.max(np.abs(r.t_odd) - odd), 1e-12))
    return rows


def decomposition(depth):
    rows = []
    for n in (5, 10, 25):
        rep = sansone.decomposition_check(n)
        rows.append(Check("decomposition", f"n={n} printed form", rep.printed_fraction, 0.95,
                          rep.printed_fraction >= 0.95))
        if rep.adopted != sansone.PRINTED:
            frac = rep.fractions[rep.adopted]
            rows.append(Check("decomposition", f"n={n} diagnostic {'/'.join(rep.adopted)}",
                              frac, 0.95, frac >= 0.95, rep.discrepancy))
    return rows


def dominance(depth, force=False):
    ns = (2, 5, 10, 25) if depth == "full" else (2, 5)
    Ts = (2.0, 3.0) if depth == "full" else (2.0,)
    rows = []
    for name, m in (("phi", standard_normal()), ("trimodal", trimodal())):
        f = m.as_test_function()
        for n in ns:
            for T in Ts:
                direct = sansone.direct_sansone(f, sansone.SansoneParams(n, T), force=force).sum()
                upper = bound.theorem1_bound(m, 2 * n, T).sansone_sum
                rows.append(_le("dominance", f"{name} n={n} T={T:g}", direct, upper))
    return rows


def validity(depth):
    Ks = (4, 20, 100, 500) if depth == "full" else (4, 20)
    Ts = (2.0, 3.0, 4.0) if depth == "full" else (2.0, 3.0)
    rows = []
    family = (("phi", standard_normal()), ("trimodal", trimodal()),
              ("two-bump", GaussianMixture(((1, 2, -0.5), (0.5, 4, 1)))))
    for name, m in family:
        f = m.as_test_function()
        for K in Ks:
            approx = series.coefficients(f, K)
            for T in Ts:
                rms = series.measure_error(f, approx, T).rms
                b = bound.theorem1_bound(m, K, T)
                note = "" if rms <= b.total + 1e-8 else "suspect summands: " + "; ".join(
                    f"{fid}: {expr}" for fid, expr, _, _ in b.suspects)
                rows.append(_le("validity", f"{name} K={K} T={T:g}", rms, b.total + 1e-8, note))
    return rows


SUITES = {
    "orthonormality": orthonormality,
    "fourier-eigen": fourier_eigen,
    "cd-kernel": cd_kernel,
    "lemma2": lemma2,
    "remainders": remainders,
    "decomposition": decomposition,
    "dominance": dominance,
    "validity": validity,
}


def run_suites(names=None, depth="quick", *, force=False):
    """Run the named suites (all by default); returns ``{name: [Check]}``.

    ``force`` lifts the order limit on nested quadrature in the dominance suite.
    """
    if depth not in ("quick", "full"):
        raise ValueError("depth must be 'quick' or 'full'")
    names = list(SUITES) if not names else list(names)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise ValueError(f"unknown suite(s) {unknown}; choose from {sorted(SUITES)}")
    return {name: SUITES[name](depth, force) if name == "dominance" else SUITES[name](depth)
            for name in names}
