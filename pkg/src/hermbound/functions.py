"""Analytic test functions: Gaussian mixtures and black-box wrappers.

A mixture is ``f(t) = sum_i w_i * phi(a_i * (t - c_i))`` with ``phi`` the
standard normal density.  Products and Fourier transforms of Gaussians
stay Gaussian, so tails, moments and the band-limited companion all have
closed forms (via ``erfc`` and the Faddeeva function).

Fourier convention: ``fhat(w) = (2*pi)**-0.5 * int f(t) exp(-i w t) dt``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.special import erfc, wofz

from . import hermite

__all__ = [
    "TestFunction",
    "GaussianMixture",
    "phi",
    "trimodal",
    "standard_normal",
    "mixture_fourier",
    "mixture_tails",
    "hermite_function",
    "black_box",
    "windowed",
    "PRESETS",
]

SQRT_2PI = math.sqrt(2 * math.pi)


def phi(t):
    """Standard normal density."""
    t = np.asarray(t, dtype=float)
    return np.exp(-0.5 * t * t) / SQRT_2PI


@dataclass(frozen=True)
class TestFunction:
    """A real function of one variable plus whatever is known about it.

    Optional fields are analytic shortcuts; anything missing is computed
    by quadrature.  ``band_limited(N, t)`` returns ``f_N(t)``.
    ``core_radius`` bounds the region holding essentially all of ``f``;
    ``breakpoints`` are places where the integrand changes character.
    """

    __test__ = False  # keep pytest from collecting this class

    value: Callable
    derivative: Optional[Callable] = None
    fourier: Optional[Callable] = None
    l2_tail: Optional[Callable] = None
    fourier_l2_tail: Optional[Callable] = None
    band_limited: Optional[Callable] = None
    core_radius: float = 12.0
    breakpoints: tuple = ()
    name: str = "f"

    def __call__(self, t):
        return self.value(t)


def _std_gauss_moments(jmax, lo, hi):
    """``int_lo^hi s**i exp(-s**2/2) ds`` for ``i = 0..jmax``.

    Upward recursion ``M_{i+1} = i M_{i-1} + lo**i g(lo) - hi**i g(hi)``;
    intervals on the negative half-line are reflected first so every
    boundary term is added, not cancelled.
    """
    flip = hi <= 0
    if flip:
        lo, hi = -hi, -lo
    if lo >= 0:
        m0 = math.sqrt(math.pi / 2) * (erfc(lo / math.sqrt(2)) - erfc(hi / math.sqrt(2)))
    else:
        m0 = math.sqrt(math.pi / 2) * (2.0 - erfc(-lo / math.sqrt(2)) - erfc(hi / math.sqrt(2)))
    g_lo = math.exp(-0.5 * lo * lo)
    g_hi = math.exp(-0.5 * hi * hi)
    out = [m0]
    if jmax >= 1:
        out.append(g_lo - g_hi)
    for i in range(1, jmax):
        out.append(i * out[i - 1] + lo ** i * g_lo - hi ** i * g_hi)
    if flip:
        out = [(-1) ** i * m for i, m in enumerate(out)]
    return out


def _gauss_power_integral(j, scale, center, lo, hi):
    """``int_lo^hi t**j exp(-scale**2 (t-center)**2 / 2) dt``."""
    m = _std_gauss_moments(j, scale * (lo - center), scale * (hi - center))
    total = 0.0
    for i in range(j + 1):
        total += math.comb(j, i) * center ** (j - i) * scale ** (-i) * m[i]
    return total / scale


@dataclass(frozen=True)
class GaussianMixture:
    """Weighted sum of scaled, shifted normal densities.

    ``components`` holds ``(w, a, c)`` triples meaning ``w*phi(a*(t-c))``.
    """

    components: tuple = field(default_factory=tuple)

    def __post_init__(self):
        comps = tuple((float(w), float(a), float(c)) for w, a, c in self.components)
        for _, a, _ in comps:
            if not a > 0:
                raise ValueError(f"mixture scale must be positive, got {a}")
        object.__setattr__(self, "components", comps)

    @classmethod
    def from_json(cls, text):
        """Parse ``[[w, a, c], ...]``."""
        data = json.loads(text)
        if not isinstance(data, list) or not all(
                isinstance(row, list) and len(row) == 3 for row in data):
            raise ValueError("mixture must be a JSON array of [w, a, c] triples")
        return cls(tuple(tuple(row) for row in data))

    def to_json(self):
        return json.dumps([list(c) for c in self.components])

    def scaled(self, lam):
        return GaussianMixture(tuple((lam * w, a, c) for w, a, c in self.components))

    @property
    def nonnegative(self):
        return all(w >= 0 for w, _, _ in self.components)

    @property
    def core_radius(self):
        if not self.components:
            return 1.0
        reach = max(abs(c) for _, _, c in self.components)
        return reach + 12.0 / min(a for _, a, _ in self.components)

    @property
    def breakpoints(self):
        return tuple(sorted({c for _, _, c in self.components}))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape)
        for w, a, c in self.components:
            out = out + w * phi(a * (t - c))
        return out

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape)
        for w, a, c in self.components:
            u = a * (t - c)
            out = out - w * a * u * phi(u)
        return out

    def fourier(self, omega):
        omega = np.asarray(omega, dtype=float)
        out = np.zeros(omega.shape, dtype=complex)
        for w, a, c in self.components:
            out = out + (w / a) / SQRT_2PI * np.exp(-1j * omega * c - omega ** 2 / (2 * a * a))
        return out

    def band_limited(self, N, t):
        """``f_N(t)``: inverse transform of ``fhat`` cut off at ``|omega| < N``."""
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape)
        for w, a, c in self.components:
            s = t - c
            z = (a * a * s + 1j * N) / (math.sqrt(2) * a)
            leak = math.exp(-N * N / (2 * a * a)) * np.real(np.exp(1j * N * s) * wofz(z))
            out = out + w * (phi(a * s) - leak / SQRT_2PI)
        return out

    def _pairs(self):
        for wi, ai, ci in self.components:
            for wk, ak, ck in self.components:
                yield wi, ai, ci, wk, ak, ck

    def _square_terms(self):
        """``f**2`` as ``sum coef * exp(-A**2 (t-C)**2 / 2)``."""
        for wi, ai, ci, wk, ak, ck in self._pairs():
            A2 = ai * ai + ak * ak
            C = (ai * ai * ci + ak * ak * ck) / A2
            kappa = ai * ai * ak * ak * (ci - ck) ** 2 / (2 * A2)
            yield wi * wk * math.exp(-kappa) / (2 * math.pi), math.sqrt(A2), C

    def l2_tail(self, T):
        """``int_{|t|>T} f(t)**2 dt``."""
        total = 0.0
        for coef, A, C in self._square_terms():
            total += coef * math.sqrt(math.pi / 2) / A * (
                erfc(A * (T - C) / math.sqrt(2)) + erfc(A * (T + C) / math.sqrt(2)))
        return total

    def fourier_l2_tail(self, N):
        """``int_{|omega|>N} |fhat(omega)|**2 d omega``."""
        total = 0.0
        for wi, ai, ci, wk, ak, ck in self._pairs():
            beta = 1 / (2 * ai * ai) + 1 / (2 * ak * ak)
            d = ci - ck
            rb = math.sqrt(beta)
            half_ray = 0.5 * math.sqrt(math.pi / beta) * math.exp(-beta * N * N) * (
                np.exp(1j * N * d) * wofz(d / (2 * rb) + 1j * rb * N))
            total += (wi * wk / (ai * ak)) / (2 * math.pi) * 2 * half_ray.real
        return total

    def l2_norm_sq(self):
        return self.l2_tail(0.0)

    def abs_moment(self, j, T):
        """``int_{-T}^{T} |f(t) t**j| dt``; closed form needs ``w >= 0``."""
        if not self.nonnegative:
            raise ValueError("closed-form absolute moments need non-negative weights")
        total = 0.0
        for w, a, c in self.components:
            # |t|**j splits at 0; the negative half reflects onto center -c.
            right = _gauss_power_integral(j, a, c, 0.0, T)
            left = _gauss_power_integral(j, a, -c, 0.0, T)
            total += w * (right + left) / SQRT_2PI
        return total

    def l2_moment(self, j, T):
        """``[int_{-T}^{T} (f(t) t**j)**2 dt]**0.5``."""
        total = 0.0
        for coef, A, C in self._square_terms():
            total += coef * _gauss_power_integral(2 * j, A, C, -T, T)
        return math.sqrt(max(total, 0.0))

    def as_test_function(self, name="mixture"):
        return TestFunction(
            value=self.__call__,
            derivative=self.derivative,
            fourier=self.fourier,
            l2_tail=self.l2_tail,
            fourier_l2_tail=self.fourier_l2_tail,
            band_limited=self.band_limited,
            core_radius=self.core_radius,
            breakpoints=self.breakpoints,
            name=name,
        )


def trimodal():
    """``0.5 phi(t) + 3 phi(10(t-0.8)) + 2 phi(10(t-1.2))``."""
    return GaussianMixture(((0.5, 1.0, 0.0), (3.0, 10.0, 0.8), (2.0, 10.0, 1.2)))


def standard_normal():
    return GaussianMixture(((1.0, 1.0, 0.0),))


PRESETS = {"trimodal": trimodal, "normal": standard_normal}


def mixture_fourier(m, omega):
    return m.fourier(omega)


def mixture_tails(m, T, N):
    """``(int_{|t|>T} f**2, int_{|omega|>N} |fhat|**2)`` in closed form."""
    return m.l2_tail(T), m.fourier_l2_tail(N)


def hermite_function(k):
    """``h_k`` as a test function; its transform is ``(-i)**k h_k``."""

    def value(t):
        return hermite.eval_all(k, t)[k]

    def derivative(t):
        return hermite.eval_derivatives(k, t)[k]

    def fourier(omega):
        return (-1j) ** k * hermite.eval_all(k, omega)[k]

    return TestFunction(value=value, derivative=derivative, fourier=fourier,
                        core_radius=math.sqrt(2 * k + 1) + 10.0, name=f"h_{k}")


def black_box(func, *, derivative=None, core_radius=12.0, breakpoints=(), name="f"):
    """Wrap a plain callable; every functional then goes through quadrature."""
    return TestFunction(value=func, derivative=derivative, core_radius=core_radius,
                        breakpoints=tuple(breakpoints), name=name)


def windowed(f, T):
    """``f * chi_[-T, T]`` (no analytic shortcuts survive the cut)."""

    def value(t):
        t = np.asarray(t, dtype=float)
        return np.where(np.abs(t) <= T, f(t), 0.0)

    inner = tuple(p for p in f.breakpoints if -T < p < T)
    return TestFunction(value=value, core_radius=T, breakpoints=(-T,) + inner + (T,),
                        name=f"{f.name}_T")
