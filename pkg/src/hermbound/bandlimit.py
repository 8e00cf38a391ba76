"""Band limiting: the windowed Dirichlet operator and ``f_N``.

``F_N g(x) = (1/pi) int_{-T}^{T} sin(N(x-s))/(x-s) g(s) ds`` is the sinc
convolution restricted to the window; ``f_N`` is the same convolution
over the whole line, i.e. the inverse transform of ``fhat`` cut off at
``|omega| < N``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .quadrature import DEFAULT_SPEC, integrate, integrate_line, integrate_tail

__all__ = [
    "OddTruncationError",
    "BandLimitParams",
    "band_edge",
    "sinc_kernel",
    "dirichlet_op",
    "f_N_eval",
    "fourier_transform",
    "lemma2_residual",
]

SQRT_2PI = math.sqrt(2 * math.pi)
SINGULAR_RADIUS = 1e-8


class OddTruncationError(ValueError):
    """The bound is only stated for even truncation orders ``K = 2n``."""


@dataclass(frozen=True)
class BandLimitParams:
    N: float
    T: float

    def __post_init__(self):
        if not self.N > 0:
            raise ValueError("N must be positive")
        if not self.T > 0:
            raise ValueError("T must be positive")

    @classmethod
    def for_order(cls, K, T):
        return cls(band_edge(K), T)


def band_edge(K):
    """``N = (sqrt(2K+1) + sqrt(2K+3)) / 2`` for even ``K``."""
    if K < 0 or K % 2:
        raise OddTruncationError(f"K must be even and non-negative, got {K}")
    return 0.5 * (math.sqrt(2 * K + 1) + math.sqrt(2 * K + 3))


def sinc_kernel(N, u):
    """``sin(N u) / u`` with a Taylor patch for ``|u| < 1e-8``."""
    u = np.asarray(u, dtype=float)
    near = np.abs(u) < SINGULAR_RADIUS
    safe = np.where(near, 1.0, u)
    nu2 = (N * u) ** 2
    taylor = N * (1.0 - nu2 / 6.0 + nu2 * nu2 / 120.0)
    return np.where(near, taylor, np.sin(N * u) / safe)


def dirichlet_op(f, p, x, spec=DEFAULT_SPEC):
    """``(F_N f_T)(x)`` for scalar or array ``x``."""
    x = np.asarray(x, dtype=float)
    xs = np.atleast_1d(x)

    def integrand(s):
        return sinc_kernel(p.N, xs[:, None] - s[None, :]) * f(s)[None, :] / math.pi

    value = integrate(integrand, -p.T, p.T, spec, frequency=p.N,
                      breakpoints=f.breakpoints).value
    return value.reshape(x.shape) if x.ndim else float(value[0])


def fourier_transform(f, omega, spec=DEFAULT_SPEC):
    """``fhat(omega)`` by quadrature (complex, scalar or array ``omega``)."""
    omega = np.asarray(omega, dtype=float)
    om = np.atleast_1d(omega)

    def integrand(t):
        ft = f(t)[None, :]
        phase = om[:, None] * t[None, :]
        return np.concatenate([np.cos(phase) * ft, -np.sin(phase) * ft])

    freq = float(np.max(np.abs(om))) if om.size else None
    res = integrate_line(integrand, f.core_radius, spec, frequency=freq,
                         breakpoints=f.breakpoints).value
    out = (res[:om.size] + 1j * res[om.size:]) / SQRT_2PI
    return out.reshape(omega.shape) if omega.ndim else complex(out[0])


def f_N_eval(f, N, t, spec=DEFAULT_SPEC, *, method="auto"):
    """Band-limited companion ``f_N(t)``.

    ``method`` is ``"analytic"`` (closed form supplied by ``f``),
    ``"fourier"`` (quadrature of ``fhat`` over ``(-N, N)``) or
    ``"convolution"`` (full-line sinc convolution); ``"auto"`` picks the
    first one available in that order.
    """
    if not N > 0:
        raise ValueError("N must be positive")
    if method == "auto":
        if f.band_limited is not None:
            method = "analytic"
        elif f.fourier is not None:
            method = "fourier"
        else:
            method = "convolution"
    t = np.asarray(t, dtype=float)
    ts = np.atleast_1d(t)

    if method == "analytic":
        out = np.asarray(f.band_limited(N, ts), dtype=float)
    elif method == "fourier":
        def integrand(w):
            spectrum = f.fourier(w)[None, :] * np.exp(1j * ts[:, None] * w[None, :])
            return np.concatenate([spectrum.real, spectrum.imag])

        tmax = float(np.max(np.abs(ts))) if ts.size else 0.0
        res = integrate(integrand, -N, N, spec, frequency=tmax or None).value / SQRT_2PI
        real, imag = res[:ts.size], res[ts.size:]
        scale = max(1.0, float(np.max(np.abs(real))))
        if np.max(np.abs(imag)) > 1e-9 * scale:
            raise ValueError("f_N has a non-negligible imaginary part; is f real?")
        out = real
    elif method == "convolution":
        def integrand(s):
            return sinc_kernel(N, ts[:, None] - s[None, :]) * f(s)[None, :] / math.pi

        out = integrate_line(integrand, f.core_radius, spec, frequency=N,
                             breakpoints=f.breakpoints).value
    else:
        raise ValueError(f"unknown method {method!r}")
    return out.reshape(t.shape) if t.ndim else float(out[0])


def l2_tail(f, T, spec=DEFAULT_SPEC):
    """``int_{|t|>T} f**2``."""
    if f.l2_tail is not None:
        return float(f.l2_tail(T))
    return float(integrate_tail(lambda t: f(t) ** 2, T, spec).value)


def fourier_l2_tail(f, N, spec=DEFAULT_SPEC):
    """``int_{|omega|>N} |fhat|**2``; falls back to a numerical transform."""
    if f.fourier_l2_tail is not None:
        return float(f.fourier_l2_tail(N))
    transform = f.fourier if f.fourier is not None else (
        lambda w: fourier_transform(f, w, spec))
    return float(integrate_tail(lambda w: np.abs(transform(w)) ** 2, N, spec).value)


def lemma2_residual(f, p, spec=DEFAULT_SPEC):
    """Both sides of the windowed Dirichlet approximation inequality.

    ``lhs = ||f - F_N f_T||`` on ``[-T, T]``;
    ``rhs = ||f||_{|t|>T} + ||fhat||_{|omega|>N}``.
    """

    def sq_residual(x):
        return (f(x) - dirichlet_op(f, p, x, spec)) ** 2

    lhs_sq = integrate(sq_residual, -p.T, p.T, spec, frequency=p.N,
                       breakpoints=f.breakpoints).value
    rhs = math.sqrt(l2_tail(f, p.T, spec)) + math.sqrt(fourier_l2_tail(f, p.N, spec))
    return math.sqrt(max(lhs_sq, 0.0)), rhs
