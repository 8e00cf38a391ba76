"""Fourier-Hermite coefficients, partial sums and measured errors."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import hermite
from .quadrature import DEFAULT_SPEC, integrate, integrate_line

__all__ = ["SeriesApprox", "ErrorReport", "coefficients", "partial_sum", "measure_error"]


@dataclass(frozen=True)
class SeriesApprox:
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=float)
        if coeffs.ndim != 1 or coeffs.size == 0:
            raise ValueError("coeffs must be a non-empty 1-d sequence")
        if not np.all(np.isfinite(coeffs)):
            raise ValueError("coefficients must be finite")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def K(self):
        return self.coeffs.size - 1

    def __call__(self, t):
        return partial_sum(self, t)


@dataclass(frozen=True)
class ErrorReport:
    rms: float
    sup: float
    grid_points: int
    T: float


def coefficients(f, K, spec=DEFAULT_SPEC):
    """``c_k = int_R f h_k`` for ``k = 0..K``, all in one vector integral."""
    if K < 0:
        raise ValueError("K must be non-negative")

    def integrand(t):
        return hermite.eval_all(K, t) * f(t)

    result = integrate_line(integrand, f.core_radius, spec,
                            frequency=math.sqrt(2 * K + 3),
                            breakpoints=f.breakpoints)
    return SeriesApprox(np.atleast_1d(result.value))


def partial_sum(s, t):
    """``(S_K f)(t) = sum_k c_k h_k(t)``."""
    values = np.tensordot(s.coeffs, hermite.eval_all(s.K, t), axes=1)
    return values if np.ndim(values) else float(values)


def measure_error(f, s, T, grid_points=4001, spec=DEFAULT_SPEC):
    """RMS of ``f - S_K f`` on ``[-T, T]`` and its max over a uniform grid.

    The grid maximum is a lower bound for the true supremum.
    """
    if not T > 0:
        raise ValueError("T must be positive")
    if grid_points < 2:
        raise ValueError("grid_points must be at least 2")

    def sq_err(t):
        return (f(t) - partial_sum(s, t)) ** 2

    mean_sq = integrate(sq_err, -T, T, spec, frequency=math.sqrt(2 * s.K + 3),
                        breakpoints=f.breakpoints).value / (2 * T)
    grid = np.linspace(-T, T, grid_points)
    sup = float(np.max(np.abs(f(grid) - partial_sum(s, grid))))
    return ErrorReport(math.sqrt(max(mean_sq, 0.0)), sup, grid_points, T)
