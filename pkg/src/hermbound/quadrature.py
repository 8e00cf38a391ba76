"""Adaptive Gauss-Legendre integration on finite intervals and tails.

Integrands are vectorised: ``f(t)`` receives a 1-d array of nodes and
returns an array whose last axis matches it.  Leading axes are carried
through, so one call can integrate a whole family of functions (all
Hermite coefficients, all outer nodes of a nested integral, ...).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "QuadratureSpec",
    "IntegrationResult",
    "NonConvergenceWarning",
    "NonFiniteError",
    "DEFAULT_SPEC",
    "integrate",
    "integrate_tail",
    "integrate_line",
    "min_panels",
]

# Values (output width x nodes) produced per integrand call.
_CHUNK_VALUES = 1 << 21


class NonConvergenceWarning(RuntimeWarning):
    """Tolerance not reached within ``max_subdivisions``."""


class NonFiniteError(FloatingPointError):
    """The integrand returned inf or nan at a quadrature node."""


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-13
    panel_order: int = 32
    max_subdivisions: int = 2**16

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")
        if self.panel_order < 2:
            raise ValueError("panel_order must be at least 2")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be at least 1")

    def tightened(self, factor):
        """Copy with both tolerances divided by ``factor``."""
        return QuadratureSpec(self.rel_tol / factor, self.abs_tol / factor,
                              self.panel_order, self.max_subdivisions)


DEFAULT_SPEC = QuadratureSpec()


@dataclass(frozen=True)
class IntegrationResult:
    value: float | np.ndarray
    error_estimate: float
    subdivisions_used: int
    converged: bool = True

    def __add__(self, other):
        return IntegrationResult(
            self.value + other.value,
            self.error_estimate + other.error_estimate,
            self.subdivisions_used + other.subdivisions_used,
            self.converged and other.converged,
        )


@lru_cache(maxsize=None)
def _gauss_legendre(order):
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def min_panels(frequency, length, per_period=8):
    """Panel count giving ``per_period`` panels per oscillation period.

    ``frequency`` is an angular frequency hint (period ``2*pi/frequency``).
    """
    if frequency is None or frequency <= 0 or length <= 0:
        return 1
    return max(1, math.ceil(per_period * frequency * length / (2 * math.pi)))


def _panel_sums(f, lo, hi, order):
    """Gauss-Legendre sums of ``f`` over each panel ``[lo[i], hi[i]]``.

    Returns an array of shape ``(..., len(lo))``.
    """
    x, w = _gauss_legendre(order)
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    pieces = []
    start = 0
    per_call = 1  # first call probes the output width
    while start < lo.size:
        stop = min(start + per_call, lo.size)
        chunk = nodes[start * order:stop * order]
        vals = np.asarray(f(chunk), dtype=float)
        if not np.all(np.isfinite(vals)):
            bad = ~np.all(np.isfinite(vals.reshape(-1, chunk.size)), axis=0)
            raise NonFiniteError(f"integrand not finite at t={chunk[bad][0]!r}")
        width = vals.size // chunk.size
        vals = vals.reshape(vals.shape[:-1] + (stop - start, order))
        pieces.append(vals @ w * half[start:stop])
        start = stop
        per_call = max(1, _CHUNK_VALUES // (width * order))
    return np.concatenate(pieces, axis=-1)


def integrate(f, a, b, spec=DEFAULT_SPEC, *, frequency=None, panels=1,
              breakpoints=()):
    """Integrate ``f`` over ``[a, b]``.

    Each panel is compared against its two halves; panels whose
    difference exceeds their length-weighted share of
    ``max(abs_tol, rel_tol*|value|)`` are bisected, until the summed
    estimate of all panels is within that tolerance.  ``frequency`` seeds
    the initial mesh at eight panels per period (see :func:`min_panels`),
    ``breakpoints`` are added as panel edges.
    """
    a = float(a)
    b = float(b)
    if not a <= b:
        raise ValueError(f"need a <= b, got a={a}, b={b}")
    if a == b:
        shape = np.asarray(f(np.array([a]))).shape[:-1]
        zero = np.zeros(shape) if shape else 0.0
        return IntegrationResult(zero, 0.0, 0)

    count = max(panels, min_panels(frequency, b - a))
    edges = np.linspace(a, b, count + 1)
    inner = [p for p in breakpoints if a < p < b]
    if inner:
        edges = np.unique(np.concatenate([edges, inner]))
    lo, hi = edges[:-1], edges[1:]
    order = spec.panel_order
    whole = _panel_sums(f, lo, hi, order)

    accepted = np.zeros(whole.shape[:-1])
    error = 0.0
    splits = 0
    converged = True
    length = b - a
    while lo.size:
        mid = 0.5 * (lo + hi)
        left = _panel_sums(f, lo, mid, order)
        right = _panel_sums(f, mid, hi, order)
        split = left + right
        diff = np.abs(whole - split)
        if diff.ndim > 1:
            diff = diff.reshape(-1, lo.size).max(axis=0)
        total = accepted + split.sum(axis=-1)
        tol = max(spec.abs_tol, spec.rel_tol * float(np.max(np.abs(total))))
        ok = diff <= tol * (hi - lo) / length
        # Global stop: local tests can stall on rounding noise that is
        # already far below the overall tolerance.
        if error + float(diff.sum()) <= tol:
            ok[:] = True
        if splits + np.count_nonzero(~ok) > spec.max_subdivisions:
            converged = False
            ok[:] = True
        accepted = accepted + split[..., ok].sum(axis=-1)
        error += float(diff[ok].sum())
        bad = ~ok
        splits += int(np.count_nonzero(bad))
        lo = np.concatenate([lo[bad], mid[bad]])
        hi = np.concatenate([mid[bad], hi[bad]])
        whole = np.concatenate([left[..., bad], right[..., bad]], axis=-1)

    if not converged:
        warnings.warn(
            f"quadrature on [{a}, {b}] stopped after {splits} subdivisions "
            f"with error estimate {error:.3g}",
            NonConvergenceWarning, stacklevel=2)
    value = accepted if accepted.ndim else float(accepted)
    return IntegrationResult(value, error, splits, converged)


def integrate_tail(f, T, spec=DEFAULT_SPEC, **kwargs):
    """Integrate ``f`` over ``|t| > T``.

    Both rays are folded onto ``u in [0, 1)`` by ``t = T + u/(1-u)``.
    """
    T = float(T)
    if T < 0:
        raise ValueError("T must be non-negative")

    def folded(u):
        s = u / (1.0 - u)
        jac = 1.0 / (1.0 - u) ** 2
        return (np.asarray(f(T + s)) + np.asarray(f(-T - s))) * jac

    return integrate(folded, 0.0, 1.0, spec, **kwargs)


def integrate_line(f, R, spec=DEFAULT_SPEC, *, frequency=None,
                   breakpoints=()):
    """Integrate over the real line as ``[-R, R]`` plus the two tails."""
    core = integrate(f, -R, R, spec, frequency=frequency,
                     breakpoints=breakpoints)
    tail = integrate_tail(f, R, spec)
    return core + tail
