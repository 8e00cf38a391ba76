"""Orthonormal Hermite functions and the Christoffel-Darboux kernel.

Normalisation: ``h_k(t) = pi**-0.25 * 2**(-k/2) * (k!)**-0.5 * H_k(t) *
exp(-t**2/2)`` with ``H_k`` the physicists' Hermite polynomial, so that
``int h_j h_k = delta_jk``.  (A ``pi**-0.5`` prefactor would not give an
orthonormal family.)
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import gammaln

__all__ = [
    "PI_QUARTER",
    "eval_all",
    "eval_derivatives",
    "values_at_zero",
    "cd_kernel",
    "diagonal_sum",
]

PI_QUARTER = math.pi ** -0.25

# Beyond this |t| every h_k with k <= 10**4 is below the smallest double.
_T_CUTOFF = 1e3
_RESCALE_AT = 1e120


def eval_all(K, t):
    """Values ``h_0(t), ..., h_K(t)`` stacked along a new leading axis.

    Runs the three-term recurrence on the polynomial part and applies
    the Gaussian factor in log space, so nothing overflows before the
    final multiplication.
    """
    if K < 0:
        raise ValueError("K must be non-negative")
    t = np.asarray(t, dtype=float)
    far = np.abs(t) > _T_CUTOFF
    if np.any(far):
        t = np.where(far, 0.0, t)
    out = np.empty((K + 1,) + t.shape)
    half_sq = -0.5 * t * t
    log_scale = np.zeros(t.shape)
    prev = np.zeros(t.shape)
    cur = np.full(t.shape, PI_QUARTER)
    out[0] = cur * np.exp(half_sq)
    for k in range(K):
        nxt = t * math.sqrt(2.0 / (k + 1)) * cur - math.sqrt(k / (k + 1)) * prev
        prev, cur = cur, nxt
        mag = np.abs(cur)
        if mag.max(initial=0.0) > _RESCALE_AT:
            s = np.where(mag > _RESCALE_AT, mag, 1.0)
            cur = cur / s
            prev = prev / s
            log_scale = log_scale + np.log(s)
        out[k + 1] = cur * np.exp(log_scale + half_sq)
    if np.any(far):
        out[:, far] = 0.0
    return out


def eval_derivatives(K, t):
    """Derivatives ``h_0'(t), ..., h_K'(t)``.

    Uses ``h_k' = sqrt(k/2) h_{k-1} - sqrt((k+1)/2) h_{k+1}``.
    """
    h = eval_all(K + 1, t)
    k = np.arange(K + 1, dtype=float).reshape((-1,) + (1,) * np.ndim(t))
    lower = np.zeros_like(h[:K + 1])
    lower[1:] = h[:K]
    return np.sqrt(k / 2) * lower - np.sqrt((k + 1) / 2) * h[1:K + 2]


def values_at_zero(n):
    """``(h_{2n}(0), h'_{2n+1}(0))``, evaluated through log-factorials.

    ``h_{2n}(0) = (-1)**n pi**-0.25 sqrt((2n)!) / (2**n n!)`` and
    ``h'_{2n+1}(0) = sqrt(2(2n+1)) h_{2n}(0)``.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    log_mag = (-0.25 * math.log(math.pi) + 0.5 * gammaln(2 * n + 1)
               - n * math.log(2.0) - gammaln(n + 1))
    h_even = (-1) ** n * math.exp(log_mag)
    return h_even, math.sqrt(2.0 * (2 * n + 1)) * h_even


def diagonal_sum(m, x, alpha):
    """``sum_{k=0}^{m} h_k(x) h_k(alpha)`` by direct summation."""
    return np.sum(eval_all(m, x) * eval_all(m, alpha), axis=0)


def cd_kernel(n, x, alpha, *, diagonal_tol=1e-8):
    """Christoffel-Darboux quotient ``k_{2n}(x, alpha)``.

    Oriented so that ``sqrt((2n+1)/2) * k_{2n}(x, alpha)`` equals the
    reproducing kernel ``sum_{k<=2n} h_k(x) h_k(alpha)``:

        k_{2n} = (h_{2n+1}(x) h_{2n}(alpha) - h_{2n+1}(alpha) h_{2n}(x)) / (x - alpha)

    Within ``diagonal_tol`` of the diagonal the direct sum is used.
    """
    x, alpha = np.broadcast_arrays(np.asarray(x, float), np.asarray(alpha, float))
    hx = eval_all(2 * n + 1, x)
    ha = eval_all(2 * n + 1, alpha)
    diff = x - alpha
    near = np.abs(diff) < diagonal_tol
    safe = np.where(near, 1.0, diff)
    quotient = (hx[2 * n + 1] * ha[2 * n] - ha[2 * n + 1] * hx[2 * n]) / safe
    if np.any(near):
        direct = np.sum(hx[:2 * n + 1] * ha[:2 * n + 1], axis=0)
        quotient = np.where(near, direct / math.sqrt((2 * n + 1) / 2), quotient)
    return quotient if quotient.ndim else float(quotient)
