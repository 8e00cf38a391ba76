"""A-priori RMS error bound for even-order Hermite partial sums.

For ``K = 2n`` and window ``[-T, T]`` the bound is

    (1 + 1/K) * ([(1/2T) int_{|t|>T} f^2]^(1/2) + [(1/2T) int_{|w|>N} |fhat|^2]^(1/2))
    + (1/K) * [(1/2T) int_{|t|<=T} f_N^2]^(1/2)
    + (1/pi) * (1 + 1/(2K)) * S_a(K, T)

where ``S_a`` is estimated by a fixed table: each functional of ``f``
(absolute moments, weighted L2 norms, boundary values, tails) is
multiplied by a coefficient in ``(n, N, T)`` and the products are summed.

The table is stored as data.  Each summand is a small arithmetic
expression over ``n, N, T, pi, q = (3/2)**(1/4), omega_T`` and ``sqrt``;
summands whose radicals look like misprints are kept verbatim and carry
``suspect`` notes so they can be surfaced in reports.
"""

from __future__ import annotations

import ast
import json
import math
import operator
from dataclasses import asdict, dataclass, field
from functools import lru_cache

import numpy as np

from . import bandlimit
from .bandlimit import OddTruncationError, band_edge
from .functions import GaussianMixture
from .quadrature import DEFAULT_SPEC, integrate

__all__ = [
    "MissingDerivativeError",
    "MismatchedParamsError",
    "Summand",
    "SUMMANDS",
    "FUNCTIONALS",
    "MomentLedger",
    "CoefficientTable",
    "BoundBreakdown",
    "omega_weight",
    "moment_ledger",
    "coefficient_table",
    "sansone_upper",
    "theorem1_bound",
    "sig9",
]


class MissingDerivativeError(ValueError):
    pass


class MismatchedParamsError(ValueError):
    pass


@dataclass(frozen=True)
class Summand:
    functional: str
    expr: str
    suspect: str = ""


def _s(functional, *exprs):
    return [Summand(functional, e) if isinstance(e, str) else Summand(functional, *e)
            for e in exprs]


_SQRT9 = "sqrt(9) = 3 is an unusual way to print an integer; likely a different radicand"

SUMMANDS = tuple(
    _s("abs_moment_0",
       "T**2/(48*sqrt(5)*N**3)",
       ("T**3/(384*sqrt(9)*N**4)", _SQRT9),
       "1/(8*N**3)",
       "T/(6*sqrt(3)*sqrt((4*n+1)*(4*n+3)))",
       "T/(6*sqrt(3)*(4*n+3))",
       "T**5/(288*sqrt(11)*N**3*sqrt(4*n+3))",
       "T**10/(3870720*sqrt(21)*sqrt(4*n+3)*N**6)",
       "T**6/(36*sqrt(13)*N**2*sqrt(4*n+3))",
       "T**8/(720*sqrt(17)*N**4*sqrt(4*n+3))")
    + _s("abs_moment_1",
         ("T/(48*sqrt(3)*N**3)",
          "running estimate for the M_1 term gives T/3 * 1/(48 N^3), not T/(48 sqrt(3) N^3)"),
         "3*T**2/(128*sqrt(5)*N**4)",
         "1/(3*(4*n+3))",
         "1/(3*sqrt((4*n+1)*(4*n+3)))",
         ("T**4/(144*sqrt(9)*N**3*sqrt(4*n+3))", _SQRT9),
         "7*T**9/(3870720*sqrt(19)*sqrt(4*n+3)*N**6)")
    + _s("abs_moment_2",
         "1/(48*N**3)",
         "T/(128*sqrt(3)*N**4)",
         "1/(2*N**2*sqrt(4*n+1))",
         ("T**3/(288*sqrt(7*(4*n+1))*N**3)",
          "companion summands pair the N**3 cubic term with 4n+3, not 4n+1"),
         "21*T**8/(3870720*sqrt(17)*sqrt(4*n+3)*N**6)")
    + _s("abs_moment_3",
         "1/(384*N**4)",
         "T**3/(48*sqrt(7)*N**2*sqrt(4*n+1))",
         "1/(2*N**2*sqrt(4*n+3))",
         "T**2/(288*sqrt(5*(4*n+1))*N**3)",
         "35*T**7/(3870720*sqrt(15)*sqrt(4*n+3)*N**6)",
         "T**3/(36*sqrt(7)*N**2*sqrt(4*n+3))")
    + _s("abs_moment_4",
         "T/(144*sqrt(5)*N**3*sqrt(4*n+1))",
         "T**2/(16*sqrt(5)*N**2*sqrt(4*n+1))",
         "35*T**6/(3870720*sqrt(13)*N**6*sqrt(4*n+3))")
    + _s("abs_moment_5",
         "1/(288*N**3*sqrt(4*n+1))",
         "T/(16*sqrt(3)*N**2*sqrt(4*n+1))",
         "21*T**5/(3870720*sqrt(11)*N**6*sqrt(4*n+3))",
         "T**3/(720*sqrt(7*(4*n+3))*N**4)")
    + _s("abs_moment_6",
         "1/(48*N**2*sqrt(4*n+1))",
         ("7*T**4/(3870720*sqrt(9)*sqrt(4*n+3)*N**6)", _SQRT9))
    + _s("abs_moment_7",
         "T**3/(3870720*sqrt(7)*sqrt(4*n+3)*N**6)")
    + _s("deriv_abs_moment_0",
         "1/(2*N**2)",
         "1/(4*N**3)",
         "T**2/(6*sqrt(5)*sqrt((4*n+1)*(4*n+3)))",
         "T**2/(6*sqrt(5)*(4*n+3))")
    + _s("deriv_abs_moment_1",
         "T/(6*sqrt(3)*sqrt((4*n+1)*(4*n+3)))",
         "T/(6*sqrt(3)*(4*n+3))",
         "T**3/(6*sqrt(7)*N**2*sqrt(4*n+3))")
    + _s("deriv_abs_moment_2",
         "1/(6*sqrt((4*n+1)*(4*n+3)))",
         "1/(6*(4*n+3))")
    + _s("deriv_abs_moment_3",
         "1/(6*sqrt(4*n+1)*N**2)")
    + _s("l2_alpha1",
         "pi*T**(5/2)/(6*sqrt(2)*N*sqrt(4*n+3))",
         "pi*T**(1/2)/(4*N**2)")
    + _s("l2_alpha2",
         "sqrt(2)*pi/(8*N**2)*T**(-1/2)")
    + _s("l2_alpha3",
         "pi*T**(1/2)/(6*sqrt(2*(4*n+1))*N)",
         "sqrt(2)*pi*T**(5/2)/(9*sqrt((4*n+1)*(4*n+3)))",
         "2/3*sqrt(pi/2)*q*T**(-1/2)*omega_T/(n*sqrt(4*n+1))",
         "1/24*sqrt(pi**3/2)*q*T**(-1/2)*omega_T/(n*sqrt(4*n+3))")
    + _s("l2_fN",
         "sqrt(2)*pi/(8*N**2)*T**(3/2)")
    + _s("l2_fN_alpha4",
         "sqrt(2)*pi*T**(-1/2)/(12*N*sqrt(4*n+3))")
    + _s("l2_f_omega",
         "sqrt(2)/3*pi**(1/2)*T**(5/2)*q/(n*sqrt(4*n+1))",
         "1/(24*sqrt(2))*pi**(3/2)*T**(5/2)*q/(n*sqrt(4*n+3))",
         "sqrt(2)*pi*T**(-1/2)/n**2*omega_T")
    + _s("l2_fN_omega",
         "4*sqrt(2)*pi**(1/2)*T**(-1/2)*q/n",
         ("1/(12*sqrt(2))*pi**(3/2)*T**(5/2)*q/n",
          "the matching f-weighted block carries T**(-1/2) here; T**(5/2) may be a misprint"))
    + _s("boundary",
         "1/(2*N**2)",
         "T/(8*N**3)*(1+1/sqrt(3))",
         "T**2/(6*sqrt((4*n+1)*(4*n+3)))*(1+1/sqrt(3)+1/sqrt(5))",
         "T**3/(6*N**2*sqrt(4*n+1))",
         "T**2/(6*(4*n+3))*(1+1/sqrt(3)+1/sqrt(5))",
         "T**3/(6*sqrt(7)*N**2*sqrt(4*n+3))")
    + _s("tail_t",
         "2*sqrt(2)*pi**(1/2)*T**(-1/2)*q*omega_T/n",
         "sqrt(2)*pi*T**(7/2)/(12*N*sqrt(4*n+3))",
         "1/(24*sqrt(2))*pi**(3/2)*T**(-1/2)*q*omega_T/n")
    + _s("tail_omega",
         "2*sqrt(2)*pi**(1/2)*T**(-1/2)*q*omega_T/n",
         "sqrt(2)*pi*T**(7/2)/(12*N*sqrt(4*n+3))",
         "1/(24*sqrt(2))*pi**(3/2)*T**(-1/2)*q*omega_T/n")
)

FUNCTIONALS = tuple(dict.fromkeys(s.functional for s in SUMMANDS))

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}
_UNARY = {ast.USub: operator.neg, ast.UAdd: operator.pos}


@lru_cache(maxsize=None)
def _compile(expr):
    """Parse ``expr`` once, rejecting anything but arithmetic and ``sqrt``."""
    tree = ast.parse(expr, mode="eval")
    for node in ast.walk(tree):
        if isinstance(node, ast.Call):
            if not (isinstance(node.func, ast.Name) and node.func.id == "sqrt"
                    and len(node.args) == 1 and not node.keywords):
                raise ValueError(f"only sqrt(x) calls are allowed: {expr!r}")
        elif not isinstance(node, (ast.Expression, ast.BinOp, ast.UnaryOp, ast.Constant,
                                   ast.Name, ast.Load, *_BINOPS, *_UNARY)):
            raise ValueError(f"disallowed syntax {type(node).__name__} in {expr!r}")
    return tree.body


def _eval(node, env):
    if isinstance(node, ast.Constant):
        return float(node.value)
    if isinstance(node, ast.Name):
        return env[node.id]
    if isinstance(node, ast.BinOp):
        return _BINOPS[type(node.op)](_eval(node.left, env), _eval(node.right, env))
    if isinstance(node, ast.UnaryOp):
        return _UNARY[type(node.op)](_eval(node.operand, env))
    return math.sqrt(_eval(node.args[0], env))


def evaluate(expr, n, N, T):
    env = {"n": float(n), "N": float(N), "T": float(T), "pi": math.pi,
           "q": 1.5 ** 0.25, "omega_T": float(omega_weight(T, n))}
    return _eval(_compile(expr), env)


def omega_weight(alpha, n):
    """``alpha^2 (alpha^4/18 + 1)/sqrt(pi) + (2/187)|alpha|^(17/2)/n^(1/4)``."""
    a = np.abs(np.asarray(alpha, dtype=float))
    out = a ** 2 * (a ** 4 / 18 + 1) / math.sqrt(math.pi) + 2 / 187 * a ** 8.5 / n ** 0.25
    return out if out.ndim else float(out)


def sig9(x):
    """Round to 9 significant digits (stable under repeated rounding)."""
    return float(f"{x:.9g}")


def _rounded(obj):
    if isinstance(obj, float):
        return sig9(obj)
    if isinstance(obj, dict):
        return {k: _rounded(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_rounded(v) for v in obj]
    return obj


@dataclass(frozen=True)
class CoefficientTable:
    n: int
    N: float
    T: float
    entries: dict
    summands: dict

    def suspects(self):
        """``(functional, expression, note, value)`` for every flagged summand."""
        return [(fid, s.expr, s.suspect, v)
                for fid, rows in self.summands.items()
                for s, v in rows if s.suspect]


def coefficient_table(n, N, T):
    """Evaluate every summand at ``(n, N, T)`` and total them per functional."""
    if n < 1:
        raise ValueError("n must be at least 1")
    summands = {fid: [] for fid in FUNCTIONALS}
    for s in SUMMANDS:
        summands[s.functional].append((s, evaluate(s.expr, n, N, T)))
    entries = {fid: math.fsum(v for _, v in rows) for fid, rows in summands.items()}
    return CoefficientTable(n, float(N), float(T), entries, summands)


@dataclass(frozen=True)
class MomentLedger:
    n: int
    N: float
    T: float
    values: dict
    l2_f: float

    def __getitem__(self, key):
        return self.values[key]

    def to_dict(self):
        return {"n": self.n, "N": self.N, "T": self.T, "l2_f": self.l2_f, **self.values}


def _quad(g, T, f, spec):
    return float(integrate(g, -T, T, spec, frequency=None,
                           breakpoints=(0.0,) + tuple(f.breakpoints)).value)


def moment_ledger(f, n, T, N, spec=DEFAULT_SPEC, *, mixture=None):
    """Every functional the coefficient table multiplies.

    ``mixture`` (a :class:`GaussianMixture`) enables closed forms for the
    absolute and weighted moments; tails use ``f``'s own shortcuts when
    present.  ``f_N`` is taken from :func:`bandlimit.f_N_eval`.
    """
    if f.derivative is None:
        raise MissingDerivativeError("derivative moments need f.derivative")
    if not T > 0 or not N > 0 or n < 1:
        raise ValueError("need n >= 1, T > 0, N > 0")
    v = {}

    if mixture is not None and mixture.nonnegative:
        for j in range(8):
            v[f"abs_moment_{j}"] = mixture.abs_moment(j, T)
    else:
        for j in range(8):
            v[f"abs_moment_{j}"] = _quad(lambda t, j=j: np.abs(f(t) * t ** j), T, f, spec)
    for j in range(4):
        v[f"deriv_abs_moment_{j}"] = _quad(
            lambda t, j=j: np.abs(f.derivative(t) * t ** j), T, f, spec)
    for j in (1, 2, 3):
        if mixture is not None:
            v[f"l2_alpha{j}"] = mixture.l2_moment(j, T)
        else:
            v[f"l2_alpha{j}"] = math.sqrt(_quad(lambda t, j=j: (f(t) * t ** j) ** 2, T, f, spec))

    def f_N(t):
        return bandlimit.f_N_eval(f, N, t, spec)

    def sq_norm(g):
        return math.sqrt(max(float(integrate(g, -T, T, spec, frequency=N,
                                             breakpoints=f.breakpoints).value), 0.0))

    v["l2_fN"] = sq_norm(lambda t: f_N(t) ** 2)
    v["l2_fN_alpha4"] = sq_norm(lambda t: (f_N(t) * t ** 4) ** 2)
    v["l2_f_omega"] = math.sqrt(_quad(lambda t: (f(t) * omega_weight(t, n)) ** 2, T, f, spec))
    v["l2_fN_omega"] = sq_norm(lambda t: (f_N(t) * omega_weight(t, n)) ** 2)
    v["boundary"] = float(abs(f(np.array(-T))) + abs(f(np.array(T))))
    v["tail_t"] = math.sqrt(max(bandlimit.l2_tail(f, T, spec), 0.0))
    v["tail_omega"] = math.sqrt(max(bandlimit.fourier_l2_tail(f, N, spec), 0.0))

    if mixture is not None:
        l2_f = mixture.l2_moment(0, T)
    else:
        l2_f = math.sqrt(_quad(lambda t: f(t) ** 2, T, f, spec))
    return MomentLedger(n, float(N), float(T), v, l2_f)


def sansone_upper(ledger, table):
    """``sum_id coefficient[id] * functional[id]``."""
    if (ledger.n, ledger.N, ledger.T) != (table.n, table.N, table.T):
        raise MismatchedParamsError(
            f"ledger (n={ledger.n}, N={ledger.N}, T={ledger.T}) vs "
            f"table (n={table.n}, N={table.N}, T={table.T})")
    return math.fsum(table.entries[fid] * ledger[fid] for fid in FUNCTIONALS)


@dataclass(frozen=True)
class BoundBreakdown:
    K: int
    n: int
    N: float
    T: float
    term_tail_t: float
    term_tail_omega: float
    term_fN: float
    term_sansone: float
    total: float
    term_f_variant: float
    sansone_sum: float
    ledger: dict = field(default_factory=dict)
    coefficients: dict = field(default_factory=dict)
    suspects: list = field(default_factory=list)

    def to_json(self):
        data = asdict(self)
        data["suspects"] = [
            {"functional": fid, "summand": expr, "note": note, "value": value}
            for fid, expr, note, value in self.suspects]
        return json.dumps(_rounded(data), indent=2)

    @classmethod
    def from_json(cls, text):
        data = json.loads(text)
        data["suspects"] = [(s["functional"], s["summand"], s["note"], s["value"])
                            for s in data["suspects"]]
        return cls(**data)


def theorem1_bound(f, K, T, spec=DEFAULT_SPEC, *, N=None, mixture=None):
    """Assemble the four bound terms for ``f``, even ``K`` and window ``T``.

    ``N`` defaults to the band edge of ``K``.  ``term_f_variant`` repeats
    the third term with ``f`` in place of ``f_N``.
    """
    if K < 2 or K % 2:
        raise OddTruncationError(f"K must be even and >= 2, got {K}")
    if isinstance(f, GaussianMixture):
        mixture, f = f, f.as_test_function()
    n = K // 2
    N = band_edge(K) if N is None else float(N)
    ledger = moment_ledger(f, n, T, N, spec, mixture=mixture)
    table = coefficient_table(n, N, T)
    s_a = sansone_upper(ledger, table)
    inv = 1.0 / math.sqrt(2 * T)
    term_t = (1 + 1 / K) * inv * ledger["tail_t"]
    term_w = (1 + 1 / K) * inv * ledger["tail_omega"]
    term_fN = inv * ledger["l2_fN"] / K
    term_s = (1 + 1 / (2 * K)) * s_a / math.pi
    return BoundBreakdown(
        K=K, n=n, N=N, T=float(T),
        term_tail_t=term_t, term_tail_omega=term_w, term_fN=term_fN, term_sansone=term_s,
        total=term_t + term_w + term_fN + term_s,
        term_f_variant=inv * ledger.l2_f / K,
        sansone_sum=s_a,
        ledger=ledger.to_dict(),
        coefficients=dict(table.entries),
        suspects=table.suspects(),
    )
