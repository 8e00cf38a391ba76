"""Command-line front end.

Exit codes: 0 success, 1 a check failed, 2 bad configuration,
3 numerical failure (quadrature did not converge or hit a non-finite value).

When ``--output`` is given, a two-column plot-data file (``<stem>.plot.txt``)
and a PNG figure (``<stem>.png``) are written next to the report.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import warnings
from pathlib import Path

import numpy as np

from . import bound, series, verify
from .bandlimit import OddTruncationError
from .functions import PRESETS, GaussianMixture
from .quadrature import DEFAULT_SPEC, NonConvergenceWarning, NonFiniteError, QuadratureSpec
from .sansone import ExpensiveComputationError

EXIT_OK, EXIT_CHECK, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3

# Trimodal example: window, order and the rounded one-sided bounds it is
# checked against.  The sup limit carries 1.5x slack for grid effects.
REPRODUCE_K = 500
REPRODUCE_T = 3.0
REFERENCE = (
    ("term_tail_t", 0.00051),
    ("term_tail_omega", 0.00088),
    ("term_fN", 0.00062),
    ("term_sansone", 0.02161),
    ("total", 0.02361),
)
REFERENCE_SUP = 0.0025
SUP_SLACK = 1.5
DEFAULT_TOLERANCE = 0.10
SWEEP_KS = (4, 8, 16, 32, 64, 128, 256, 500)


class ConfigError(ValueError):
    pass


def fmt(x):
    return f"{x:.9g}"


def _mixture(args):
    if args.mixture is not None:
        try:
            return GaussianMixture.from_json(args.mixture), "mixture"
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"bad --mixture: {exc}") from exc
    name = args.preset or "trimodal"
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    return PRESETS[name](), name


def _spec(args):
    try:
        return QuadratureSpec(args.rel_tol, args.abs_tol, args.panel_order,
                              DEFAULT_SPEC.max_subdivisions)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _check_K(K):
    if K < 2 or K % 2:
        raise ConfigError(f"K must be even and >= 2, got {K}")


def _check_T(T):
    if not T > 0:
        raise ConfigError(f"T must be positive, got {T}")


def _csv(rows, header):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _emit(args, text):
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _sidecars(args):
    """Paths of the plot-data file and figure, or ``None`` without ``--output``."""
    if not args.output:
        return None
    out = Path(args.output)
    return out.with_suffix(".plot.txt"), out.with_suffix(".png")


def cmd_bound(args):
    _check_K(args.K)
    _check_T(args.T)
    mixture, name = _mixture(args)
    b = bound.theorem1_bound(mixture, args.K, args.T, _spec(args), N=args.N)
    if args.format == "json":
        _emit(args, b.to_json() + "\n")
    else:
        rows = [(k, float(getattr(b, k)), "") for k in
                ("K", "n", "N", "T", "term_tail_t", "term_tail_omega", "term_fN",
                 "term_sansone", "total", "term_f_variant", "sansone_sum")]
        rows += [(f"ledger.{k}", float(v), "") for k, v in b.ledger.items()]
        rows += [(f"coefficient.{k}", float(v), "") for k, v in b.coefficients.items()]
        rows += [(f"suspect.{fid}", float(v), f"{expr} | {note}")
                 for fid, expr, note, v in b.suspects]
        _emit(args, _csv(rows, ("quantity", "value", "note")))
    side = _sidecars(args)
    if side:
        from . import plots

        labels = ["tail_t", "tail_omega", "f_N", "sansone"]
        values = [b.term_tail_t, b.term_tail_omega, b.term_fN, b.term_sansone]
        plots.write_plot_data(side[0], [("term", range(1, 5), values)])
        plots.terms_figure(side[1], labels, values)
    if args.output:
        print(f"{name}: K={args.K} T={fmt(args.T)} N={fmt(b.N)} total={fmt(b.total)}"
              f" ({len(b.suspects)} suspect summands)")
    return EXIT_OK


def cmd_approx(args):
    _check_K(args.K)
    _check_T(args.T)
    if args.grid_points < 2:
        raise ConfigError("--grid-points must be at least 2")
    mixture, name = _mixture(args)
    f = mixture.as_test_function(name)
    spec = _spec(args)
    approx = series.coefficients(f, args.K, spec)
    report = series.measure_error(f, approx, args.T, args.grid_points, spec)
    if args.format == "json":
        data = {"K": args.K, "T": float(args.T), "rms": report.rms, "sup": report.sup,
                "grid_points": report.grid_points,
                "coefficients": [float(c) for c in approx.coeffs]}
        _emit(args, json.dumps(bound._rounded(data), indent=2) + "\n")
    else:
        rows = [("K", float(args.K), ""), ("T", float(args.T), ""),
                ("rms", report.rms, ""), ("sup", report.sup, "grid lower bound"),
                ("grid_points", float(report.grid_points), "")]
        rows += [(f"c_{k}", float(c), "") for k, c in enumerate(approx.coeffs)]
        _emit(args, _csv(rows, ("quantity", "value", "note")))
    side = _sidecars(args)
    if side:
        from . import plots

        t = np.linspace(-args.T, args.T, args.grid_points)
        fv, sv = f(t), approx(t)
        plots.write_plot_data(side[0], [("f", t, fv), ("partial_sum", t, sv),
                                        ("error", t, fv - sv)])
        plots.approx_figure(side[1], t, fv, sv, args.K)
    return EXIT_OK


def _reproduce_rows(tolerance, spec):
    m = PRESETS["trimodal"]()
    b = bound.theorem1_bound(m, REPRODUCE_K, REPRODUCE_T, spec)
    f = m.as_test_function("trimodal")
    approx = series.coefficients(f, REPRODUCE_K, spec)
    sup = series.measure_error(f, approx, REPRODUCE_T, 4001, spec).sup
    rows = []
    for key, ref in REFERENCE:
        value = getattr(b, key)
        rel = (value - ref) / ref
        rows.append((key, ref, value, rel, tolerance, abs(rel) <= tolerance))
    limit = SUP_SLACK * REFERENCE_SUP
    rows.append(("measured_sup", REFERENCE_SUP, sup, (sup - REFERENCE_SUP) / REFERENCE_SUP,
                 limit, sup < limit))
    return b, rows


def cmd_reproduce(args):
    tolerance = DEFAULT_TOLERANCE if args.tolerance is None else args.tolerance
    if not tolerance > 0:
        raise ConfigError("--tolerance must be positive")
    b, rows = _reproduce_rows(tolerance, _spec(args))
    header = ("quantity", "reference", "computed", "rel_diff", "limit", "status")
    table = [(q, float(r), float(c), float(d), float(lim), "pass" if ok else "FAIL")
             for q, r, c, d, lim, ok in rows]
    if args.format == "csv":
        _emit(args, _csv(table, header))
    else:
        data = {"K": REPRODUCE_K, "T": REPRODUCE_T, "N": b.N, "term_f_variant": b.term_f_variant,
                "rows": [dict(zip(header, row)) for row in table]}
        _emit(args, json.dumps(bound._rounded(data), indent=2) + "\n")
    side = _sidecars(args)
    if side:
        from . import plots

        plots.write_plot_data(side[0], [("reference", range(len(rows)), [r[1] for r in rows]),
                                        ("computed", range(len(rows)), [r[2] for r in rows])])
        plots.reproduce_figure(side[1], [r[0] for r in rows], [r[1] for r in rows],
                               [r[2] for r in rows])
    failed = [r[0] for r in rows if not r[5]]
    print(f"N = {b.N:.4f}", file=sys.stderr)
    if failed:
        print("failing rows: " + ", ".join(failed), file=sys.stderr)
        return EXIT_CHECK
    return EXIT_OK


def cmd_sweep(args):
    Ks = SWEEP_KS if args.K is None else tuple(args.K)
    if not Ks:
        raise ConfigError("empty K list")
    for K in Ks:
        _check_K(K)
    _check_T(args.T)
    mixture, name = _mixture(args)
    f = mixture.as_test_function(name)
    spec = _spec(args)
    rows = []
    for K in Ks:
        approx = series.coefficients(f, K, spec)
        err = series.measure_error(f, approx, args.T, args.grid_points, spec)
        b = bound.theorem1_bound(mixture, K, args.T, spec)
        rows.append((K, b.N, err.rms, err.sup, b.term_tail_t, b.term_tail_omega,
                     b.term_fN, b.term_sansone, b.total))
    header = ("K", "N", "measured_rms", "measured_sup", "term_tail_t", "term_tail_omega",
              "term_fN", "term_sansone", "bound_total")
    if args.format == "json":
        data = [dict(zip(header, (r[0],) + tuple(float(v) for v in r[1:]))) for r in rows]
        _emit(args, json.dumps(bound._rounded(data), indent=2) + "\n")
    else:
        _emit(args, _csv([(r[0],) + tuple(float(v) for v in r[1:]) for r in rows], header))
    side = _sidecars(args)
    if side:
        from . import plots

        col = list(zip(*rows))
        plots.write_plot_data(side[0], [("measured_rms", col[0], col[2]),
                                        ("measured_sup", col[0], col[3]),
                                        ("bound_total", col[0], col[8])])
        plots.sweep_figure(side[1], col[0], col[2], col[3], col[8])
    violated = [r[0] for r in rows if r[2] > r[8] + 1e-8]
    if violated:
        print(f"measured RMS exceeds the bound at K = {violated}", file=sys.stderr)
        return EXIT_CHECK
    return EXIT_OK


def cmd_verify(args):
    try:
        results = verify.run_suites(args.suite, args.depth, force=args.force_large_n)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    header = ("suite", "check", "value", "limit", "status", "note")
    table = [(c.suite, c.label, c.value, c.limit, "pass" if c.ok else "FAIL", c.note)
             for checks in results.values() for c in checks]
    if args.format == "json":
        data = [dict(zip(header, row)) for row in table]
        _emit(args, json.dumps(bound._rounded(data), indent=2) + "\n")
    else:
        _emit(args, _csv(table, header))
    bad = [name for name, checks in results.items() if not all(c.ok for c in checks)]
    for name, checks in results.items():
        status = "FAIL" if name in bad else "pass"
        print(f"{status}  {name} ({sum(c.ok for c in checks)}/{len(checks)})", file=sys.stderr)
    return EXIT_CHECK if bad else EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="hermbound",
        description="Error bounds for truncated Hermite-function expansions.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", help="write the report here (adds .plot.txt and .png)")
    common.add_argument("--rel-tol", type=float, default=DEFAULT_SPEC.rel_tol)
    common.add_argument("--abs-tol", type=float, default=DEFAULT_SPEC.abs_tol)
    common.add_argument("--panel-order", type=int, default=DEFAULT_SPEC.panel_order)

    func = argparse.ArgumentParser(add_help=False)
    group = func.add_mutually_exclusive_group()
    group.add_argument("--preset", help=f"one of {sorted(PRESETS)} (default trimodal)")
    group.add_argument("--mixture", help="JSON list of [w, a, c] triples")
    func.add_argument("--T", type=float, default=3.0, help="window half-width")

    p = sub.add_parser("bound", parents=[common, func], help="evaluate the error bound")
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--N", type=float, help="override the band edge")
    p.set_defaults(run=cmd_bound)

    p = sub.add_parser("approx", parents=[common, func], help="partial sum and measured error")
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--grid-points", type=int, default=4001)
    p.set_defaults(run=cmd_approx)

    p = sub.add_parser("reproduce", parents=[common], help="trimodal example, K=500, T=3")
    p.add_argument("--tolerance", type=float, help="relative tolerance per row (default 0.1)")
    p.set_defaults(run=cmd_reproduce)

    p = sub.add_parser("sweep", parents=[common, func], help="bound and error over several K")
    p.add_argument("--K", type=int, nargs="*", help=f"even orders (default {SWEEP_KS})")
    p.add_argument("--grid-points", type=int, default=4001)
    p.set_defaults(run=cmd_sweep)

    p = sub.add_parser("verify", parents=[common], help="run the invariant suites")
    p.add_argument("--depth", choices=("quick", "full"), default="quick")
    p.add_argument("--suite", action="append", help=f"repeatable; one of {sorted(verify.SUITES)}")
    p.add_argument("--force-large-n", action="store_true",
                   help="allow nested quadrature beyond the default order limit")
    p.set_defaults(run=cmd_verify)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", NonConvergenceWarning)
        try:
            code = args.run(args)
        except (ConfigError, OddTruncationError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        except ExpensiveComputationError as exc:
            print(f"error: {exc} (pass --force-large-n)", file=sys.stderr)
            return EXIT_CONFIG
        except NonFiniteError as exc:
            print(f"numerical failure: {exc}", file=sys.stderr)
            return EXIT_NUMERIC
    stalled = [w for w in caught if issubclass(w.category, NonConvergenceWarning)]
    if stalled:
        print(f"numerical failure: {stalled[0].message}", file=sys.stderr)
        return EXIT_NUMERIC
    return code


if __name__ == "__main__":
    sys.exit(main())
