"""Hermite-function partial sums and a-priori bounds on their RMS error."""

from .bandlimit import BandLimitParams, band_edge, dirichlet_op, f_N_eval, lemma2_residual
from .bound import BoundBreakdown, coefficient_table, moment_ledger, sansone_upper, theorem1_bound
from .functions import GaussianMixture, TestFunction, black_box, standard_normal, trimodal
from .quadrature import IntegrationResult, QuadratureSpec, integrate, integrate_tail
from .series import SeriesApprox, coefficients, measure_error, partial_sum

__version__ = "0.1.0"
