"""Exact absorption generating functions for +2/+1/-1 walks in a slit.

A particle on sites 0..m+1 steps -1, +1, or +2 with rational weights; the
sites 0, m, m+1 absorb.  ``genfun`` returns, exactly, the generating
function whose z^n coefficient is the weight of walks from site m-1 first
absorbed at 0 at step n.  The ``oracles`` module reaches the same numbers
by independent routes (transfer-matrix powers, path enumeration, the
interior characteristic polynomial, and high-precision root formulas), and
the ``harness`` sweeps those agreements over instance grids.
"""

from .exact import ChebV, Poly, binom, cheb_v, series_inverse, to_fraction
from .genfun import (
    GenFun,
    SlitSpec,
    Weights,
    a2_zero_denominator,
    denominator,
    denominator_term,
    genfun,
    genfun_a2_zero,
    min_terms,
)
from .harness import (
    VerificationReport,
    equivalence_checks,
    observed_min_terms,
    sweep_conjecture,
    sweep_equivalence,
)
from .oracles import (
    CubicRoots,
    QuadRoots,
    ReductionReport,
    RootSeriesReport,
    TransitionMatrix,
    build_matrix,
    closed_form_numeric,
    cubic_coefficients,
    cubic_roots,
    enumerate_paths,
    general_start_numeric,
    interior_charpoly,
    matrix_series,
    quad_roots,
    reduction_identity_check,
    root_series_check,
)

__version__ = "0.1.0"

__all__ = [
    "ChebV",
    "CubicRoots",
    "GenFun",
    "Poly",
    "QuadRoots",
    "ReductionReport",
    "RootSeriesReport",
    "SlitSpec",
    "TransitionMatrix",
    "VerificationReport",
    "Weights",
    "a2_zero_denominator",
    "binom",
    "build_matrix",
    "cheb_v",
    "closed_form_numeric",
    "cubic_coefficients",
    "cubic_roots",
    "denominator",
    "denominator_term",
    "enumerate_paths",
    "equivalence_checks",
    "general_start_numeric",
    "genfun",
    "genfun_a2_zero",
    "interior_charpoly",
    "matrix_series",
    "min_terms",
    "observed_min_terms",
    "quad_roots",
    "reduction_identity_check",
    "root_series_check",
    "series_inverse",
    "sweep_conjecture",
    "sweep_equivalence",
    "to_fraction",
]
