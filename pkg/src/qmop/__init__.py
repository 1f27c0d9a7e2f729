"""Exact workbench for q-Hahn multiple orthogonal polynomials."""

from .exactnum import DomainError, QBase, exact_base, float_base, ppow, qbracket, qpoch, tgamma_int
from .lattice import CanonicalPoly, GridFunction, canonical, dx_half, eval_poly, interpolate, x_of
from .measures import ParamSet, admissible, inner_sum, moment, weight_value
from .constructor import (
    MopPolynomial,
    MultiIndex,
    build_by_moments,
    build_by_rodrigues,
    verify_orthogonality,
)

__all__ = [
    "DomainError",
    "QBase",
    "exact_base",
    "float_base",
    "ppow",
    "qbracket",
    "qpoch",
    "tgamma_int",
    "CanonicalPoly",
    "GridFunction",
    "canonical",
    "dx_half",
    "eval_poly",
    "interpolate",
    "x_of",
    "ParamSet",
    "admissible",
    "inner_sum",
    "moment",
    "weight_value",
    "MopPolynomial",
    "MultiIndex",
    "build_by_moments",
    "build_by_rodrigues",
    "verify_orthogonality",
]

__version__ = "0.1.0"
