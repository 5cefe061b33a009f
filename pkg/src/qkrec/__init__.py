"""Exact truncated computations with genus-0 quantum K-theory J-functions.

The layers, bottom up: lambda-rings with Adams operations, K-rings of
products of projective spaces, rational functions of q, Novikov series with
q-difference operators, and the reconstruction flows built on them.
"""

from .jfun import (
    ReconParams,
    jsym_cp1,
    jsym_cp1_simplified,
    load_seed_series,
    q_string,
    reconstruct_t2,
    reconstruct_t3,
    small_j,
    theorem1_flow,
)
from .k_ring import KClass, KRingSpec, chi, invert_unit, kadams, kmul, line_class
from .lambda_ring import DomainError, LambdaRing, LambdaScalar, StructureError, adams, specialize_symmetric
from .novikov import DiffOp, NovikovSeries, adams_on_series, apply_diffop, constant_series, project_plus_series
from .parsing import ParseError, parse_expression, parse_qrat
from .q_algebra import (
    QLaurent,
    QRat,
    exp_q,
    exp_qseries,
    expand_at_infinity,
    expand_at_one,
    expand_at_zero,
    invert_one_minus_pq,
    project_plus,
    residue_zero_infty,
)

__all__ = [
    "ReconParams",
    "jsym_cp1",
    "jsym_cp1_simplified",
    "load_seed_series",
    "q_string",
    "reconstruct_t2",
    "reconstruct_t3",
    "small_j",
    "theorem1_flow",
    "KClass",
    "KRingSpec",
    "chi",
    "invert_unit",
    "kadams",
    "kmul",
    "line_class",
    "DomainError",
    "LambdaRing",
    "LambdaScalar",
    "StructureError",
    "adams",
    "specialize_symmetric",
    "DiffOp",
    "NovikovSeries",
    "adams_on_series",
    "apply_diffop",
    "constant_series",
    "project_plus_series",
    "ParseError",
    "parse_expression",
    "parse_qrat",
    "QLaurent",
    "QRat",
    "exp_q",
    "exp_qseries",
    "expand_at_infinity",
    "expand_at_one",
    "expand_at_zero",
    "invert_one_minus_pq",
    "project_plus",
    "residue_zero_infty",
]

__version__ = "0.1.0"
