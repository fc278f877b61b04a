"""Packed-word arithmetic over small prime fields and their extensions."""

from .counters import CostReport
from .dqt import DensePoly, Packed, dqt_mul, dqt_mul_poly, pack, unpack
from .fpdiv import ReciprocalDivisor, floor_div, floor_div_premul, floor_div_rn, lemma1_bound
from .gfq import GfqField, build_field, fgdp_dot, gfq_matmul
from .params import (
    BoundViolation,
    DelayedParams,
    InfeasibleError,
    NotPrimeError,
    ParameterError,
    QadicParams,
    best_qadic,
    delayed_bound,
)
from .polymul import cost_model, delayed_mul, fqt_mul, fqt_params
from .redq import RedqPlan, build_correction_table, cached_table, redq, redq_array, redq_residues

__all__ = [
    "CostReport", "DensePoly", "Packed", "dqt_mul", "dqt_mul_poly", "pack", "unpack",
    "ReciprocalDivisor", "floor_div", "floor_div_premul", "floor_div_rn", "lemma1_bound",
    "GfqField", "build_field", "fgdp_dot", "gfq_matmul",
    "BoundViolation", "DelayedParams", "InfeasibleError", "NotPrimeError", "ParameterError",
    "QadicParams", "best_qadic", "delayed_bound",
    "cost_model", "delayed_mul", "fqt_mul", "fqt_params",
    "RedqPlan", "build_correction_table", "cached_table", "redq", "redq_array", "redq_residues",
]
