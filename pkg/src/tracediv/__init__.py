"""Exact p-adic divisibility of trace codes over finite field towers."""

from __future__ import annotations

__version__ = "0.1.0"

from .abelian import (
    AbelianCodeSpec,
    build_trace_representation,
    cyclic_oracle_valuation,
    delsarte_mceliece_valuation,
    mceliece_ell,
)
from .artin_schreier import (
    BoundReport,
    DegreeSetProgramInstance,
    Polynomial,
    bounds_57_58,
    count_solutions,
    digit_knapsack,
    general_bound_55,
    homogeneous_bound,
    prop52_feasible,
    search_extremal,
    theorem51_program,
)
from .criterion import CriterionResult, criterion_valuation, inner_sum
from .errors import TraceDivError
from .field_tower import FieldElement, FieldTower, build_tower
from .padic import ExponentTuple, Valuation, WittElement, WittRing, teichmuller_lift
from .ramified_gauss import RamifiedElement, gauss_sum, lambda_table, pi_valuation
from .trace_code import GeneratorMatrix, bruteforce_valuation, trace_codeword, weight_distribution

__all__ = [
    "AbelianCodeSpec", "BoundReport", "CriterionResult", "DegreeSetProgramInstance", "ExponentTuple",
    "FieldElement", "FieldTower", "GeneratorMatrix", "Polynomial", "RamifiedElement", "TraceDivError",
    "Valuation", "WittElement", "WittRing", "bounds_57_58", "bruteforce_valuation",
    "build_trace_representation", "build_tower", "count_solutions", "criterion_valuation",
    "cyclic_oracle_valuation", "delsarte_mceliece_valuation", "digit_knapsack", "gauss_sum",
    "general_bound_55", "homogeneous_bound", "inner_sum", "lambda_table", "mceliece_ell",
    "pi_valuation", "prop52_feasible", "search_extremal", "teichmuller_lift", "theorem51_program",
    "trace_codeword", "weight_distribution",
]
