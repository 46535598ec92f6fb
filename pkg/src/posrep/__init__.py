"""Quasi-linear pos-representation of preferences and extended affine VCG mechanisms."""

from .errors import PosrepError
from .mechanism import MechanismSpec, Outcome, Pivot, RepresentationMode, choose_alternative, run, verify_pivot_bound
from .pwl import MonotoneMap, PiecewiseLinearCurve, alignment_level, pwl_eval, pwl_inverse
from .representation import Kind, check_type_conditions, classify, is_parallel, is_posrep_of, normalize_min_zero
from .roberts_fit import AllocationTable, fit_affine_maximizer, predict
from .utility import AlternativeSet, UtilityFunction, Valuation, prefers, ql_from_valuation, utility_eval
from .verification import Agent, Scenario, enumerate_ic_onto_no_transfer, is_dictatorial, verify_ic, verify_onto

__version__ = "0.1.0"

__all__ = [
    "Agent",
    "AllocationTable",
    "AlternativeSet",
    "Kind",
    "MechanismSpec",
    "MonotoneMap",
    "Outcome",
    "PiecewiseLinearCurve",
    "Pivot",
    "PosrepError",
    "RepresentationMode",
    "Scenario",
    "UtilityFunction",
    "Valuation",
    "alignment_level",
    "check_type_conditions",
    "choose_alternative",
    "classify",
    "enumerate_ic_onto_no_transfer",
    "fit_affine_maximizer",
    "is_dictatorial",
    "is_parallel",
    "is_posrep_of",
    "normalize_min_zero",
    "predict",
    "prefers",
    "pwl_eval",
    "pwl_inverse",
    "ql_from_valuation",
    "run",
    "utility_eval",
    "verify_ic",
    "verify_onto",
    "verify_pivot_bound",
]
