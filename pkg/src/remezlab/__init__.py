"""Remez-type inequalities for trigonometric polynomials: bounds, extremals, audits and search."""

from .chebyshev import BoundKind, bound, cheb_T, log_bound, log_cheb_T
from .errors import (
    ChebyshevOverflow,
    ConstantOnLevel,
    ConstraintViolated,
    DegenerateDraw,
    DomainError,
    NoConvergence,
    NoFeasibleStart,
    NotEven,
    ParseError,
    RemezLabError,
    WitnessFailure,
)
from .extremal import equality_witness, extremal_classical, extremal_even
from .sublevel import CircleIntervalSet, LineIntervalSet, cheb_measure, deficiency, sublevel_set
from .trigpoly import AlgPoly, Parity, TrigPoly, evaluate, sup_norm

__version__ = "0.1.0"

__all__ = [
    "AlgPoly",
    "BoundKind",
    "ChebyshevOverflow",
    "CircleIntervalSet",
    "ConstantOnLevel",
    "ConstraintViolated",
    "DegenerateDraw",
    "DomainError",
    "LineIntervalSet",
    "NoConvergence",
    "NoFeasibleStart",
    "NotEven",
    "Parity",
    "ParseError",
    "RemezLabError",
    "TrigPoly",
    "WitnessFailure",
    "bound",
    "cheb_T",
    "cheb_measure",
    "deficiency",
    "equality_witness",
    "evaluate",
    "extremal_classical",
    "extremal_even",
    "log_bound",
    "log_cheb_T",
    "sublevel_set",
    "sup_norm",
]
