"""symkawa: symbolic verification of point-symmetry structure for
fifth-order dispersive evolution equations with time-dependent
coefficients, plus a spectral numeric cross-check."""

__version__ = "0.1.0"

from .assumptions import AssumptionSet
from .calculus import (
    Zeroness,
    differentiate,
    eval_numeric,
    is_zero,
    normalize,
    substitute,
)
from .exprs import Expr, ExprError
from .parser import ParseError, parse

__all__ = [
    "AssumptionSet",
    "Expr",
    "ExprError",
    "ParseError",
    "Zeroness",
    "__version__",
    "differentiate",
    "eval_numeric",
    "is_zero",
    "normalize",
    "parse",
    "substitute",
]
