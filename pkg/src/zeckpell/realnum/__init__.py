"""Certified arbitrary-precision real arithmetic."""

from .expr import (
    ALPHA,
    Abs,
    BinOp,
    Comparison,
    ConstExpr,
    ExpressionSyntaxError,
    GoldenRatio,
    Log,
    Neg,
    Power,
    PrecisionExhausted,
    QuadraticNumber,
    Rational,
    Sqrt,
    approx,
    as_expr,
    compare_certified,
    const,
    eval_at_working_precision,
    eval_expr,
    evaluate,
    exact_quadratic,
    log,
    parse_prefix,
    sqrt,
    to_prefix,
)
from .interval import IntervalDivisionByZero, NonPositiveLogArgument, RealInterval

__all__ = [
    "ALPHA",
    "Abs",
    "BinOp",
    "Comparison",
    "ConstExpr",
    "ExpressionSyntaxError",
    "GoldenRatio",
    "IntervalDivisionByZero",
    "Log",
    "Neg",
    "NonPositiveLogArgument",
    "Power",
    "PrecisionExhausted",
    "QuadraticNumber",
    "Rational",
    "RealInterval",
    "Sqrt",
    "approx",
    "as_expr",
    "compare_certified",
    "const",
    "eval_at_working_precision",
    "eval_expr",
    "evaluate",
    "exact_quadratic",
    "log",
    "parse_prefix",
    "sqrt",
    "to_prefix",
]
