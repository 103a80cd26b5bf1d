"""Truncated Taylor jets and the metric expression language."""

from .evaluate import (
    DomainError,
    ParamEnv,
    UnboundParameterError,
    eval_jet,
    eval_value,
    finite_diff_jet,
)
from .expr import (
    BinOp,
    Call,
    Const,
    Expr,
    ExprSyntaxError,
    Neg,
    Num,
    Param,
    Var,
    parse_expr,
    print_expr,
    to_expr,
)
from .jet import Jet3

__all__ = [
    "BinOp", "Call", "Const", "DomainError", "Expr", "ExprSyntaxError", "Jet3", "Neg",
    "Num", "Param", "ParamEnv", "UnboundParameterError", "Var", "eval_jet", "eval_value",
    "finite_diff_jet", "parse_expr", "print_expr", "to_expr",
]
