from __future__ import annotations

import itertools
import math
from typing import Mapping

import numpy as np

from .expr import Call, Const, Expr, Neg, Num, Param, Var, has_variables, to_expr
from .jet import FUNCTION_TABLE, NVARS, DomainError, Jet3

ParamEnv = Mapping[str, float]

_CONSTANTS = {"pi": math.pi, "e": math.e}


class UnboundParameterError(KeyError):
    def __str__(self):
        return f"unbound parameter {self.args[0]!r}"


def _eval(node: Expr, point, env: ParamEnv) -> Jet3:
    if isinstance(node, Num):
        return Jet3.constant(node.value)
    if isinstance(node, Var):
        i = node.index
        return Jet3.variable(i, point[i])
    if isinstance(node, Const):
        return Jet3.constant(_CONSTANTS[node.name])
    if isinstance(node, Param):
        try:
            return Jet3.constant(float(env[node.name]))
        except KeyError:
            raise UnboundParameterError(node.name) from None
    if isinstance(node, Neg):
        return -_eval(node.arg, point, env)
    if isinstance(node, Call):
        return FUNCTION_TABLE[node.func](_eval(node.arg, point, env))
    left = _eval(node.left, point, env)
    if node.op == "^" and not has_variables(node.right):
        return left.powc(_eval(node.right, point, env).value)
    right = _eval(node.right, point, env)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    if node.op == "*":
        return left * right
    if node.op == "/":
        return left / right
    return left ** right


def eval_jet(e, point, env: ParamEnv | None = None) -> Jet3:
    """Value and partial derivatives up to order three of ``e`` at ``point``.

    Derivatives come from jet arithmetic, so they are exact up to rounding.
    """
    point = np.asarray(point, dtype=float)
    if point.shape != (NVARS,):
        raise ValueError(f"point must have {NVARS} coordinates, got shape {point.shape}")
    return _eval(to_expr(e), point, env or {})


def eval_value(e, point, env: ParamEnv | None = None) -> float:
    return eval_jet(e, point, env).value


def _value_only(node: Expr, point, env: ParamEnv) -> float:
    # plain float evaluation sharing the jet evaluator's domain rules
    return _eval(node, point, env).value


def finite_diff_jet(e, point, env: ParamEnv | None = None, h: float = 1e-4) -> Jet3:
    """Central-difference estimate of the same derivatives as :func:`eval_jet`.

    Each order is the composition of one-step central differences along the
    requested axes, so mixed and repeated indices use the same stencil.
    Test oracle only.
    """
    if not 1e-5 <= h <= 1e-2:
        raise ValueError("step must lie in [1e-5, 1e-2]")
    node = to_expr(e)
    env = env or {}
    x0 = np.asarray(point, dtype=float)
    cache: dict[tuple, float] = {}

    def f(offset: tuple) -> float:
        if offset not in cache:
            cache[offset] = _value_only(node, x0 + h * np.array(offset, dtype=float), env)
        return cache[offset]

    def diff(axes: tuple) -> float:
        total = 0.0
        for signs in itertools.product((1, -1), repeat=len(axes)):
            off = [0, 0, 0, 0]
            for ax, s in zip(axes, signs):
                off[ax] += s
            total += math.prod(signs) * f(tuple(off))
        return total / (2 * h) ** len(axes)

    n = NVARS
    grad = np.array([diff((i,)) for i in range(n)])
    hess = np.zeros((n, n))
    third = np.zeros((n, n, n))
    for i, j in itertools.combinations_with_replacement(range(n), 2):
        hess[i, j] = hess[j, i] = diff((i, j))
    for i, j, k in itertools.combinations_with_replacement(range(n), 3):
        val = diff((i, j, k))
        for p in set(itertools.permutations((i, j, k))):
            third[p] = val
    return Jet3(f((0, 0, 0, 0)), grad, hess, third)


__all__ = ["DomainError", "ParamEnv", "UnboundParameterError", "eval_jet", "eval_value",
           "finite_diff_jet"]
