"""Degree-3 truncated Taylor jets of scalar fields in four variables."""

from __future__ import annotations

import math

import numpy as np

NVARS = 4
TINY = 1e-300


class DomainError(ValueError):
    """An elementary function was evaluated outside its domain."""


def _sym3(a: np.ndarray) -> np.ndarray:
    """Sum of the three distinct index placements of a (sym2 x vector) outer product."""
    return a + a.transpose(0, 2, 1) + a.transpose(2, 1, 0)


class Jet3:
    """Value, gradient, Hessian and third-derivative tensor at a point.

    Instances are immutable; every operation returns a new jet.
    """

    __slots__ = ("value", "grad", "hess", "third")

    def __init__(self, value, grad, hess, third):
        object.__setattr__(self, "value", float(value))
        for name, arr in (("grad", grad), ("hess", hess), ("third", third)):
            arr = np.array(arr, dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def __setattr__(self, name, value):
        raise AttributeError("Jet3 is immutable")

    def __repr__(self):
        return f"Jet3(value={self.value!r}, grad={self.grad.tolist()!r})"

    @classmethod
    def constant(cls, c: float) -> "Jet3":
        n = NVARS
        return cls(c, np.zeros(n), np.zeros((n, n)), np.zeros((n, n, n)))

    @classmethod
    def variable(cls, index: int, at: float) -> "Jet3":
        n = NVARS
        g = np.zeros(n)
        g[index] = 1.0
        return cls(at, g, np.zeros((n, n)), np.zeros((n, n, n)))

    @property
    def is_constant(self) -> bool:
        return not (self.grad.any() or self.hess.any() or self.third.any())

    def compose(self, f0: float, f1: float, f2: float, f3: float) -> "Jet3":
        """Chain rule for ``phi(self)`` given phi and its first three derivatives at ``self.value``."""
        g, h = self.grad, self.hess
        gg = np.multiply.outer(g, g)
        hess = f2 * gg + f1 * h
        third = (
            f3 * np.multiply.outer(gg, g)
            + f2 * _sym3(np.multiply.outer(h, g))
            + f1 * self.third
        )
        return Jet3(f0, f1 * g, hess, third)

    def __add__(self, other):
        if not isinstance(other, Jet3):
            return Jet3(self.value + other, self.grad, self.hess, self.third)
        return Jet3(self.value + other.value, self.grad + other.grad,
                    self.hess + other.hess, self.third + other.third)

    __radd__ = __add__

    def __neg__(self):
        return Jet3(-self.value, -self.grad, -self.hess, -self.third)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Jet3):
            return Jet3(self.value * other, self.grad * other,
                        self.hess * other, self.third * other)
        a, b = self, other
        ga_gb = np.multiply.outer(a.grad, b.grad)
        hess = a.hess * b.value + ga_gb + ga_gb.T + a.value * b.hess
        third = (
            a.third * b.value
            + _sym3(np.multiply.outer(a.hess, b.grad))
            + _sym3(np.multiply.outer(b.hess, a.grad))
            + a.value * b.third
        )
        return Jet3(a.value * b.value, a.grad * b.value + a.value * b.grad, hess, third)

    __rmul__ = __mul__

    def reciprocal(self) -> "Jet3":
        z = self.value
        if abs(z) < TINY:
            raise DomainError("division by zero")
        r = 1.0 / z
        return self.compose(r, -r * r, 2 * r ** 3, -6 * r ** 4)

    def __truediv__(self, other):
        if not isinstance(other, Jet3):
            if abs(other) < TINY:
                raise DomainError("division by zero")
            return self * (1.0 / other)
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def powc(self, c: float) -> "Jet3":
        """``self ** c`` for a constant exponent."""
        z = self.value
        if float(c).is_integer():
            k = int(c)
            if k < 0 and abs(z) < TINY:
                raise DomainError("zero raised to a negative power")
            coeffs = [1.0, k, k * (k - 1), k * (k - 1) * (k - 2)]
            vals = [coeffs[i] * (z ** (k - i) if coeffs[i] != 0 else 0.0) for i in range(4)]
            return self.compose(*vals)
        if z <= 0:
            raise DomainError(f"non-integer power of non-positive base {z!r}")
        return self.compose(z ** c, c * z ** (c - 1), c * (c - 1) * z ** (c - 2),
                            c * (c - 1) * (c - 2) * z ** (c - 3))

    def __pow__(self, other):
        if isinstance(other, Jet3):
            if other.is_constant:
                return self.powc(other.value)
            return exp(other * log(self))
        return self.powc(other)


def exp(a: Jet3) -> Jet3:
    e = math.exp(a.value)
    return a.compose(e, e, e, e)


def log(a: Jet3) -> Jet3:
    z = a.value
    if z <= 0:
        raise DomainError(f"log of non-positive value {z!r}")
    return a.compose(math.log(z), 1 / z, -1 / z ** 2, 2 / z ** 3)


def sqrt(a: Jet3) -> Jet3:
    z = a.value
    if z <= 0:
        raise DomainError(f"sqrt of non-positive value {z!r}")
    s = math.sqrt(z)
    return a.compose(s, 0.5 / s, -0.25 / s ** 3, 0.375 / s ** 5)


def sin(a: Jet3) -> Jet3:
    s, c = math.sin(a.value), math.cos(a.value)
    return a.compose(s, c, -s, -c)


def cos(a: Jet3) -> Jet3:
    s, c = math.sin(a.value), math.cos(a.value)
    return a.compose(c, -s, -c, s)


def tan(a: Jet3) -> Jet3:
    if abs(math.cos(a.value)) < TINY:
        raise DomainError("tan at a pole")
    t = math.tan(a.value)
    q = 1 + t * t
    return a.compose(t, q, 2 * t * q, q * (2 + 6 * t * t))


def sec(a: Jet3) -> Jet3:
    return cos(a).reciprocal()


def sinh(a: Jet3) -> Jet3:
    s, c = math.sinh(a.value), math.cosh(a.value)
    return a.compose(s, c, s, c)


def cosh(a: Jet3) -> Jet3:
    s, c = math.sinh(a.value), math.cosh(a.value)
    return a.compose(c, s, c, s)


FUNCTION_TABLE = {
    "exp": exp, "log": log, "sqrt": sqrt, "sin": sin, "cos": cos,
    "tan": tan, "sec": sec, "sinh": sinh, "cosh": cosh,
}
