"""Tensor-valued truncated Taylor jets.

A :class:`TensorJet` stores a tensor ``value`` of shape ``S`` together with its
coordinate partials ``derivs[k-1]`` of shape ``S + (n,)*k``. Derivative axes
always trail the tensor axes. Bilinear operations follow the Leibniz rule, so
products of jets stay exact to the common truncation order.
"""

from __future__ import annotations

import itertools

import numpy as np

_DERIV_LETTERS = "PQR"


class TensorJet:
    __slots__ = ("value", "derivs")

    def __init__(self, value, derivs=()):
        self.value = np.asarray(value, dtype=float)
        self.derivs = tuple(np.asarray(d, dtype=float) for d in derivs)

    @property
    def order(self) -> int:
        return len(self.derivs)

    @property
    def shape(self) -> tuple:
        return self.value.shape

    @property
    def ndim(self) -> int:
        return self.value.ndim

    @property
    def dim(self) -> int:
        return self.derivs[0].shape[-1]

    def __repr__(self):
        return f"TensorJet(shape={self.shape}, order={self.order})"

    @classmethod
    def constant(cls, value, dim: int, order: int) -> "TensorJet":
        value = np.asarray(value, dtype=float)
        return cls(value, [np.zeros(value.shape + (dim,) * k) for k in range(1, order + 1)])

    def d(self, k: int) -> np.ndarray:
        """k-th derivative array (k=0 is the value)."""
        return self.value if k == 0 else self.derivs[k - 1]

    def truncate(self, order: int) -> "TensorJet":
        if order > self.order:
            raise ValueError(f"cannot raise jet order {self.order} to {order}")
        return TensorJet(self.value, self.derivs[:order])

    def partial(self) -> "TensorJet":
        """Jet of the coordinate gradient; the derivative index becomes the last tensor axis."""
        if not self.derivs:
            raise ValueError("jet carries no derivatives")
        return TensorJet(self.derivs[0], self.derivs[1:])

    def transpose(self, *perm) -> "TensorJet":
        """Permute tensor axes; derivative axes stay in place."""
        r = self.ndim
        out = []
        for k in range(self.order + 1):
            out.append(np.transpose(self.d(k), tuple(perm) + tuple(range(r, r + k))))
        return TensorJet(out[0], out[1:])

    def _map(self, fn) -> "TensorJet":
        return TensorJet(fn(self.value), [fn(d) for d in self.derivs])

    def __neg__(self):
        return self._map(np.negative)

    def __mul__(self, c):
        if isinstance(c, TensorJet):
            raise TypeError("use contract() for jet products")
        return self._map(lambda a: a * c)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self._map(lambda a: a / c)

    def __add__(self, other):
        n = min(self.order, other.order)
        return TensorJet(self.value + other.value,
                         [self.derivs[k] + other.derivs[k] for k in range(n)])

    def __sub__(self, other):
        return self + (-other)

    def einsum_unary(self, spec: str) -> "TensorJet":
        """Apply a linear einsum (traces, index shuffles) to every order."""
        ins, out = spec.split("->")
        res = []
        for k in range(self.order + 1):
            tail = _DERIV_LETTERS[:k]
            res.append(np.einsum(f"{ins}{tail}->{out}{tail}", self.d(k)))
        return TensorJet(res[0], res[1:])

    def with_derivative_basis(self, A: np.ndarray) -> "TensorJet":
        """Re-express derivatives after the linear substitution x = A y."""
        res = [self.value]
        for k, d in enumerate(self.derivs, start=1):
            for _ in range(k):
                # contract the leading derivative axis and rotate it to the back
                d = np.tensordot(d, A, axes=([self.ndim], [0]))
            res.append(d)
        return TensorJet(res[0], res[1:])


def contract(spec: str, a: TensorJet, b: TensorJet, order: int | None = None) -> TensorJet:
    """Bilinear einsum of two jets with the Leibniz rule up to ``order``."""
    n = min(a.order, b.order) if order is None else order
    ins, out = spec.split("->")
    sa, sb = ins.split(",")
    used = set(spec)
    if used & set(_DERIV_LETTERS):
        raise ValueError(f"einsum spec may not use {_DERIV_LETTERS}")
    res = []
    for k in range(n + 1):
        letters = _DERIV_LETTERS[:k]
        total = None
        for mask in itertools.product((0, 1), repeat=k):
            la = "".join(c for c, m in zip(letters, mask) if m == 0)
            lb = "".join(c for c, m in zip(letters, mask) if m == 1)
            term = np.einsum(f"{sa}{la},{sb}{lb}->{out}{letters}", a.d(len(la)), b.d(len(lb)))
            total = term if total is None else total + term
        res.append(total)
    return TensorJet(res[0], res[1:])


def _cofactor_inverse(m: np.ndarray) -> tuple[np.ndarray, float]:
    """Inverse and determinant of a small square matrix by cofactor expansion."""
    n = m.shape[0]
    if n == 1:
        det = m[0, 0]
        return np.array([[1.0 / det]]), det
    if n == 2:
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        adj = np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]])
        return adj / det, det
    cof = np.empty_like(m)
    idx = list(range(n))
    for i in range(n):
        for j in range(n):
            rows = idx[:i] + idx[i + 1:]
            cols = idx[:j] + idx[j + 1:]
            minor = m[np.ix_(rows, cols)]
            cof[i, j] = (-1) ** (i + j) * _det(minor)
    det = float(m[0] @ cof[0])
    return cof.T / det, det


def _det(m: np.ndarray) -> float:
    n = m.shape[0]
    if n == 1:
        return float(m[0, 0])
    if n == 2:
        return float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])
    return float(sum((-1) ** j * m[0, j] * _det(np.delete(m[1:], j, axis=1)) for j in range(n)))


def inverse(m: TensorJet) -> TensorJet:
    """Jet of the matrix inverse, built order by order from (M N)' = 0."""
    ninv, _ = _cofactor_inverse(m.value)
    n = TensorJet(ninv, [])
    for k in range(1, m.order + 1):
        # pad the unknown k-th order with zeros; the product's k-th order is then
        # everything except the M0 N_k term
        padded = TensorJet(n.value, list(n.derivs) + [np.zeros(ninv.shape + (m.dim,) * k)])
        prod = contract("ij,jk->ik", m, padded, order=k)
        nk = -np.einsum("ij,jk...->ik...", ninv, prod.d(k))
        n = TensorJet(n.value, list(n.derivs) + [nk])
    return n


def det(m: np.ndarray) -> float:
    return _det(np.asarray(m, dtype=float))


def matrix_inverse(m: np.ndarray) -> np.ndarray:
    return _cofactor_inverse(np.asarray(m, dtype=float))[0]


__all__ = ["TensorJet", "contract", "det", "inverse", "matrix_inverse"]
