"""Left-invariant metrics on four-dimensional Lie groups.

Structure constants are stored as ``c[k, i, j]`` with ``[e_i, e_j] = c^k_ij e_k``
in an orthonormal basis with signs ``eps``. Connection coefficients use the
same layout as Christoffel symbols: ``L[c, a, b]`` with ``nabla_{e_a} e_b =
L^c_ab e_c``, so the coordinate machinery in :mod:`gensym.curvature` applies
unchanged once curvature components are known (frame components of
left-invariant tensors are constant).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np

from .curvature import Curvature, covariant_derivative, curvature_from_lowered
from .jets.tensor import TensorJet

DIM = 4


@dataclass
class LieAlgebra4:
    c: np.ndarray
    eps: tuple = (1, 1, 1, 1)
    label: str = ""

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=float)
        self.eps = tuple(int(e) for e in self.eps)
        if self.c.shape != (DIM, DIM, DIM):
            raise ValueError("structure constants must have shape (4, 4, 4)")
        if np.abs(self.c + self.c.transpose(0, 2, 1)).max() > 1e-14:
            raise ValueError("structure constants must be antisymmetric in the lower indices")

    @property
    def g(self) -> np.ndarray:
        return np.diag(np.array(self.eps, dtype=float))

    def bracket(self, i: int, j: int) -> np.ndarray:
        return self.c[:, i, j].copy()

    def scaled(self, s: float) -> "LieAlgebra4":
        """Same group with the metric multiplied by 1/s^2."""
        return LieAlgebra4(self.c * s, self.eps, self.label)


def algebra_from_brackets(brackets: dict, eps=(1, 1, 1, 1), label: str = "") -> LieAlgebra4:
    """Build from ``{(i, j): coefficients}`` with 1-based indices as printed in tables."""
    c = np.zeros((DIM, DIM, DIM))
    for (i, j), coeffs in brackets.items():
        v = np.asarray(coeffs, dtype=float)
        c[:, i - 1, j - 1] += v
        c[:, j - 1, i - 1] -= v
    return LieAlgebra4(c, eps, label)


def jacobi_residuals(c: np.ndarray) -> np.ndarray:
    """Cyclic sum [[e_a,e_b],e_c] + [[e_b,e_c],e_a] + [[e_c,e_a],e_b] as [f, a, b, c]."""
    t = np.einsum("dab,fdc->fabc", c, c)
    return t + t.transpose(0, 2, 3, 1) + t.transpose(0, 3, 1, 2)


def jacobi_check(alg: LieAlgebra4) -> float:
    return float(np.abs(jacobi_residuals(alg.c)).max())


@dataclass
class FrameConnection:
    L: np.ndarray

    def metric_residual(self, eps) -> float:
        e = np.asarray(eps, dtype=float)
        # g(nabla_a e_b, e_c) + g(e_b, nabla_a e_c)
        low = np.einsum("c,cab->abc", e, self.L)
        return float(np.abs(low + low.transpose(0, 2, 1)).max())

    def torsion_residual(self, c) -> float:
        return float(np.abs(self.L - self.L.transpose(0, 2, 1) - c).max())


def koszul_connection(alg: LieAlgebra4) -> FrameConnection:
    """Levi-Civita connection of the left-invariant metric.

    2 g(nabla_a e_b, e_c) = g([a,b],c) - g([b,c],a) + g([c,a],b).
    """
    e = np.array(alg.eps, dtype=float)
    low = np.einsum("c,cab->abc", e, alg.c)  # g([a,b], c)
    two = low - low.transpose(2, 0, 1) + low.transpose(1, 2, 0)
    # low.transpose(2,0,1)[a,b,c] = low[b,c,a]; low.transpose(1,2,0)[a,b,c] = low[c,a,b]
    L = np.einsum("c,abc->cab", e, two) / 2.0
    return FrameConnection(L)


def frame_curvature(alg: LieAlgebra4, conn: FrameConnection | None = None) -> Curvature:
    """Curvature of the left-invariant metric in the orthonormal frame.

    Frame components are constant, so the returned jets carry zero partials;
    covariant derivatives then reduce to connection contractions.
    """
    conn = conn or koszul_connection(alg)
    L, c = conn.L, alg.c
    # (R(e_a, e_b) e_c)^f = L^d_bc L^f_ad - L^d_ac L^f_bd - c^d_ab L^f_dc, stored as up[f, c, a, b]
    up = (np.einsum("dbc,fad->fcab", L, L) - np.einsum("dac,fbd->fcab", L, L)
          - np.einsum("dab,fdc->fcab", c, L))
    g = alg.g
    R = np.einsum("fe,ecab->fcab", g, up)
    zero = lambda a: TensorJet.constant(a, DIM, 1)  # noqa: E731
    return curvature_from_lowered(zero(R), zero(g), zero(g))


def frame_covariant_derivative(T: np.ndarray, conn: FrameConnection) -> np.ndarray:
    """nabla of a left-invariant (0,k) tensor; the directional-derivative term vanishes."""
    return covariant_derivative(TensorJet.constant(T, DIM, 1), conn.L)


def frame_nabla_R(alg: LieAlgebra4, conn: FrameConnection, curv: Curvature) -> np.ndarray:
    return frame_covariant_derivative(curv.R, conn)


@dataclass
class BracketParams:
    a1: float = 0.0
    a2: float = 0.0
    a3: float = 0.0
    a4: float = 0.0
    a6: float = 0.0
    b1: float = 0.0
    b3: float = 0.0
    b4: float = 0.0
    b5: float = 0.0
    b6: float = 0.0
    c2: float = 0.0
    d5: float = 0.0

    @classmethod
    def names(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, n) for n in self.names()])

    @classmethod
    def from_array(cls, arr) -> "BracketParams":
        return cls(*[float(a) for a in arr])


PARA_EPS = (-1, -1, 1, 1)


def family_brackets(p: BracketParams) -> LieAlgebra4:
    """Six-bracket family admitting the para-Hermitian pair e^1^e^3 +- e^2^e^4."""
    a1, a2, a3, a4, a6 = p.a1, p.a2, p.a3, p.a4, p.a6
    b1, b3, b4, b5, b6 = p.b1, p.b3, p.b4, p.b5, p.b6
    c2, d5 = p.c2, p.d5
    return algebra_from_brackets({
        (1, 2): [a1, b1, -(2 * a3 + a4), b3 + 2 * b4],
        (1, 3): [a2, 0, c2, 0],
        (1, 4): [a3, b3, a6 - 2 * a1, -b1],
        (2, 3): [a4, b4, a1, 2 * b1 - b6],
        (2, 4): [0, b5, 0, d5],
        (3, 4): [a6, b6, -a3, b4],
    }, PARA_EPS, "family")


def jacobi_system(p: BracketParams) -> np.ndarray:
    """Left-hand sides of the fourteen polynomial Jacobi conditions of the family."""
    a1, a2, a3, a4, a6 = p.a1, p.a2, p.a3, p.a4, p.a6
    b1, b3, b4, b5, b6 = p.b1, p.b3, p.b4, p.b5, p.b6
    c2, d5 = p.c2, p.d5
    return np.array([
        a1 * a2 + a1 * b4 + a6 * (b3 + 2 * b4) + a3 * (2 * b1 - b6) - a4 * (b1 + c2),
        a2 * b1 + 2 * b1 * b3 + 2 * b4 * b6 - b4 * c2,
        a1 * (2 * a4 + b5) + a3 * (2 * a6 + d5),
        a4 * b5 - 2 * a3 * a4 - 2 * a1 * a6 - a6 * d5,
        b4 * b5 - a6 * b1 - a4 * b3 - a3 * b4 - a1 * b6 - b6 * d5,
        b4 * b5 - a2 * a3 - a6 * c2 - b6 * d5,
        2 * b3 * b4 - a2 * b3 + 2 * b1 * b6 - b6 * c2,
        b4 * (a2 + 2 * (b3 + b4)) - 2 * b1 ** 2 + b1 * (2 * b6 - c2),
        2 * a3 ** 2 - 2 * a1 ** 2 + a3 * b5 + a4 * b5 + a1 * d5 - a6 * d5,
        2 * a1 * b4 - a1 * b3 - a6 * b4 + b1 * b5 + a4 * b6 + a3 * (b1 + 2 * b6) + b3 * d5,
        a2 * a6 - 2 * a1 * a2 - b1 * b5 - a3 * c2 - b3 * d5,
        a6 * (b3 + 2 * b4) - b1 * (a4 - 2 * a3 + 2 * b5) + b6 * (b5 - a3) + b4 * (a1 + d5),
        b1 * d5 - 5 * a1 * b1 - a4 * (2 * b3 + b4) - a3 * (b3 + 6 * b4) - b3 * b5
        - b6 * (a6 + 2 * d5),
        a2 * (2 * a3 + a4) - 2 * a6 * b1 + a3 * b3 + 4 * a3 * b4 + a4 * b4 + a6 * b6
        + a1 * (5 * b1 - 2 * b6 + c2),
    ])


# The remark1-3 algebras expressed in the bracket family (matched row by row).
def remark_params(which: int, alpha: float) -> BracketParams:
    if which == 1:
        return BracketParams(a3=alpha, b5=-2 * alpha)
    if which == 2:
        return BracketParams(a1=-1, a3=1, a4=-1, a6=alpha, b5=2 * (alpha + 1))
    if which == 3:
        return BracketParams(a1=-1, a3=1, a4=-1, a6=-1, b5=alpha, d5=alpha)
    raise ValueError(f"no remark example {which}")


_S3 = math.sqrt(3.0)


def _type1(alpha, eta):
    return algebra_from_brackets({
        (1, 3): [1, 2 * alpha, 0, 0],
        (1, 4): [alpha, 0, 0, 0],
        (2, 3): [0, -1, 0, 0],
        (2, 4): [-2, -alpha, 0, 0],
        (3, 4): [0, 0, -2 * alpha, -2],
    }, (1, 1, 1, 1) if eta > 0 else PARA_EPS, f"type1(alpha={alpha}, eta={eta})")


def _type2(alpha):
    return algebra_from_brackets({
        (1, 2): [0, 0, -2 * alpha, 0],
        (1, 4): [alpha, 0, 0, 0],
        (2, 4): [0, -2 * alpha, 0, 0],
        (3, 4): [0, 0, -alpha, 0],
    }, PARA_EPS, f"type2(alpha={alpha})")


def _type3_pos(lam, as_printed=False):
    if lam <= 0:
        raise ValueError("type3_pos needs lambda > 0")
    s = 1.0 / math.sqrt(lam)
    # The e3/e4 signs of [e1,e3] and [e1,e4] follow from the connection table
    # (c = L_ab - L_ba); the literal table flips them and breaks Jacobi.
    t = -1.0 if as_printed else 1.0
    return algebra_from_brackets({
        (1, 2): s * _S3 / 3 * np.array([1, _S3, _S3, 1]),
        (1, 3): -s * _S3 / 6 * np.array([2, 0, t * _S3, -t]),
        (1, 4): -s / 2 * np.array([2, 0, t * _S3, -t]),
        (2, 4): -s * _S3 / 6 * np.array([2, 0, _S3, -1]),
        (2, 3): s / 6 * np.array([-6, 4 * _S3, -_S3, 9]),
    }, PARA_EPS, f"type3_pos(lambda={lam})" + (" as printed" if as_printed else ""))


def _type3_zero():
    return algebra_from_brackets({
        (1, 2): np.array([-_S3, 5, -3 * _S3, 1]) / 9,
        (1, 3): np.array([-15, -11 * _S3, 9, -13 * _S3]) / 18,
        (1, 4): np.array([_S3, -5, 3 * _S3, -1]) / 18,
        (2, 3): np.array([13 * _S3, 19, -3 * _S3, 29]) / 18,
        (2, 4): np.array([15, 11 * _S3, -9, 13 * _S3]) / 18,
        (3, 4): np.array([8 * _S3, 2, 3 * _S3, 13]) / 18,
    }, PARA_EPS, "type3_zero")


BUILTIN_ALGEBRAS = {
    "type1": ("alpha", "eta"),
    "type2": ("alpha",),
    "type3_pos": ("lambda",),
    "type3_pos_printed": ("lambda",),
    "type3_zero": (),
    "remark1": ("alpha",),
    "remark2": ("alpha",),
    "remark3": ("alpha",),
}


def builtin_algebra(name: str, params: dict | None = None, **kw) -> LieAlgebra4:
    """Catalogued algebras; an optional ``scale`` multiplies all brackets."""
    params = {**(params or {}), **kw}
    if name not in BUILTIN_ALGEBRAS:
        raise ValueError(f"unknown algebra {name!r}; choose from {sorted(BUILTIN_ALGEBRAS)}")
    missing = [p for p in BUILTIN_ALGEBRAS[name] if p not in params]
    if missing:
        raise ValueError(f"algebra {name!r} needs parameter(s) {missing}")
    if name == "type1":
        alg = _type1(float(params["alpha"]), float(params["eta"]))
    elif name == "type2":
        alg = _type2(float(params["alpha"]))
    elif name == "type3_pos":
        alg = _type3_pos(float(params["lambda"]))
    elif name == "type3_pos_printed":
        alg = _type3_pos(float(params["lambda"]), as_printed=True)
    elif name == "type3_zero":
        alg = _type3_zero()
    else:
        which = int(name[-1])
        alg = family_brackets(remark_params(which, float(params["alpha"])))
        alg.label = f"{name}(alpha={params['alpha']})"
    scale = float(params.get("scale", 1.0))
    return alg if scale == 1.0 else alg.scaled(scale)


# Para-Hermitian structures attached to the family: Omega_+- = e^1^e^3 +- e^2^e^4.
def para_forms(sign: int) -> np.ndarray:
    om = np.zeros((DIM, DIM))
    om[0, 2], om[2, 0] = 1, -1
    om[1, 3], om[3, 1] = sign, -sign
    return om


__all__ = [
    "BUILTIN_ALGEBRAS", "BracketParams", "FrameConnection", "LieAlgebra4", "PARA_EPS",
    "algebra_from_brackets", "builtin_algebra", "family_brackets", "frame_covariant_derivative",
    "frame_curvature", "frame_nabla_R", "jacobi_check", "jacobi_residuals", "jacobi_system",
    "koszul_connection", "para_forms", "remark_params",
]
