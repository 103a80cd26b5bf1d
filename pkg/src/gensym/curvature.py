"""Pointwise curvature of four-dimensional pseudo-Riemannian metrics.

Index conventions
-----------------
* ``gamma[k, i, j]`` is the Christoffel symbol Gamma^k_ij.
* ``R[a, b, c, d]`` is the (0,4) curvature with R_abab equal to the sectional
  curvature of the (a, b) plane times its area, i.e. ``R_abcd = g_ae R^e_bcd``
  with ``R^a_bcd = d_c Gamma^a_db - d_d Gamma^a_cb + Gamma^a_ce Gamma^e_db -
  Gamma^a_de Gamma^e_cb``. With this convention the Type I algebra has
  R_1212 = 2(alpha^2+1).
* ``ricci[b, d] = R^a_bad``; ``ric_op = g^{-1} ricci``; ``tau = tr ric_op``.
* Kulkarni-Nomizu: ``(A o B)_ijkl = A_ik B_jl + A_jl B_ik - A_il B_jk - A_jk B_il``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .jets import Expr, eval_jet, print_expr, to_expr
from .jets.tensor import TensorJet, contract, det, inverse

DIM = 4


class DegenerateMetricError(ValueError):
    pass


@dataclass
class MetricField:
    """Symmetric 4x4 array of metric component expressions plus parameter values."""

    components: Sequence[Sequence[Expr]]
    params: Mapping[str, float] = field(default_factory=dict)
    label: str = ""

    def __post_init__(self):
        upper = {(i, j): to_expr(self.components[i][j]) for i in range(DIM) for j in range(i, DIM)}
        self.components = [[upper[min(i, j), max(i, j)] for j in range(DIM)] for i in range(DIM)]
        self.params = dict(self.params)

    @classmethod
    def from_strings(cls, rows, params=None, label="", validate_lower=True) -> "MetricField":
        """Build from an upper-triangle-authoritative array of expression strings.

        Lower-triangle entries that are present (not ``None``) must parse to the
        same tree as their upper-triangle mirror.
        """
        if len(rows) != DIM or any(len(r) != DIM for r in rows):
            raise ValueError("metric must be a 4x4 array")
        parsed = [[None if rows[i][j] is None else to_expr(rows[i][j]) for j in range(DIM)]
                  for i in range(DIM)]
        for i in range(DIM):
            for j in range(i):
                if validate_lower and parsed[i][j] is not None and parsed[i][j] != parsed[j][i]:
                    raise ValueError(
                        f"g[{i}][{j}] = {print_expr(parsed[i][j])!r} does not match "
                        f"g[{j}][{i}] = {print_expr(parsed[j][i])!r}")
        for i in range(DIM):
            for j in range(i, DIM):
                if parsed[i][j] is None:
                    raise ValueError(f"missing metric component g[{i}][{j}]")
        return cls(parsed, params or {}, label)

    def with_params(self, **params) -> "MetricField":
        merged = {**self.params, **params}
        return MetricField(self.components, merged, self.label)


@dataclass
class MetricJet:
    """Metric at a point with partials up to order three."""

    jet: TensorJet
    ginv_jet: TensorJet
    signature: tuple[int, int]
    point: np.ndarray

    @property
    def g(self):
        return self.jet.value

    @property
    def dg(self):
        return self.jet.d(1)

    @property
    def d2g(self):
        return self.jet.d(2)

    @property
    def d3g(self):
        return self.jet.d(3)

    @property
    def ginv(self):
        return self.ginv_jet.value


def _signature(g: np.ndarray) -> tuple[int, int]:
    ev = np.linalg.eigvalsh(g)
    return int((ev > 0).sum()), int((ev < 0).sum())


def metric_jet_from_tensor(jet: TensorJet, point=None) -> MetricJet:
    g = jet.value
    scale = np.abs(g).max()
    if scale == 0 or abs(det(g)) < 1e-12 * scale ** DIM:
        raise DegenerateMetricError(
            f"degenerate metric at {None if point is None else [float(t) for t in point]}")
    return MetricJet(jet, inverse(jet), _signature(g),
                     np.zeros(DIM) if point is None else np.asarray(point, dtype=float))


def metric_jet(m: MetricField, point) -> MetricJet:
    point = np.asarray(point, dtype=float)
    cache: dict[Expr, object] = {}
    n = DIM
    arrays = [np.zeros((n,) * (2 + k)) for k in range(4)]
    for i in range(n):
        for j in range(i, n):
            e = m.components[i][j]
            if e not in cache:
                cache[e] = eval_jet(e, point, m.params)
            jt = cache[e]
            for k, part in enumerate((jt.value, jt.grad, jt.hess, jt.third)):
                arrays[k][i, j] = part
                arrays[k][j, i] = part
    return metric_jet_from_tensor(TensorJet(arrays[0], arrays[1:]), point)


def linear_change(mj: MetricJet, A) -> MetricJet:
    """Metric jet in coordinates y with x = A y (A constant and invertible).

    ``mj`` must be evaluated at the image point x = A y.
    """
    A = np.asarray(A, dtype=float)
    jet = mj.jet.with_derivative_basis(A)
    Aj = TensorJet.constant(A, DIM, jet.order)
    jet = contract("ai,ab->ib", Aj, jet)
    jet = contract("ib,bj->ij", jet, Aj)
    return metric_jet_from_tensor(jet, np.linalg.solve(A, mj.point))


@dataclass
class ChristoffelJet:
    jet: TensorJet  # gamma[k, i, j] with two orders of derivatives

    @property
    def gamma(self):
        return self.jet.value

    @property
    def dgamma(self):
        return self.jet.d(1)

    @property
    def d2gamma(self):
        return self.jet.d(2)


def christoffel(mj: MetricJet) -> ChristoffelJet:
    """Levi-Civita symbols Gamma^k_ij = 1/2 g^kl (d_i g_jl + d_j g_il - d_l g_ij)."""
    dg = mj.jet.partial()  # dg[a, b, m] = d_m g_ab
    # combo[i, j, l] = d_i g_jl + d_j g_il - d_l g_ij
    combo = dg.einsum_unary("jli->ijl") + dg.einsum_unary("ilj->ijl") - dg
    ginv = mj.ginv_jet.truncate(dg.order)
    return ChristoffelJet(contract("kl,ijl->kij", ginv, combo) * 0.5)


@dataclass
class Curvature:
    """(0,4) curvature and its traces as first-order jets."""

    R_jet: TensorJet
    ricci_jet: TensorJet
    tau_jet: TensorJet
    weyl_jet: TensorJet
    ric_op: np.ndarray
    g: np.ndarray
    ginv: np.ndarray

    @property
    def R(self):
        return self.R_jet.value

    @property
    def dR(self):
        return self.R_jet.d(1)

    @property
    def ricci(self):
        return self.ricci_jet.value

    @property
    def tau(self) -> float:
        return float(self.tau_jet.value)

    @property
    def weyl(self):
        return self.weyl_jet.value

    @property
    def endomorphisms(self) -> np.ndarray:
        """``E[i, j]`` is the curvature endomorphism of the (i, j) plane as a matrix acting on vectors."""
        # R^a_{b i j} = g^{ae} R_{e b i j}
        up = np.einsum("ae,ebij->ijab", self.ginv, self.R)
        return up


def kulkarni_nomizu(A, B) -> np.ndarray:
    """Kulkarni-Nomizu product of two symmetric 2-tensors."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    X = np.einsum("ik,jl->ijkl", A, B)
    Y = np.einsum("ik,jl->ijkl", B, A)
    return X + Y - X.transpose(0, 1, 3, 2) - Y.transpose(0, 1, 3, 2)


def kulkarni_nomizu_jet(A: TensorJet, B: TensorJet) -> TensorJet:
    X = contract("ik,jl->ijkl", A, B)
    Y = contract("ik,jl->ijkl", B, A)
    return X + Y - X.transpose(0, 1, 3, 2) - Y.transpose(0, 1, 3, 2)


def _scale(s: TensorJet, t: TensorJet) -> TensorJet:
    idx = "ijkl"[:t.ndim]
    return contract(f",{idx}->{idx}", s, t)


def weyl_from(R: TensorJet, ricci: TensorJet, tau: TensorJet, g: TensorJet) -> TensorJet:
    """W = R - 1/2 (rho - tau/4 g) o g - tau/24 g o g."""
    rho0 = ricci - _scale(tau, g) * 0.25
    return (R - kulkarni_nomizu_jet(rho0, g) * 0.5
            - _scale(tau, kulkarni_nomizu_jet(g, g)) * (1.0 / 24.0))


def curvature_from_lowered(R: TensorJet, g: TensorJet, ginv: TensorJet) -> Curvature:
    order = R.order
    g = g.truncate(order)
    ginv = ginv.truncate(order)
    ricci = contract("ac,abcd->bd", ginv, R)
    tau = contract("bd,bd->", ginv, ricci)
    weyl = weyl_from(R, ricci, tau, g)
    ric_op = ginv.value @ ricci.value
    return Curvature(R, ricci, tau, weyl, ric_op, g.value, ginv.value)


def riemann(cj: ChristoffelJet, mj: MetricJet) -> Curvature:
    G = cj.jet.truncate(cj.jet.order - 1)
    dG = cj.jet.partial()  # dG[a, b, c, m] = d_m Gamma^a_bc
    # d_c Gamma^a_db -> [a, b, c, d]
    t1 = dG.einsum_unary("adbc->abcd")
    q = contract("ace,edb->abcd", G, G)
    up = t1 - t1.transpose(0, 1, 3, 2) + q - q.transpose(0, 1, 3, 2)
    g = mj.jet.truncate(up.order)
    R = contract("ae,ebcd->abcd", g, up)
    return curvature_from_lowered(R, mj.jet, mj.ginv_jet)


def covariant_derivative(T: TensorJet, gamma) -> np.ndarray:
    """(nabla T)[m, i, ...] = d_m T_i... minus one Gamma contraction per slot."""
    gamma = np.asarray(gamma, dtype=float)
    k = T.ndim
    out = np.moveaxis(T.d(1), -1, 0).copy()
    letters = "abcdefgh"[:k]
    for s in range(k):
        src = letters[:s] + "z" + letters[s + 1:]
        out -= np.einsum(f"zm{letters[s]},{src}->m{letters}", gamma, T.value)
    return out


def tensor_norm_sq(T, ginv) -> float:
    """Full contraction of T with itself using the inverse metric on every slot."""
    T = np.asarray(T, dtype=float)
    U = T
    for ax in range(T.ndim):
        U = np.moveaxis(np.tensordot(ginv, U, axes=([1], [ax])), 0, ax)
    return float(np.sum(T * U))


def raise_first(T, ginv) -> np.ndarray:
    return np.tensordot(ginv, T, axes=([1], [0]))


def curvature_at(m: MetricField, point) -> tuple[MetricJet, ChristoffelJet, Curvature]:
    """Convenience pipeline: metric jet, Christoffel jet and curvature at ``point``."""
    mj = metric_jet(m, point)
    cj = christoffel(mj)
    return mj, cj, riemann(cj, mj)
