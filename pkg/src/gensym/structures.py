"""Almost (para-)Hermitian structures induced by 2-forms and their checks.

``J`` is defined from a 2-form by g(JX, Y) = Omega(X, Y), i.e. ``J = -g^{-1} Omega``
as a matrix acting on column vectors (``J[a, b] = J^a_b``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .curvature import ChristoffelJet, Curvature, MetricJet, covariant_derivative, tensor_norm_sq
from .jets import Expr, eval_jet, to_expr
from .jets.tensor import TensorJet, contract

DIM = 4


class IsotropicFormError(ValueError):
    pass


@dataclass
class TwoFormField:
    """Antisymmetric 4x4 array of expressions; the upper triangle is authoritative."""

    components: Sequence[Sequence[Expr]]
    params: Mapping[str, float] = field(default_factory=dict)
    label: str = ""

    def __post_init__(self):
        upper = {(i, j): to_expr(self.components[i][j]) for i in range(DIM) for j in range(i + 1, DIM)}
        self.components = [[upper.get((i, j)) for j in range(DIM)] for i in range(DIM)]
        self.params = dict(self.params)

    @classmethod
    def from_dict(cls, entries: Mapping[tuple, str], params=None, label="") -> "TwoFormField":
        """Build from ``{(i, j): expr}`` meaning expr * dx^i ^ dx^j (zero-based, any order)."""
        comps = [["0"] * DIM for _ in range(DIM)]
        acc: dict[tuple, list] = {}
        for (i, j), e in entries.items():
            if i == j:
                raise ValueError("dx^i ^ dx^i vanishes")
            key, sign = ((i, j), "") if i < j else ((j, i), "-")
            acc.setdefault(key, []).append(f"{sign}({e})")
        for (i, j), parts in acc.items():
            comps[i][j] = "+".join(parts)
        return cls(comps, params or {}, label)

    def with_params(self, **params) -> "TwoFormField":
        return TwoFormField(self.components, {**self.params, **params}, self.label)

    def jet(self, point, order: int = 2) -> TensorJet:
        point = np.asarray(point, dtype=float)
        arrays = [np.zeros((DIM, DIM) + (DIM,) * k) for k in range(4)]
        for i in range(DIM):
            for j in range(i + 1, DIM):
                jt = eval_jet(self.components[i][j], point, self.params)
                for k, part in enumerate((jt.value, jt.grad, jt.hess, jt.third)):
                    arrays[k][i, j] = part
                    arrays[k][j, i] = -part
        return TensorJet(arrays[0], arrays[1:order + 1])

    def value(self, point) -> np.ndarray:
        return self.jet(point, 0).value


@dataclass
class JField:
    J: np.ndarray
    kind: str  # "complex" or "paracomplex"

    def residuals(self, g) -> dict:
        J, g = self.J, np.asarray(g, dtype=float)
        s = -1.0 if self.kind == "complex" else 1.0
        return {
            "square": float(np.abs(J @ J - s * np.eye(DIM)).max()),
            "compatibility": float(np.abs(J.T @ g @ J + s * g).max()),
            "trace": float(abs(np.trace(J))),
        }


def two_form_norm_sq(omega, ginv) -> float:
    """||Omega||^2 = 1/2 Omega_ij Omega_kl g^ik g^jl."""
    return 0.5 * tensor_norm_sq(omega, ginv)


def j_matrix(omega, ginv) -> np.ndarray:
    return -np.asarray(ginv) @ np.asarray(omega)


def j_from_omega(omega, mj: MetricJet, point=None, tol: float = 1e-9) -> JField:
    """Structure J with g(JX, Y) = Omega(X, Y); the kind follows from the sign of J^2."""
    om = omega.value(point if point is not None else mj.point) if isinstance(omega, TwoFormField) \
        else np.asarray(omega, dtype=float)
    scale = max(1.0, float(np.abs(om).max()) ** 2 * float(np.abs(mj.ginv).max()))
    if abs(two_form_norm_sq(om, mj.ginv)) < tol * scale:
        raise IsotropicFormError("isotropic 2-form, no structure")
    J = j_matrix(om, mj.ginv)
    J2 = J @ J
    scale = max(1.0, float(np.abs(J2).max()))
    I = np.eye(DIM)
    if np.abs(J2 + I).max() < 1e-8 * scale:
        return JField(J, "complex")
    if np.abs(J2 - I).max() < 1e-8 * scale:
        return JField(J, "paracomplex")
    raise IsotropicFormError("2-form does not induce a (para-)complex structure: J^2 is not -+Id")


def exterior_derivative(jet: TensorJet) -> np.ndarray:
    """(dOmega)_ijk = d_i Omega_jk + d_j Omega_ki + d_k Omega_ij."""
    d = np.moveaxis(jet.d(1), -1, 0)  # d[i, j, k] = d_i Omega_jk
    return d + d.transpose(1, 2, 0) + d.transpose(2, 0, 1)


def check_closed(omega: TwoFormField, point) -> float:
    dom = exterior_derivative(omega.jet(point, 1))
    return float(max(abs(dom[i, j, k]) for i, j, k in ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3))))


def nabla_omega(omega: TwoFormField, cj: ChristoffelJet, point) -> np.ndarray:
    return covariant_derivative(omega.jet(point, 1), cj.gamma)


def check_parallel(omega: TwoFormField, cj: ChristoffelJet, point) -> float:
    return float(np.abs(nabla_omega(omega, cj, point)).max())


def norm_nabla_omega(omega: TwoFormField, cj: ChristoffelJet, mj: MetricJet, point=None) -> float:
    return tensor_norm_sq(nabla_omega(omega, cj, mj.point if point is None else point), mj.ginv)


def wedge4(a, b) -> float:
    """Coefficient of dx^0 ^ dx^1 ^ dx^2 ^ dx^3 in a ^ b for 2-forms given as matrices."""
    return float(a[0, 1] * b[2, 3] - a[0, 2] * b[1, 3] + a[0, 3] * b[1, 2]
                 + a[1, 2] * b[0, 3] - a[1, 3] * b[0, 2] + a[2, 3] * b[0, 1])


def symplectic_pair_check(op, om, point) -> dict:
    a = op.value(point) if isinstance(op, TwoFormField) else np.asarray(op, dtype=float)
    b = om.value(point) if isinstance(om, TwoFormField) else np.asarray(om, dtype=float)
    return {
        "wedge_mixed": abs(wedge4(a, b)),
        "wedge_sum": abs(wedge4(a, a) + wedge4(b, b)),
        "closed_p": check_closed(op, point) if isinstance(op, TwoFormField) else 0.0,
        "closed_m": check_closed(om, point) if isinstance(om, TwoFormField) else 0.0,
    }


def ricci_invariance(ric, J) -> float:
    J = J.J if isinstance(J, JField) else np.asarray(J, dtype=float)
    ric = np.asarray(ric, dtype=float)
    return float(np.abs(ric @ J - J @ ric).max())


def _apply(R: np.ndarray, J: np.ndarray, slots) -> np.ndarray:
    """R with J inserted in the given slots: R(.., J X, ..)."""
    out = R
    for s in slots:
        out = np.moveaxis(np.tensordot(out, J, axes=([s], [0])), -1, s)
    return out


def gray_identities(c, J: JField, mj=None) -> dict:
    """Residuals of the Gray identities (complex) or their para-Hermitian forms."""
    R = c.R if isinstance(c, Curvature) else np.asarray(c, dtype=float)
    Jm = J.J
    s = 1.0 if J.kind == "complex" else -1.0
    g1 = R - s * _apply(R, Jm, (2, 3))
    g2 = R - s * (_apply(R, Jm, (0, 1)) + _apply(R, Jm, (0, 2)) + _apply(R, Jm, (0, 3)))
    g3 = R - _apply(R, Jm, (0, 1, 2, 3))
    return {"G1": float(np.abs(g1).max()), "G2": float(np.abs(g2).max()), "G3": float(np.abs(g3).max())}


def j_jet(omega: TwoFormField, mj: MetricJet, point=None, order: int = 1) -> TensorJet:
    om = omega.jet(mj.point if point is None else point, order)
    return -contract("ak,kb->ab", mj.ginv_jet.truncate(order), om)


def nijenhuis_coordinate(J: TensorJet) -> np.ndarray:
    """N^d_ab for coordinate fields, from J and its first partials."""
    Jv = J.value
    dJ = J.d(1)  # dJ[d, b, c] = d_c J^d_b
    t1 = np.einsum("ca,dbc->dab", Jv, dJ)
    t3 = np.einsum("dc,cab->dab", Jv, dJ)  # J^d_c d_b J^c_a
    return t1 - t1.transpose(0, 2, 1) + t3 - t3.transpose(0, 2, 1)


def nijenhuis_frame(J: np.ndarray, c: np.ndarray) -> np.ndarray:
    """N(e_a, e_b)^f for left-invariant J and structure constants c[f, a, b]."""
    J = np.asarray(J, dtype=float)
    t1 = np.einsum("ca,db,fcd->fab", J, J, c)
    t2 = np.einsum("fg,ca,gcb->fab", J, J, c)
    t3 = np.einsum("fg,db,gad->fab", J, J, c)
    t4 = np.einsum("fg,gab->fab", J @ J, c)
    return t1 - t2 - t3 + t4


def nijenhuis(J, c=None) -> float:
    """Max |N| in coordinate mode (``J`` a jet) or frame mode (``J`` a matrix and ``c`` given)."""
    if c is not None:
        return float(np.abs(nijenhuis_frame(J, c)).max())
    return float(np.abs(nijenhuis_coordinate(J)).max())


@dataclass
class Distribution:
    """Rank-2 distribution given by spanning vector jets (shape (2, 4) plus partials)."""

    vectors: TensorJet

    @classmethod
    def constant(cls, vectors, order: int = 1) -> "Distribution":
        return cls(TensorJet.constant(np.asarray(vectors, dtype=float), DIM, order))


def eigen_distribution(Jj: TensorJet, sign: int) -> Distribution:
    """The +-1 eigenspace of a paracomplex J as the column space of (J +- Id)."""
    P = Jj + TensorJet.constant(sign * np.eye(DIM), DIM, Jj.order)
    cols = P.value
    best, pair = -1.0, (0, 1)
    for i in range(DIM):
        for j in range(i + 1, DIM):
            a, b = cols[:, i], cols[:, j]
            area = float(np.linalg.norm(np.outer(a, b) - np.outer(b, a)))
            if area > best:
                best, pair = area, (i, j)
    return Distribution(_columns(P, pair))


def _columns(P: TensorJet, pair) -> TensorJet:
    idx = list(pair)
    return TensorJet(P.value[:, idx].T, [np.moveaxis(d[:, idx], 1, 0) for d in P.derivs])


def check_walker(d: Distribution, mj: MetricJet, cj: ChristoffelJet, point=None) -> dict:
    V = d.vectors.value
    norms = np.linalg.norm(V, axis=1)
    Vn = V / norms[:, None]
    null = float(np.abs(Vn @ mj.g @ Vn.T).max())
    # (nabla_a v_i)^k = d_a v_i^k + Gamma^k_aj v_i^j
    dv = np.moveaxis(d.vectors.d(1), -1, 1)  # [i, a, k]
    nab = dv + np.einsum("kaj,ij->iak", cj.gamma, V)
    Q, _ = np.linalg.qr(V.T)
    off = nab - np.einsum("iak,kl,ml->iam", nab, Q, Q)
    par = float(np.abs(off / norms[:, None, None]).max())
    return {"null_residual": null, "parallel_residual": par}


def semisymmetry(c: Curvature, mj: MetricJet | None = None, cj=None, point=None) -> dict:
    """Residuals of R(X, Y).R = 0 and of [R(a, b), R(c, d)] = 0 on a basis."""
    R = c.R
    E = c.endomorphisms  # E[i, j] = R(e_i, e_j) as a matrix
    der = 0.0
    for i in range(DIM):
        for j in range(i + 1, DIM):
            A = E[i, j]
            # (A.R)_abcd = -(A^m_a R_mbcd + A^m_b R_amcd + A^m_c R_abmd + A^m_d R_abcm)
            t = (np.einsum("ma,mbcd->abcd", A, R) + np.einsum("mb,amcd->abcd", A, R)
                 + np.einsum("mc,abmd->abcd", A, R) + np.einsum("md,abcm->abcd", A, R))
            der = max(der, float(np.abs(t).max()))
    com = 0.0
    pairs = [(i, j) for i in range(DIM) for j in range(i + 1, DIM)]
    for p in pairs:
        for q in pairs:
            A, B = E[p], E[q]
            com = max(com, float(np.abs(A @ B - B @ A).max()))
    return {"derivation_residual": der, "commutation_residual": com}


__all__ = [
    "Distribution", "IsotropicFormError", "JField", "TwoFormField", "check_closed",
    "check_parallel", "check_walker", "eigen_distribution", "exterior_derivative",
    "gray_identities", "j_from_omega", "j_jet", "j_matrix", "nabla_omega", "nijenhuis",
    "nijenhuis_coordinate", "nijenhuis_frame", "norm_nabla_omega", "ricci_invariance",
    "semisymmetry", "symplectic_pair_check", "two_form_norm_sq", "wedge4",
]
