"""Affine surfaces and their Riemannian extensions to the cotangent bundle.

Surface coordinates (x1, x2) are the chart variables x, y; the fibre
coordinates (x1', x2') are u, v. Curvature of the affine connection uses the
same component formula as :mod:`gensym.curvature`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .curvature import MetricField
from .jets import eval_jet, print_expr, to_expr
from .jets.tensor import TensorJet, contract

SURFACE_VARS = ("x", "y")
FIBRE_VARS = ("u", "v")


@dataclass
class AffineSurface:
    """Christoffel symbols ``gamma[k][i][j]`` (zero-based) as expressions in x, y."""

    gamma: list
    params: Mapping[str, float] = field(default_factory=dict)
    label: str = ""

    def __post_init__(self):
        g = [[[to_expr(self.gamma[k][min(i, j)][max(i, j)]) for j in range(2)] for i in range(2)]
             for k in range(2)]
        for k in range(2):
            if self.gamma[k][1][0] is not None and to_expr(self.gamma[k][1][0]) != g[k][0][1]:
                raise ValueError(f"Gamma^{k + 1}_21 must equal Gamma^{k + 1}_12")
        self.gamma = g
        self.params = dict(self.params)

    @classmethod
    def from_keys(cls, entries: Mapping[str, str], params=None, label="") -> "AffineSurface":
        """Build from ``{"kij": expr}`` with one-based digit keys; missing entries are zero."""
        g = [[["0", "0"], [None, "0"]] for _ in range(2)]
        seen = {}
        for key, e in entries.items():
            if len(key) != 3 or any(c not in "12" for c in key):
                raise ValueError(f"bad Christoffel key {key!r}; expected digits k,i,j in 1..2")
            k, i, j = (int(c) - 1 for c in key)
            a, b = min(i, j), max(i, j)
            ex = to_expr(e)
            if (k, a, b) in seen and seen[k, a, b] != ex:
                raise ValueError(f"Gamma^{k + 1}_{i + 1}{j + 1} is not symmetric in the lower indices")
            seen[k, a, b] = ex
            g[k][a][b] = ex
        for k in range(2):
            g[k][1][0] = g[k][0][1]
        return cls(g, params or {}, label)

    def jet(self, point, order: int = 2) -> TensorJet:
        """Gamma as a 2-dimensional tensor jet at ``point`` = (x1, x2)."""
        p4 = np.array([point[0], point[1], 0.0, 0.0])
        arrays = [np.zeros((2, 2, 2) + (2,) * k) for k in range(4)]
        for k in range(2):
            for i in range(2):
                for j in range(2):
                    jt = eval_jet(self.gamma[k][i][j], p4, self.params)
                    parts = (jt.value, jt.grad[:2], jt.hess[:2, :2], jt.third[:2, :2, :2])
                    for o, part in enumerate(parts):
                        arrays[o][k, i, j] = part
        return TensorJet(arrays[0], arrays[1:order + 1])


@dataclass
class PhiTensor:
    phi: list

    def __post_init__(self):
        a = [[to_expr(self.phi[min(i, j)][max(i, j)]) for j in range(2)] for i in range(2)]
        if self.phi[1][0] is not None and to_expr(self.phi[1][0]) != a[0][1]:
            raise ValueError("Phi must be symmetric")
        self.phi = a

    @classmethod
    def zero(cls) -> "PhiTensor":
        return cls([["0", "0"], ["0", "0"]])


def riemannian_extension(s: AffineSurface, phi: PhiTensor | None = None, label: str = "") -> MetricField:
    """Metric (-2 x_k' Gamma^k_ij + Phi_ij) on the base block, identity off-diagonal, zero fibre block."""
    phi = phi or PhiTensor.zero()
    rows = [["0"] * 4 for _ in range(4)]
    for i in range(2):
        for j in range(i, 2):
            g1 = print_expr(s.gamma[0][i][j])
            g2 = print_expr(s.gamma[1][i][j])
            ph = print_expr(phi.phi[i][j])
            rows[i][j] = f"-2*u*({g1}) - 2*v*({g2}) + ({ph})"
    rows[0][2] = rows[1][3] = "1"
    return MetricField.from_strings(rows, s.params, label or f"extension of {s.label}".strip(),
                                    validate_lower=False)


@dataclass
class AffineCurvature:
    R: np.ndarray  # R[a, b, c, d] = R^a_bcd
    ricci: np.ndarray  # ricci[b, d] = R^a_bad, possibly non-symmetric
    ricci_jet: TensorJet = field(repr=False, default=None)


def _curvature_jet(G: TensorJet) -> TensorJet:
    dG = G.partial()  # dG[a, b, c, m] = d_m Gamma^a_bc
    G0 = G.truncate(dG.order)
    t1 = dG.einsum_unary("adbc->abcd")
    q = contract("ace,edb->abcd", G0, G0)
    return t1 - t1.transpose(0, 1, 3, 2) + q - q.transpose(0, 1, 3, 2)


def affine_curvature(s: AffineSurface, point) -> AffineCurvature:
    Rj = _curvature_jet(s.jet(point, 2))
    ric = Rj.einsum_unary("abad->bd")
    return AffineCurvature(Rj.value, ric.value, ric)


def ricci_checks(s: AffineSurface, points, tol: float = 1e-10) -> dict:
    sym, nondeg = True, True
    worst_sym, min_det = 0.0, np.inf
    for p in points:
        ric = affine_curvature(s, p).ricci
        asym = float(np.abs(ric - ric.T).max())
        det = abs(float(np.linalg.det(ric)))
        worst_sym, min_det = max(worst_sym, asym), min(min_det, det)
        sym &= asym < tol
        nondeg &= det > tol
    return {"symmetric": bool(sym), "nondegenerate": bool(nondeg),
            "symmetry_residual": worst_sym, "min_abs_det": float(min_det)}


def projectively_flat_check(s: AffineSurface, points) -> float:
    """Codazzi residual of the symmetrized Ricci tensor plus its skew part.

    (nabla_a rho^s)_bc - (nabla_b rho^s)_ac together with rho_bc - rho_cb.
    """
    worst = 0.0
    for p in points:
        G = s.jet(p, 2)
        ac = affine_curvature(s, p)
        ric = ac.ricci_jet
        rs = (ric + ric.transpose(1, 0)) * 0.5
        gam = G.value
        d = np.moveaxis(rs.d(1), -1, 0)  # d[a, b, c] = d_a rho^s_bc
        nab = d - np.einsum("eab,ec->abc", gam, rs.value) - np.einsum("eac,be->abc", gam, rs.value)
        codazzi = float(np.abs(nab - nab.transpose(1, 0, 2)).max())
        skew = float(np.abs(ac.ricci - ac.ricci.T).max())
        worst = max(worst, codazzi, skew)
    return worst


DERDZINSKI_C = "e^(-(1/3)*log(4))"


def derdzinski_surface() -> AffineSurface:
    c = DERDZINSKI_C
    return AffineSurface.from_keys({"111": f"-{c}", "212": c, "122": c}, label="derdzinski")


def derdzinski_phi() -> PhiTensor:
    d = "-(3/16)*lambda*e^((7/6)*log(4))"
    return PhiTensor([[d, "0"], [None, d]])


def plumbing_metric(f: str, params=None) -> MetricField:
    """Flat connection with Phi = f(x, y) dy o dy."""
    s = AffineSurface.from_keys({}, params or {}, "flat")
    return riemannian_extension(s, PhiTensor([["0", "0"], [None, f]]), f"plumbing f={f}")


__all__ = [
    "AffineCurvature", "AffineSurface", "DERDZINSKI_C", "PhiTensor", "affine_curvature",
    "derdzinski_phi", "derdzinski_surface", "plumbing_metric", "projectively_flat_check",
    "ricci_checks", "riemannian_extension",
]
