"""Two-forms in dimension four: orthonormal frames, Hodge star, self-dual bases,
the curvature operator and the eigenstructure of W+-.

Two-forms are stored either as antisymmetric 4x4 arrays or as 6-vectors on
the pair basis ``PAIRS`` = (12, 13, 14, 23, 24, 34), zero-based below.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .curvature import Curvature, DegenerateMetricError, MetricJet

PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
_PAIR_INDEX = {p: k for k, p in enumerate(PAIRS)}
_MAX_DRAWS = 64


class NullPileUpError(DegenerateMetricError):
    pass


def perm_sign(p) -> int:
    p = list(p)
    s = 1
    for i, j in itertools.combinations(range(len(p)), 2):
        if p[i] > p[j]:
            s = -s
    return s


@dataclass
class Frame:
    vectors: np.ndarray  # rows e_a in coordinate components
    eps: tuple
    orientation: int

    def coframe(self, g) -> np.ndarray:
        """Rows theta^a with theta^a(e_b) = delta^a_b."""
        return np.asarray(self.eps, dtype=float)[:, None] * (self.vectors @ g)

    def flipped(self) -> "Frame":
        v = self.vectors.copy()
        v[-1] = -v[-1]
        return Frame(v, self.eps, -self.orientation)

    def oriented(self, orientation: int) -> "Frame":
        return self if orientation == self.orientation else self.flipped()

    def residual(self, g) -> float:
        return float(np.abs(self.vectors @ g @ self.vectors.T - np.diag(self.eps)).max())


def orthonormalize(mj_or_g, seed: int = 0) -> Frame:
    """Pseudo-orthonormal frame by Gram-Schmidt with pivoting on |g(v, v)|.

    Candidates are seeded random vectors projected off the span built so far;
    the one with the largest |g(v, v)| is normalized and kept.
    """
    g = mj_or_g.g if isinstance(mj_or_g, MetricJet) else np.asarray(mj_or_g, dtype=float)
    n = g.shape[0]
    rng = np.random.default_rng(seed)
    scale = float(np.abs(g).max())
    basis: list[np.ndarray] = []
    signs: list[int] = []
    for _ in range(n):
        best, best_q, draws = None, 0.0, 0
        while draws < _MAX_DRAWS:
            batch = rng.standard_normal((8, n))
            draws += 8
            for v in batch:
                for e, s in zip(basis, signs):
                    v = v - s * (v @ g @ e) * e
                q = float(v @ g @ v)
                if abs(q) > abs(best_q) * 1.0000001 or best is None:
                    best, best_q = v, q
            if abs(best_q) > 1e-8 * scale * float(best @ best):
                break
        if best is None or abs(best_q) <= 1e-8 * scale * float(best @ best):
            raise NullPileUpError("null-direction pile-up: no non-null candidate after 64 draws")
        basis.append(best / math.sqrt(abs(best_q)))
        signs.append(1 if best_q > 0 else -1)
    order = sorted(range(n), key=lambda k: signs[k])  # stable, negatives first
    vecs = np.array([basis[k] for k in order])
    eps = tuple(signs[k] for k in order)
    return Frame(vecs, eps, 1 if np.linalg.det(vecs) > 0 else -1)


def hodge_star(frame_or_eps) -> np.ndarray:
    """Matrix of the Hodge star on the frame pair basis.

    Defined by e^i ^ e^j ^ *(e^k ^ e^l) = (d^i_k d^j_l - d^i_l d^j_k) eps_i eps_j vol.
    """
    eps = frame_or_eps.eps if isinstance(frame_or_eps, Frame) else tuple(frame_or_eps)
    S = np.zeros((6, 6))
    for col, (k, l) in enumerate(PAIRS):
        m, n = (i for i in range(4) if i not in (k, l))
        S[_PAIR_INDEX[(m, n)], col] = eps[k] * eps[l] * perm_sign((k, l, m, n))
    return S


def pair_gram(eps) -> np.ndarray:
    """Induced inner product on the frame pair basis."""
    return np.diag([eps[i] * eps[j] for i, j in PAIRS]).astype(float)


def selfdual_vectors(eps) -> tuple[np.ndarray, np.ndarray]:
    """E+_i and E-_i as rows on the frame pair basis."""
    e1, e2, e3, e4 = eps
    r = 1 / math.sqrt(2)
    plus, minus = [], []
    for s, out in ((1, plus), (-1, minus)):
        v = np.zeros((3, 6))
        v[0, 0], v[0, 5] = r, s * e3 * e4 * r
        v[1, 1], v[1, 4] = r, -s * e2 * e4 * r
        v[2, 2], v[2, 3] = r, s * e2 * e3 * r
        out.append(v)
    return plus[0], minus[0]


@dataclass
class Lambda2Frame:
    frame: Frame
    Eplus: np.ndarray  # 3x6, coordinate pair basis dx^i ^ dx^j
    Eminus: np.ndarray
    gramPlus: np.ndarray
    gramMinus: np.ndarray
    frame_plus: np.ndarray = field(repr=False, default=None)  # 3x6, frame pair basis
    frame_minus: np.ndarray = field(repr=False, default=None)

    @property
    def basis(self) -> np.ndarray:
        """6x6 matrix whose columns are E+_1..3, E-_1..3 on the frame pair basis."""
        return np.vstack([self.frame_plus, self.frame_minus]).T

    @property
    def gram(self) -> np.ndarray:
        G = np.zeros((6, 6))
        G[:3, :3], G[3:, 3:] = self.gramPlus, self.gramMinus
        return G


def frame_pairs_to_coordinate(frame: Frame, g, vec6) -> np.ndarray:
    """Re-express 2-forms given on the frame pair basis in the coordinate pair basis."""
    th = frame.coframe(g)
    vec6 = np.atleast_2d(vec6)
    out = np.zeros_like(vec6)
    for k, (a, b) in enumerate(PAIRS):
        wedge = np.outer(th[a], th[b]) - np.outer(th[b], th[a])
        out += vec6[:, [k]] * np.array([wedge[i, j] for i, j in PAIRS])[None, :]
    return out


def selfdual_basis(frame: Frame, g=None) -> Lambda2Frame:
    fp, fm = selfdual_vectors(frame.eps)
    G = pair_gram(frame.eps)
    gp, gm = fp @ G @ fp.T, fm @ G @ fm.T
    if g is None:
        cp, cm = fp, fm
    else:
        cp = frame_pairs_to_coordinate(frame, np.asarray(g), fp)
        cm = frame_pairs_to_coordinate(frame, np.asarray(g), fm)
    return Lambda2Frame(frame, cp, cm, gp, gm, fp, fm)


def two_form_frame_vector(omega, frame: Frame) -> np.ndarray:
    """Frame pair components omega(e_a, e_b), a < b, of a coordinate 2-form matrix."""
    F = frame.vectors
    om = F @ np.asarray(omega, dtype=float) @ F.T
    return np.array([om[a, b] for a, b in PAIRS])


def two_form_in_E(omega, lf: Lambda2Frame) -> np.ndarray:
    """Coordinates of a 2-form on (E+_1..3, E-_1..3)."""
    return np.linalg.solve(lf.basis, two_form_frame_vector(omega, lf.frame))


def two_form_bivector_E(omega, lf: Lambda2Frame) -> np.ndarray:
    """Coordinates on (E+, E-) of the bivector metrically dual to a 2-form.

    The curvature operator acts on bivectors; raising both indices of a 2-form
    multiplies its E-coefficients by the Gram diagonal.
    """
    return np.diag(lf.gram) * two_form_in_E(omega, lf)


def eigen_residual(W, gram, v) -> tuple[float, float]:
    """Rayleigh quotient of ``v`` for the gram-self-adjoint ``W`` and the residual |W v - mu v|."""
    W, gram, v = (np.asarray(a, dtype=float) for a in (W, gram, v))
    mu = float(v @ gram @ W @ v) / float(v @ gram @ v)
    return mu, float(np.abs(W @ v - mu * v).max()) / max(1e-300, float(np.abs(v).max()))


@dataclass
class WeylPM:
    Wplus: np.ndarray
    Wminus: np.ndarray


def frame_components(R, frame: Frame) -> np.ndarray:
    F = frame.vectors
    return np.einsum("abcd,ia,jb,kc,ld->ijkl", R, F, F, F, F)


def curvature_operator_frame(Rf, eps, tau: float | None = None) -> tuple[np.ndarray, WeylPM]:
    """Curvature operator on (E+, E-) from frame components R(e_i, e_j, e_k, e_l)."""
    Rf = np.asarray(Rf, dtype=float)
    B = np.array([[Rf[i, j, k, l] for (k, l) in PAIRS] for (i, j) in PAIRS])
    fp, fm = selfdual_vectors(eps)
    Emat = np.vstack([fp, fm])
    G = Emat @ pair_gram(eps) @ Emat.T
    M = np.linalg.solve(G, Emat @ B @ Emat.T)
    if tau is None:
        tau = 2.0 * np.trace(M)
    I3 = np.eye(3)
    return M, WeylPM(M[:3, :3] - tau / 12 * I3, M[3:, 3:] - tau / 12 * I3)


def curvature_operator(c: Curvature, mj: MetricJet | None, lf: Lambda2Frame) -> tuple[np.ndarray, WeylPM]:
    """Curvature as an endomorphism of two-forms and its self-dual/anti-self-dual Weyl blocks."""
    return curvature_operator_frame(frame_components(c.R, lf.frame), lf.frame.eps, c.tau)


def weyl_operator6(c: Curvature, lf: Lambda2Frame) -> np.ndarray:
    """Weyl tensor as an endomorphism of two-forms in the (E+, E-) basis."""
    M, _ = curvature_operator_frame(frame_components(c.weyl, lf.frame), lf.frame.eps, 0.0)
    return M


@dataclass
class EigenData:
    eigenvalues: np.ndarray  # complex[3]
    multiplicities: list
    minimalPolyDoubleRoot: bool
    distinguished: dict | None = None


def cubic_roots(a2: float, a1: float, a0: float) -> np.ndarray:
    """Roots of t^3 + a2 t^2 + a1 t + a0 in closed form."""
    shift = a2 / 3.0
    p = a1 - a2 * a2 / 3.0
    q = 2.0 * a2 ** 3 / 27.0 - a2 * a1 / 3.0 + a0
    scale = max(1.0, abs(a2), abs(a1) ** 0.5, abs(a0) ** (1 / 3))
    disc = (q / 2) ** 2 + (p / 3) ** 3
    if abs(disc) < 1e-14 * scale ** 6:
        u = -np.cbrt(q / 2)
        roots = [2 * u, -u, -u]
    elif disc < 0:
        r = 2 * math.sqrt(-p / 3)
        arg = max(-1.0, min(1.0, 3 * q / (p * r)))
        phi = math.acos(arg) / 3
        roots = [r * math.cos(phi - 2 * math.pi * k / 3) for k in range(3)]
    else:
        sq = math.sqrt(disc)
        u = np.cbrt(-q / 2 + sq)
        v = np.cbrt(-q / 2 - sq)
        w = complex(-0.5, math.sqrt(3) / 2)
        roots = [u + v, u * w + v * w.conjugate(), u * w.conjugate() + v * w]
    return np.array([complex(z) - shift for z in roots])


def _clusters(vals, tol):
    groups: list[list[int]] = []
    for i, z in enumerate(vals):
        for grp in groups:
            if abs(vals[grp[0]] - z) <= tol:
                grp.append(i)
                break
        else:
            groups.append([i])
    return groups


def _null_vector(A: np.ndarray) -> np.ndarray:
    """Kernel direction of a rank-2 3x3 matrix via the largest row cross product."""
    best = None
    for i, j in ((0, 1), (0, 2), (1, 2)):
        v = np.cross(A[i], A[j])
        if best is None or np.linalg.norm(v) > np.linalg.norm(best):
            best = v
    n = np.linalg.norm(best)
    return best / n if n > 0 else best


def eigen3(W, gram, tol_sep: float | None = None) -> EigenData:
    W = np.asarray(W, dtype=float)
    gram = np.asarray(gram, dtype=float)
    norm = float(np.linalg.norm(W))
    if tol_sep is None:
        tol_sep = 1e-6 * max(1.0, norm)
    tr = np.trace(W)
    minors = (W[0, 0] * W[1, 1] - W[0, 1] * W[1, 0] + W[0, 0] * W[2, 2] - W[0, 2] * W[2, 0]
              + W[1, 1] * W[2, 2] - W[1, 2] * W[2, 1])
    vals = cubic_roots(-tr, minors, -np.linalg.det(W))
    vals = np.where(np.abs(vals.imag) <= tol_sep, vals.real + 0j, vals)
    groups = _clusters(vals, tol_sep)
    mults = [len(g) for g in groups]
    means = [complex(np.mean(vals[g])) for g in groups]
    I = np.eye(3)
    ztol = max(tol_sep, 1e-9 * max(1.0, norm))
    double = False
    if len(groups) == 2:
        l0 = means[mults.index(2)].real
        l1 = means[mults.index(1)].real
        double = np.abs((W - l0 * I) @ (W - l1 * I)).max() > ztol * max(1.0, norm)
    elif len(groups) == 1:
        double = np.abs(W - means[0].real * I).max() > ztol
    distinguished = None
    simple_real = [k for k, m in enumerate(mults) if m == 1 and abs(means[k].imag) <= tol_sep]
    if len(simple_real) == 1 and len(groups) > 1:
        mu = means[simple_real[0]].real
        v = _null_vector(W - mu * I)
        q = float(v @ gram @ v)
        causal = "null" if abs(q) < 1e-8 else ("spacelike" if q > 0 else "timelike")
        distinguished = {"eigenvalue": mu, "eigenvector": v, "causal": causal}
    return EigenData(vals, mults, bool(double), distinguished)


def weyl_operator_rank(W6, tol: float = 1e-9) -> int:
    s = np.linalg.svd(np.asarray(W6, dtype=float), compute_uv=False)
    if s[0] == 0:
        return 0
    return int((s > tol * s[0]).sum())


def two_step_nilpotent(M, tol: float = 1e-9) -> bool:
    M = np.asarray(M, dtype=float)
    n = float(np.abs(M).max())
    return n > tol and float(np.abs(M @ M).max()) <= tol * n * n


__all__ = [
    "EigenData", "Frame", "Lambda2Frame", "NullPileUpError", "PAIRS", "WeylPM",
    "cubic_roots", "curvature_operator", "curvature_operator_frame", "eigen3", "eigen_residual",
    "frame_components", "frame_pairs_to_coordinate", "hodge_star", "orthonormalize",
    "pair_gram", "perm_sign", "selfdual_basis", "selfdual_vectors", "two_form_frame_vector",
    "two_form_bivector_E", "two_form_in_E", "two_step_nilpotent", "weyl_operator6", "weyl_operator_rank",
]
