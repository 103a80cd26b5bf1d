"""Model catalog, per-point analysis, classification and JSON reports."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .curvature import (
    DegenerateMetricError, MetricField, covariant_derivative, curvature_at, kulkarni_nomizu,
)
from .extension import derdzinski_phi, derdzinski_surface, plumbing_metric, riemannian_extension
from .hodge import (
    curvature_operator, eigen3, eigen_residual, orthonormalize, selfdual_basis, two_form_bivector_E,
    two_step_nilpotent,
)
from .jets import DomainError
from .structures import (
    Distribution, IsotropicFormError, TwoFormField, check_closed, check_parallel, check_walker,
    eigen_distribution, gray_identities, j_from_omega, j_jet, nijenhuis, norm_nabla_omega,
    ricci_invariance, semisymmetry, symplectic_pair_check,
)

DEFAULT_TOL = {"zero": 1e-8, "witness": 1e-3, "eigsep": 1e-6}
DEFAULT_POINTS = 20

LABELS = ("TypeI", "TypeII", "TypeIII_conformallySymmetric", "TypeIII_conformallyFlat",
          "LocallySymmetric", "Unclassified")


class PointError(ValueError):
    """A numerical domain or degeneracy failure at a specific sample point."""

    def __init__(self, point, cause: Exception):
        self.point = [float(t) for t in point]
        self.cause = cause
        super().__init__(f"at point {self.point}: {cause}")


# -- sampling ---------------------------------------------------------------

_MASK = (1 << 64) - 1


def splitmix64(seed: int):
    """Infinite stream of 64-bit outputs of the splitmix64 generator."""
    state = seed & _MASK
    while True:
        state = (state + 0x9E3779B97F4A7C15) & _MASK
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        yield z ^ (z >> 31)


def sample_points(n: int, seed: int, domain: Callable | None = None, max_tries: int = 10000) -> list:
    """``n`` points uniform in [-1, 1)^4 accepted by ``domain``."""
    gen = splitmix64(seed)
    out, tries = [], 0
    while len(out) < n:
        if tries >= max_tries:
            raise ValueError(f"domain predicate rejected {tries} candidate points")
        tries += 1
        p = np.array([2.0 * ((next(gen) >> 11) * 2.0 ** -53) - 1.0 for _ in range(4)])
        if domain is None or domain(p):
            out.append(p)
    return out


# -- catalog ----------------------------------------------------------------

@dataclass(frozen=True)
class Expectation:
    """A catalogued value; ``value`` maps the parameter dict to the expected quantity."""

    value: Callable[[Mapping], object]
    note: str
    invariant: bool = True


@dataclass
class ModelCatalogEntry:
    name: str
    build: Callable[[Mapping], MetricField]
    defaults: dict
    description: str = ""
    omegas: Callable[[Mapping], tuple] | None = None
    walker: str | None = None  # "jminus" (eigen-distributions of J-) or "fibre"
    expected: dict = field(default_factory=dict)
    orientation: Callable[[Mapping], int] = lambda p: 1
    domain: Callable[[np.ndarray], bool] = lambda p: True

    def params(self, overrides: Mapping | None = None) -> dict:
        p = dict(self.defaults)
        for k, v in (overrides or {}).items():
            if k not in p:
                raise KeyError(f"model {self.name!r} has no parameter {k!r}; known: {sorted(p)}")
            p[k] = float(v)
        return p

    def metric(self, overrides: Mapping | None = None) -> MetricField:
        return self.build(self.params(overrides))


def _type1_metric(p):
    S, D = "sqrt(1+x^2+y^2)", "(1+x^2+y^2)"
    rows = [[f"lambda*(1+y^2)/{D}", f"-lambda*x*y/{D}", "0", "0"],
            [None, f"lambda*(1+x^2)/{D}", "0", "0"],
            [None, None, f"eta*({S}-x)", "-eta*y"],
            [None, None, None, f"eta*({S}+x)"]]
    return MetricField.from_strings(rows, {"lambda": p["lambda"], "eta": p["eta"]}, "type1")


def _type1_omegas(p):
    # the eta factor keeps the closed form self-dual for the catalogued orientation
    prm = {"lambda": p["lambda"], "eta": p["eta"]}
    mk = lambda s: TwoFormField.from_dict(
        {(1, 0): "lambda/sqrt(x^2+y^2+1)", (2, 3): f"{s}*eta"}, prm, f"Omega{'+' if s > 0 else '-'}")
    return mk(1), mk(-1)


def _type2_metric(p):
    rows = [["sinh(2*u)-cosh(2*u)*sin(2*v)", "-cosh(2*u)*cos(2*v)", "0", "0"],
            [None, "sinh(2*u)+cosh(2*u)*sin(2*v)", "0", "0"],
            [None, None, "lambda", "0"],
            [None, None, None, "-lambda*cosh(2*u)^2"]]
    return MetricField.from_strings(rows, {"lambda": p["lambda"]}, "type2")


def _type2_omegas(p):
    prm = {"lambda": p["lambda"]}
    mk = lambda s: TwoFormField.from_dict(
        {(0, 1): f"{s}", (3, 2): "lambda*cosh(2*u)"}, prm, f"Omega{'+' if s > 0 else '-'}")
    return mk(1), mk(-1)


def _type3_metric(p):
    rows = [["lambda", "lambda/2", "exp(-x)/2", "exp(-y)"],
            [None, "lambda", "exp(-x)", "exp(-y)/2"],
            [None, None, "0", "0"],
            [None, None, None, "0"]]
    return MetricField.from_strings(rows, {"lambda": p["lambda"]}, "type3")


def _typeC_metric(p):
    # coordinates (x, y, z, t) are carried by the slots (x, y, u, v)
    rows = [["s*exp(2*v)", "0", "0", "0"],
            [None, "s*exp(-2*v)", "0", "0"],
            [None, None, "0", "s/2"],
            [None, None, None, "0"]]
    return MetricField.from_strings(rows, {"s": p["sign"]}, "typeC")


def _derdzinski_metric(p):
    s = derdzinski_surface()
    s.params = {"lambda": p["lambda"]}
    return riemannian_extension(s, derdzinski_phi(), "derdzinski")


PLUMBING_F = "x^2+sin(y)"


def _diag3(a, b, c):
    return np.diag([a, b, c]).tolist()


def _t1_wplus(p):
    lam = p["lambda"]
    return [1 / (2 * lam), -1 / (4 * lam), -1 / (4 * lam)]


CATALOG: dict[str, ModelCatalogEntry] = {}


def _register(e: ModelCatalogEntry):
    CATALOG[e.name] = e


_register(ModelCatalogEntry(
    "type1", _type1_metric, {"lambda": 1.0, "eta": 1.0},
    "Type I generalized symmetric space; eta=+1 positive definite, eta=-1 neutral",
    omegas=_type1_omegas,
    expected={
        "Wplus_eigenvalues": Expectation(_t1_wplus, "Type I model: displayed W+ operator"),
        "Wminus_eigenvalues": Expectation(lambda p: [-t for t in _t1_wplus(p)],
                                          "Type I model: displayed W- operator"),
        "Wplus_matrix": Expectation(lambda p: _diag3(*_t1_wplus(p)),
                                    "Type I model: W+ in the adapted frame", invariant=False),
        "ricci_eigenvalues": Expectation(lambda p: [-3 / (2 * p["lambda"])] * 2 + [0.0, 0.0],
                                         "Type I model: Ricci operator"),
        "tau": Expectation(lambda p: -3 / p["lambda"], "Type I model: trace of the Ricci operator"),
        "distinguished_causal": Expectation(lambda p: "spacelike",
                                            "Type I model: distinguished eigensections"),
        "eigenvalue_plus": Expectation(lambda p: 1 / (2 * p["lambda"]),
                                       "Type I model: Omega+ spans the distinguished eigenline of W+"),
        "eigenvalue_minus": Expectation(lambda p: -1 / (2 * p["lambda"]),
                                        "Type I model: Omega- spans the distinguished eigenline of W-"),
    },
    # the catalog W+ lives on the reversed coordinate orientation when eta=+1
    orientation=lambda p: -1 if p["eta"] > 0 else 1,
    domain=lambda q: q[0] ** 2 + q[1] ** 2 > 1e-6,
))

_register(ModelCatalogEntry(
    "type2", _type2_metric, {"lambda": 1.0},
    "Type II generalized symmetric space, neutral signature",
    omegas=_type2_omegas, walker="jminus",
    expected={
        "Wplus_eigenvalues": Expectation(lambda p: [2 / p["lambda"], -1 / p["lambda"], -1 / p["lambda"]],
                                         "Type II model: displayed W+ operator"),
        "Wminus_eigenvalues": Expectation(lambda p: [-2 / p["lambda"], 1 / p["lambda"], 1 / p["lambda"]],
                                          "Type II model: displayed W- operator"),
        "Wplus_matrix": Expectation(lambda p: _diag3(-1 / p["lambda"], 2 / p["lambda"], -1 / p["lambda"]),
                                    "Type II model: W+ in the adapted frame", invariant=False),
        "ricci_eigenvalues": Expectation(lambda p: [-6 / p["lambda"]] * 2 + [0.0, 0.0],
                                         "Type II model: Ricci operator"),
        "tau": Expectation(lambda p: -12 / p["lambda"], "Type II model: scalar curvature"),
        "weyl_norm_sq": Expectation(lambda p: 48 / p["lambda"] ** 2, "Type II model: norm of W"),
        "distinguished_causal": Expectation(lambda p: "timelike",
                                            "Type II model: distinguished eigensections"),
        "eigenvalue_plus": Expectation(lambda p: 2 / p["lambda"],
                                       "Type II model: Omega+ spans the distinguished eigenline of W+"),
        "eigenvalue_minus": Expectation(lambda p: -2 / p["lambda"],
                                        "Type II model: Omega- spans the distinguished eigenline of W-"),
    },
    orientation=lambda p: 1,
))

_register(ModelCatalogEntry(
    "type3", _type3_metric, {"lambda": 1.0},
    "Type III generalized symmetric space, neutral signature",
    walker="fibre",
    expected={
        "Wminus_max": Expectation(lambda p: 0.0, "Type III model: W- vanishes"),
        "Wplus_eigenvalues": Expectation(lambda p: [0.0, 0.0, 0.0], "Type III model: W+ nilpotent"),
        "Wplus_matrix": Expectation(
            lambda p: (np.array([[4, 2, -2 * math.sqrt(3)], [-2, -1, math.sqrt(3)],
                                 [2 * math.sqrt(3), math.sqrt(3), -3]]) / (3 * p["lambda"])).tolist(),
            "Type III model: W+ in the adapted frame", invariant=False),
        "ricci_eigenvalues": Expectation(lambda p: [0.0] * 4, "Type III model: Ricci operator nilpotent"),
        "tau": Expectation(lambda p: 0.0, "Type III model: scalar curvature"),
        "weyl_rho_coefficient": Expectation(lambda p: 3 * p["lambda"] / 16,
                                            "Type III model: W as a multiple of rho o rho"),
    },
    # W- vanishes for the reversed coordinate orientation
    orientation=lambda p: -1,
))

_register(ModelCatalogEntry(
    "typeC", _typeC_metric, {"sign": 1.0},
    "Lorentzian double warped product; coordinates (x, y, z, t) in the slots (x, y, u, v)",
    expected={
        "weyl_max": Expectation(lambda p: 0.0, "Type C metrics: locally conformally flat"),
        "nabla_rho_max": Expectation(lambda p: 0.0, "Type C metrics: parallel Ricci tensor"),
    },
))

_register(ModelCatalogEntry(
    "derdzinski", _derdzinski_metric, {"lambda": 1.0},
    "Riemannian extension of the Derdzinski affine surface with deformation Phi",
    walker="fibre",
    expected={
        "tau": Expectation(lambda p: 0.0, "Riemannian extensions have zero scalar curvature"),
    },
))

_register(ModelCatalogEntry(
    "plumbing", lambda p: plumbing_metric(PLUMBING_F), {},
    f"Riemannian extension of a flat surface with Phi = ({PLUMBING_F}) dy o dy",
    walker="fibre",
    expected={
        "Wminus_max": Expectation(lambda p: 0.0, "plumbing metrics are self-dual"),
        "ricci_eigenvalues": Expectation(lambda p: [0.0] * 4, "plumbing metrics are Ricci flat"),
    },
))


def get_model(name: str) -> ModelCatalogEntry:
    try:
        return CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown model {name!r}; available: {', '.join(CATALOG)}") from None


# -- per-point analysis ------------------------------------------------------

def _fmax(a) -> float:
    a = np.asarray(a, dtype=float)
    return float(np.abs(a).max()) if a.size else 0.0


def _complex_list(vals) -> list:
    vals = sorted((complex(z) for z in vals), key=lambda z: (round(z.real, 9), round(z.imag, 9)))
    return [[z.real, z.imag] for z in vals]


def _eigen_dict(W, gram, tol_sep) -> dict:
    ed = eigen3(W, gram, tol_sep)
    d = ed.distinguished
    return {
        "eigenvalues": _complex_list(ed.eigenvalues),
        "multiplicities": sorted(ed.multiplicities),
        "minimalPolyDoubleRoot": ed.minimalPolyDoubleRoot,
        "distinguished": None if d is None else {
            "eigenvalue": float(d["eigenvalue"]),
            "eigenvector": [float(t) for t in d["eigenvector"]],
            "causal": d["causal"],
        },
    }


def _weyl_blocks(cv, mj, frame, tol) -> dict:
    lf = selfdual_basis(frame, mj.g)
    _, w = curvature_operator(cv, mj, lf)
    scale = max(1.0, _fmax(w.Wplus), _fmax(w.Wminus))
    return {
        "orientation": frame.orientation,
        "Wplus": w.Wplus.tolist(),
        "Wminus": w.Wminus.tolist(),
        "Wplus_eigen": _eigen_dict(w.Wplus, lf.gramPlus, tol["eigsep"] * scale),
        "Wminus_eigen": _eigen_dict(w.Wminus, lf.gramMinus, tol["eigsep"] * scale),
        "Wplus_max": _fmax(w.Wplus),
        "Wminus_max": _fmax(w.Wminus),
        "Wplus_nilpotent": bool(two_step_nilpotent(w.Wplus, tol["zero"])
                                and _fmax(w.Wplus) > tol["witness"]),
        "Wminus_nilpotent": bool(two_step_nilpotent(w.Wminus, tol["zero"])
                                 and _fmax(w.Wminus) > tol["witness"]),
    }


def _rank(A, tol) -> int:
    s = np.linalg.svd(np.asarray(A, dtype=float), compute_uv=False)
    return int((s > tol * max(1.0, s[0])).sum())


def analyze_point(m: MetricField, point, *, omegas=None, walker: str | None = None,
                  orientation: int = 1, seed: int = 0, tol: Mapping | None = None) -> dict:
    """All curvature and structure evidence at one point.

    ``orientation`` is relative to the coordinate orientation dx ^ dy ^ du ^ dv.
    """
    tol = {**DEFAULT_TOL, **(tol or {})}
    point = np.asarray(point, dtype=float)
    try:
        return _analyze(m, point, omegas, walker, orientation, seed, tol)
    except (DegenerateMetricError, DomainError, ZeroDivisionError, OverflowError, IsotropicFormError) as exc:
        raise PointError(point, exc) from exc


def _analyze(m, point, omegas, walker, orientation, seed, tol) -> dict:
    mj, cj, cv = curvature_at(m, point)
    evals = np.linalg.eigvalsh(mj.g)
    if np.min(np.abs(evals)) < 1e-12 * max(1.0, np.abs(evals).max()):
        raise DegenerateMetricError("metric is degenerate")
    neg = int((evals < 0).sum())
    signature = [4 - neg, neg]
    out: dict = {"point": point.tolist(), "signature": signature, "tau": cv.tau}
    ric_eigs = np.linalg.eigvals(cv.ric_op)
    rho_eigs = np.linalg.eigvalsh(0.5 * (cv.ricci + cv.ricci.T))
    rscale = max(1.0, _fmax(cv.ricci))
    out["ricci_eigenvalues"] = _complex_list(ric_eigs)
    out["ricci_rank"] = _rank(cv.ricci, tol["zero"])
    out["rho_negative_semidefinite"] = bool(rho_eigs.max() <= tol["zero"] * rscale)
    out["rho_positive_semidefinite"] = bool(rho_eigs.min() >= -tol["zero"] * rscale)
    res: dict = {
        "weyl_max": _fmax(cv.weyl),
        "ricci_sq": _fmax(cv.ric_op @ cv.ric_op),
        "nablaR": _fmax(covariant_derivative(cv.R_jet, cj.gamma)),
        "nablaW": _fmax(covariant_derivative(cv.weyl_jet, cj.gamma)),
        "nabla_rho": _fmax(covariant_derivative(cv.ricci_jet, cj.gamma)),
    }
    ss = semisymmetry(cv)
    res["semisymmetry_derivation"] = ss["derivation_residual"]
    res["semisymmetry_commutation"] = ss["commutation_residual"]
    K = kulkarni_nomizu(cv.ricci, cv.ricci)
    kk = float(np.sum(K * K))
    if kk > tol["zero"] ** 2:
        coef = float(np.sum(cv.weyl * K) / kk)
        out["weyl_rho_coefficient"] = coef
        res["weyl_rho_fit"] = _fmax(cv.weyl - coef * K)
    out["weyl_norm_sq"] = float(np.einsum("abcd,ae,bf,cg,dh,efgh->", cv.weyl, mj.ginv, mj.ginv,
                                          mj.ginv, mj.ginv, cv.weyl, optimize=True))
    if neg != 1 and neg != 3:
        frame = orthonormalize(mj, seed)
        # frame.orientation is relative to the coordinate orientation
        out["weyl"] = {str(o): _weyl_blocks(cv, mj, frame.oriented(o), tol) for o in (1, -1)}
        out["catalog_orientation"] = orientation
    if omegas is not None:
        op, om = omegas
        s = {}
        Jp = j_from_omega(op, mj, point)
        Jm = j_from_omega(om, mj, point)
        s["kind_plus"], s["kind_minus"] = Jp.kind, Jm.kind
        res["closed_plus"] = check_closed(op, point)
        res["closed_minus"] = check_closed(om, point)
        res["parallel_minus"] = check_parallel(om, cj, point)
        s["nabla_plus"] = check_parallel(op, cj, point)
        s["norm_nabla_plus_sq"] = norm_nabla_omega(op, cj, mj, point)
        pair = symplectic_pair_check(op, om, point)
        res["pair"] = max(pair["wedge_mixed"], pair["wedge_sum"])
        res["ricci_J_plus"] = ricci_invariance(cv.ric_op, Jp)
        res["ricci_J_minus"] = ricci_invariance(cv.ric_op, Jm)
        res["gray"] = gray_identities(cv, Jp)
        res["nijenhuis_plus"] = nijenhuis(j_jet(op, mj, point))
        res["nijenhuis_minus"] = nijenhuis(j_jet(om, mj, point))
        res["j_plus"] = Jp.residuals(mj.g)
        if "weyl" in out:
            # Omega+ should span an eigenline of W+ and Omega- one of W- (catalogued orientation)
            lf = selfdual_basis(frame.oriented(orientation), mj.g)
            _, w = curvature_operator(cv, mj, lf)
            for key, om_, blk, other in (("plus", op, slice(0, 3), slice(3, 6)),
                                         ("minus", om, slice(3, 6), slice(0, 3))):
                b = two_form_bivector_E(om_.value(point), lf)
                W = w.Wplus if key == "plus" else w.Wminus
                mu, r = eigen_residual(W, lf.gram[blk, blk], b[blk])
                s[f"eigenvalue_{key}"] = mu
                res[f"eigenbundle_{key}"] = r
                res[f"duality_{key}"] = _fmax(b[other]) / max(1e-300, _fmax(b))
        out["structures"] = s
    if walker is not None:
        dists = []
        if walker == "fibre":
            dists.append(Distribution.constant([[0, 0, 1, 0], [0, 0, 0, 1]]))
        elif walker == "jminus" and omegas is not None:
            Jj = j_jet(omegas[1], mj, point)
            dists += [eigen_distribution(Jj, 1), eigen_distribution(Jj, -1)]
        w = [check_walker(d, mj, cj, point) for d in dists]
        if w:
            res["walker"] = max(max(r["null_residual"], r["parallel_residual"]) for r in w)
    out["residuals"] = res
    return out


# -- aggregation and classification -----------------------------------------

def _flatten(res: Mapping, prefix="") -> dict:
    flat = {}
    for k, v in res.items():
        if isinstance(v, Mapping):
            flat.update(_flatten(v, f"{prefix}{k}."))
        else:
            flat[prefix + k] = float(v)
    return flat


def aggregate(points: Sequence[dict]) -> dict:
    """Deterministic reduction: max-abs of residuals, min/max of witnesses, AND of predicates."""
    if not points:
        return {}
    flat = [_flatten(p["residuals"]) for p in points]
    keys = sorted(set().union(*flat))
    agg: dict = {"residuals": {k: max(abs(f[k]) for f in flat if k in f) for k in keys}}
    for wk in ("nablaR", "weyl_max"):
        agg[f"min_{wk}"] = min(f[wk] for f in flat)
    taus = [p["tau"] for p in points]
    agg["tau"] = {"min": min(taus), "max": max(taus)}
    agg["ricci_rank"] = sorted({p["ricci_rank"] for p in points})
    agg["rho_negative_semidefinite"] = all(p["rho_negative_semidefinite"] for p in points)
    if "weyl_rho_coefficient" in points[0]:
        cs = [p.get("weyl_rho_coefficient", math.inf) for p in points]
        agg["weyl_rho_coefficient"] = {"min": min(cs), "max": max(cs)}
    if all("weyl" in p for p in points):
        wagg = {}
        for o in ("1", "-1"):
            blocks = [p["weyl"][o] for p in points]
            wagg[o] = {
                "Wplus_max": max(b["Wplus_max"] for b in blocks),
                "Wminus_max": max(b["Wminus_max"] for b in blocks),
                "min_Wplus_max": min(b["Wplus_max"] for b in blocks),
                "min_Wminus_max": min(b["Wminus_max"] for b in blocks),
                "Wplus_nilpotent": all(b["Wplus_nilpotent"] for b in blocks),
                "Wminus_nilpotent": all(b["Wminus_nilpotent"] for b in blocks),
            }
        agg["weyl"] = wagg
    return agg


@dataclass
class ClassificationLabel:
    label: str
    evidence: list

    def as_dict(self) -> dict:
        return {"label": self.label, "evidence": self.evidence}


def _distinguished_causal(points) -> set:
    """Causal characters of distinguished eigensections of both W+ and W-, over all points."""
    out = set()
    for p in points:
        blk = p["weyl"]["1"]
        for key in ("Wplus_eigen", "Wminus_eigen"):
            e = blk[key]
            d = e["distinguished"]
            if d is None or e["minimalPolyDoubleRoot"] or abs(d["eigenvalue"]) <= 0:
                out.add("none")
            else:
                out.add(d["causal"])
    return out


def classify_points(points: Sequence[dict], tol: Mapping | None = None) -> ClassificationLabel:
    """Evidence-ordered decision from per-point analyses; a pure function of the evidence."""
    tol = {**DEFAULT_TOL, **(tol or {})}
    z, wit = tol["zero"], tol["witness"]
    agg = aggregate(points)
    r = agg["residuals"]
    ev = []

    def step(name, ok, **values):
        ev.append({"step": name, "passed": bool(ok), "values": values})
        return ok

    if step("locally_symmetric", r["weyl_max"] < z and r["nabla_rho"] < z,
            weyl_max=r["weyl_max"], nabla_rho=r["nabla_rho"]):
        return ClassificationLabel("LocallySymmetric", ev)

    lorentz = any(p["signature"][1] in (1, 3) for p in points)
    ric_ok = agg["ricci_rank"] == [2] and agg["rho_negative_semidefinite"]
    if step("conformally_symmetric_ricci", r["nablaW"] < z and ric_ok,
            nablaW=r["nablaW"], ricci_rank=agg["ricci_rank"],
            rho_negative_semidefinite=agg["rho_negative_semidefinite"]):
        if r["weyl_max"] < z:
            if step("conformally_flat_semisymmetric", r["semisymmetry_derivation"] < z,
                    semisymmetry_derivation=r["semisymmetry_derivation"]):
                return ClassificationLabel("TypeIII_conformallyFlat", ev)
        elif not lorentz:
            for o in ("1", "-1"):
                w = agg["weyl"][o]
                if step(f"selfdual_nilpotent[orientation={o}]",
                        w["Wminus_max"] < z and w["Wplus_nilpotent"] and agg["min_nablaR"] > wit,
                        Wminus_max=w["Wminus_max"], Wplus_nilpotent=w["Wplus_nilpotent"],
                        min_nablaR=agg["min_nablaR"]):
                    return ClassificationLabel("TypeIII_conformallySymmetric", ev)

    if lorentz:
        step("weyl_operators", False, reason="Lorentzian signature: W+- are not real operators")
        return ClassificationLabel("Unclassified", ev)

    causal = _distinguished_causal(points)
    nonzero = min(agg["weyl"]["1"]["min_Wplus_max"], agg["weyl"]["1"]["min_Wminus_max"]) > wit
    struct_ok, kinds = True, set()
    if "closed_plus" in r:
        struct_ok = (r["closed_plus"] < z and r["parallel_minus"] < z and r["ricci_J_plus"] < z)
        kinds = {p["structures"]["kind_plus"] for p in points} | {p["structures"]["kind_minus"] for p in points}
    values = {"causal": sorted(causal), "W_nonzero": bool(nonzero)}
    if "closed_plus" in r:
        values.update(closed_plus=r["closed_plus"], parallel_minus=r["parallel_minus"],
                      ricci_J_plus=r["ricci_J_plus"], kinds=sorted(kinds))
    if step("type_I", nonzero and causal == {"spacelike"} and struct_ok
            and kinds <= {"complex"}, **values):
        return ClassificationLabel("TypeI", ev)
    if step("type_II", nonzero and causal == {"timelike"} and struct_ok
            and kinds <= {"paracomplex"}, **values):
        return ClassificationLabel("TypeII", ev)
    return ClassificationLabel("Unclassified", ev)


def resolve_points(domain=None, n: int = DEFAULT_POINTS, seed: int = 0, points=None) -> list:
    if points is not None and len(points):
        return [np.asarray(p, dtype=float) for p in points]
    return sample_points(n, seed, domain)


def analyze_points(m: MetricField, pts, *, omegas=None, walker=None, orientation=1, seed=0, tol=None):
    return [analyze_point(m, p, omegas=omegas, walker=walker, orientation=orientation, seed=seed, tol=tol)
            for p in pts]


def classify(m: MetricField, candidates=None, points=None, tol=None, *, seed: int = 0,
             n_points: int = DEFAULT_POINTS, domain=None) -> ClassificationLabel:
    """Classify a metric from curvature evidence at sample points."""
    pts = resolve_points(domain, n_points, seed, points)
    data = analyze_points(m, pts, omegas=candidates, seed=seed, tol=tol)
    return classify_points(data, tol)


# -- reports -------------------------------------------------------------------

def _sorted_real(vals) -> list:
    return sorted(float(v) for v in vals)


def _claims(entry: ModelCatalogEntry, params: Mapping, points: Sequence[dict], tol) -> list:
    """Compare catalogued invariant expectations with the worst point."""
    z = tol["zero"]
    out = []
    o = str(entry.orientation(params))
    for name, exp in entry.expected.items():
        if not exp.invariant:
            continue
        want = exp.value(params)
        errs, observed = [], None
        for p in points:
            if name in ("Wplus_eigenvalues", "Wminus_eigenvalues"):
                if "weyl" not in p:
                    continue
                key = "Wplus_eigen" if name.startswith("Wplus") else "Wminus_eigen"
                observed = [v[0] for v in p["weyl"][o][key]["eigenvalues"]]
                imag = max(abs(v[1]) for v in p["weyl"][o][key]["eigenvalues"])
                errs.append(max(imag, max(abs(a - b) for a, b in zip(_sorted_real(observed),
                                                                       _sorted_real(want)))))
            elif name in ("Wplus_max", "Wminus_max"):
                if "weyl" not in p:
                    continue
                observed = p["weyl"][o][name]
                errs.append(abs(observed - want))
            elif name == "ricci_eigenvalues":
                observed = [v[0] for v in p["ricci_eigenvalues"]]
                imag = max(abs(v[1]) for v in p["ricci_eigenvalues"])
                errs.append(max(imag, max(abs(a - b) for a, b in zip(_sorted_real(observed),
                                                                       _sorted_real(want)))))
            elif name == "distinguished_causal":
                if "weyl" not in p:
                    continue
                observed = sorted({p["weyl"][o][k]["distinguished"]["causal"]
                                   if p["weyl"][o][k]["distinguished"] else "none"
                                   for k in ("Wplus_eigen", "Wminus_eigen")})
                errs.append(0.0 if observed == [want] else 1.0)
            elif name in ("weyl_max", "nabla_rho_max"):
                observed = p["residuals"]["weyl_max" if name == "weyl_max" else "nabla_rho"]
                errs.append(abs(observed - want))
            elif name in ("eigenvalue_plus", "eigenvalue_minus"):
                if name not in p.get("structures", {}):
                    continue
                observed = p["structures"][name]
                errs.append(abs(observed - want))
            elif name in p:
                observed = p[name]
                errs.append(abs(observed - want))
        if not errs:
            continue
        err = max(errs)
        tol_c = z * max(1.0, 1.0 if isinstance(want, str) else _fmax(want))
        out.append({"name": name, "expected": want, "observed": observed, "error": err,
                    "tolerance": tol_c, "passed": bool(err <= tol_c),
                    "note": exp.note})
    return out


def build_report(*, model: str | None = None, metric: MetricField | None = None,
                 params: Mapping | None = None, seed: int = 0, n_points: int = DEFAULT_POINTS,
                 points=None, tol: Mapping | None = None, omegas=None) -> dict:
    """Structure report for a catalog model or an arbitrary metric."""
    tol = {**DEFAULT_TOL, **(tol or {})}
    entry = None
    if model is not None:
        entry = get_model(model)
        prm = entry.params(params)
        metric = entry.build(prm)
        omegas = entry.omegas(prm) if entry.omegas else None
        walker, orientation, domain = entry.walker, entry.orientation(prm), entry.domain
    else:
        if metric is None:
            raise ValueError("either a model name or a metric is required")
        prm = dict(metric.params)
        if params:
            metric = metric.with_params(**{k: float(v) for k, v in params.items()})
            prm = dict(metric.params)
        walker, orientation, domain = None, 1, None
    pts = resolve_points(domain, n_points, seed, points)
    data = analyze_points(metric, pts, omegas=omegas, walker=walker, orientation=orientation,
                          seed=seed, tol=tol)
    cls = classify_points(data, tol)
    return {
        "model": model if model is not None else (metric.label or "metric-file"),
        "params": prm,
        "seed": seed,
        "tolerances": tol,
        "points": data,
        "aggregate": aggregate(data),
        "classification": cls.as_dict(),
        "claims": _claims(entry, prm, data, tol) if entry else [],
    }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return None if math.isnan(x) else ("inf" if x > 0 else "-inf")
        return x
    return obj


def report_json(report: dict) -> str:
    """Canonical JSON text; floats use the shortest round-trip representation."""
    return json.dumps(_jsonable(report), indent=2, allow_nan=False) + "\n"


__all__ = [
    "CATALOG", "ClassificationLabel", "DEFAULT_TOL", "Expectation", "LABELS", "ModelCatalogEntry",
    "PointError", "aggregate", "analyze_point", "build_report", "classify", "classify_points",
    "get_model", "report_json", "sample_points", "splitmix64",
]
