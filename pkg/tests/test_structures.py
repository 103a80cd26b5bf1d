import numpy as np
import pytest
from hypothesis import given, strategies as st

from gensym.appendix import remark_analysis
from gensym.curvature import MetricField, christoffel, covariant_derivative, curvature_at, metric_jet
from gensym.lie import (
    BracketParams, builtin_algebra, family_brackets, frame_covariant_derivative, frame_curvature,
    koszul_connection, para_forms,
)
from gensym.models import CATALOG, get_model, sample_points
from gensym.structures import (
    Distribution, IsotropicFormError, JField, TwoFormField, check_closed, check_parallel, check_walker,
    eigen_distribution, gray_identities, j_from_omega, j_jet, j_matrix, nijenhuis, ricci_invariance,
    semisymmetry, symplectic_pair_check, two_form_norm_sq,
)


def pt(name, seed=0):
    return sample_points(1, seed, CATALOG[name].domain)[0]


def model(name, **prm):
    e = get_model(name)
    p = e.params(prm)
    return e.metric(p), (e.omegas(p) if e.omegas else None)


def lie_J(alg, sign=1):
    return JField(j_matrix(para_forms(sign), np.linalg.inv(alg.g)), "paracomplex")


# -- J from Omega ----------------------------------------------------------------

def test_type1_jminus_complex():
    m, (op, om) = model("type1")
    x = pt("type1")
    J = j_from_omega(om, metric_jet(m, x), x)
    assert J.kind == "complex"
    r = J.residuals(metric_jet(m, x).g)
    assert r["square"] < 1e-9 and r["compatibility"] < 1e-9


@pytest.mark.parametrize("which", [0, 1])
def test_type2_paracomplex(which):
    m, oms = model("type2")
    x = pt("type2", 3)
    mj = metric_jet(m, x)
    J = j_from_omega(oms[which], mj, x)
    assert J.kind == "paracomplex"
    r = J.residuals(mj.g)
    assert max(r.values()) < 1e-9
    assert two_form_norm_sq(oms[which].value(x), mj.ginv) == pytest.approx(-2)


def test_euclidean_standard_j(flat):
    om = TwoFormField.from_dict({(0, 1): "1", (2, 3): "1"})
    J = j_from_omega(om, metric_jet(flat, (0, 0, 0, 0)))
    assert J.kind == "complex"
    assert np.allclose(J.J[:, 0], [0, 1, 0, 0])  # J d1 = d2
    assert np.allclose(J.J[:, 2], [0, 0, 0, 1])


def test_isotropic_form_rejected():
    neutral = MetricField.from_strings([["-1", "0", "0", "0"], [None, "-1", "0", "0"],
                                        [None, None, "1", "0"], [None, None, None, "1"]])
    om = TwoFormField.from_dict({(0, 1): "1", (2, 1): "1"})  # (dx + du) ^ dy is null
    with pytest.raises(IsotropicFormError):
        j_from_omega(om, metric_jet(neutral, (0, 0, 0, 0)))


def test_non_structure_rejected(flat):
    with pytest.raises(IsotropicFormError):
        j_from_omega(TwoFormField.from_dict({(0, 1): "1"}), metric_jet(flat, (0, 0, 0, 0)))


# -- closedness, parallelism, pairs ------------------------------------------------

def test_type2_plus_closed():
    _, (op, _) = model("type2", **{"lambda": 2.0})
    assert check_closed(op, (0.3, -0.2, 0.5, 0.1)) < 1e-12


def test_constant_form_closed():
    assert check_closed(TwoFormField.from_dict({(0, 2): "3", (1, 3): "-2"}), (0.1, 0.2, 0.3, 0.4)) == 0


def test_x_dy_du_not_closed():
    assert check_closed(TwoFormField.from_dict({(1, 2): "x"}), (0.1, 0.2, 0.3, 0.4)) == pytest.approx(1)


@pytest.mark.parametrize("name", ["type1", "type2"])
@pytest.mark.parametrize("seed", range(4))
def test_minus_parallel(name, seed):
    m, (_, om) = model(name)
    x = pt(name, seed)
    assert check_parallel(om, christoffel(metric_jet(m, x)), x) < 1e-9


@pytest.mark.parametrize("seed", range(4))
def test_type1_plus_strictly_almost_kaehler(seed):
    m, (op, _) = model("type1")
    x = pt("type1", seed)
    mj = metric_jet(m, x)
    assert check_parallel(op, christoffel(mj), x) > 0.1
    assert nijenhuis(j_jet(op, mj, x)) > 1e-3


@pytest.mark.parametrize("name", ["type1", "type2"])
def test_symplectic_pairs(name):
    _, (op, om) = model(name)
    x = pt(name, 5)
    r = symplectic_pair_check(op, om, x)
    assert max(r.values()) < 1e-9


def test_equal_pair_breaks_sum_identity():
    om = TwoFormField.from_dict({(0, 1): "1", (2, 3): "1"})
    r = symplectic_pair_check(om, om, (0, 0, 0, 0))
    assert r["wedge_sum"] == pytest.approx(4.0)  # 2 |Omega ^ Omega| with Omega ^ Omega = 2 vol


@given(st.sampled_from(["type1", "type2"]), st.integers(0, 10_000))
def test_pair_residuals_invariant_under_negation(name, seed):
    _, (op, om) = model(name)
    x = pt(name, seed)
    a = symplectic_pair_check(op, om, x)
    b = symplectic_pair_check(-op.value(x), -om.value(x), x)
    for k in ("wedge_mixed", "wedge_sum"):
        assert a[k] == pytest.approx(b[k], abs=1e-12)


# -- Ricci invariance ------------------------------------------------------------------

@pytest.mark.parametrize("name", ["type1", "type2"])
def test_ricci_j_plus(name):
    m, (op, _) = model(name)
    x = pt(name, 2)
    mj, _, cv = curvature_at(m, x)
    assert ricci_invariance(cv.ric_op, j_from_omega(op, mj, x)) < 1e-9


def test_ricci_invariance_detects_asymmetry():
    J = np.zeros((4, 4))
    J[1, 0], J[0, 1], J[3, 2], J[2, 3] = 1, -1, 1, -1
    assert ricci_invariance(np.diag([1.0, 2.0, 3.0, 4.0]), J) == pytest.approx(1.0)


# -- Gray identities ---------------------------------------------------------------------

@pytest.mark.parametrize("a", [0.5, 1.0, 2.0])
def test_gray_remark1(a):
    g = remark_analysis(1, a)["gray"]
    assert g["G2"] < 1e-9 and g["G3"] < 1e-9


@pytest.mark.parametrize("which", [2, 3])
@pytest.mark.parametrize("a", [0.5, 1.0, 2.0])
def test_gray_remarks_2_3(which, a):
    g = remark_analysis(which, a)["gray"]
    assert g["G3"] < 1e-9 and g["G2"] > 0.1


def test_gray_flat(flat):
    mj, _, cv = curvature_at(flat, (0, 0, 0, 0))
    J = j_from_omega(TwoFormField.from_dict({(0, 1): "1", (2, 3): "1"}), mj)
    assert max(gray_identities(cv, J).values()) == 0


GRAY_CASES = [("remark1", 1.0), ("remark1", 2.0), ("remark2", 0.0), ("remark2", 1.0), ("remark3", 1.0),
              ("remark3", 2.0), ("type2", 1.0)]


@pytest.mark.parametrize("name,a", GRAY_CASES)
def test_gray_nesting_g1_g2_g3(name, a):
    # the classes nest as G1 => G2 => G3
    alg = builtin_algebra(name, alpha=a)
    g = gray_identities(frame_curvature(alg), lie_J(alg))
    if g["G1"] < 1e-9:
        assert g["G2"] < 1e-9
    if g["G2"] < 1e-9:
        assert g["G3"] < 1e-9


@pytest.mark.xfail(strict=True, reason="the remark (1) algebra satisfies G2 but not G1; see the ledger")
def test_gray_stated_direction_g2_implies_g1():
    for name, a in GRAY_CASES:
        alg = builtin_algebra(name, alpha=a)
        g = gray_identities(frame_curvature(alg), lie_J(alg))
        if g["G2"] < 1e-9:
            assert g["G1"] < 1e-9, (name, a, g)


# -- Nijenhuis ---------------------------------------------------------------------------

@pytest.mark.parametrize("seed", range(3))
def test_type1_jminus_integrable(seed):
    m, (_, om) = model("type1")
    x = pt("type1", seed)
    assert nijenhuis(j_jet(om, metric_jet(m, x), x)) < 1e-9


def test_family_integrable_when_constants_vanish(rng):
    for _ in range(20):
        v = rng.normal(size=12)
        p = BracketParams.from_array(v)
        p.a1 = p.a3 = p.b1 = p.b4 = 0.0
        alg = family_brackets(p)
        assert nijenhuis(lie_J(alg).J, alg.c) < 1e-12


def test_family_not_integrable_otherwise():
    alg = family_brackets(BracketParams(a3=1.0))
    assert nijenhuis(lie_J(alg).J, alg.c) > 0.1


# -- norm of nabla Omega ----------------------------------------------------------------

@pytest.mark.parametrize("a", [0.5, 1.0, 2.0])
def test_norm_nabla_remark1(a):
    d = remark_analysis(1, a)
    assert d["norm_nabla_plus"] == pytest.approx(8 / 3 * d["curv"].tau, rel=1e-10)


@pytest.mark.parametrize("which", [2, 3])
def test_isotropic_kaehler(which):
    assert abs(remark_analysis(which, 1.5)["norm_nabla_plus"]) < 1e-9


def test_parallel_form_norm_zero():
    alg = builtin_algebra("remark1", alpha=1.0)
    # e^1 ^ e^3 - e^2 ^ e^4 is parallel for remark1 exactly when Omega- is
    T = frame_covariant_derivative(para_forms(-1), koszul_connection(alg))
    assert np.abs(T).max() < 1e-12


# -- Walker distributions ---------------------------------------------------------------

FIBRE = Distribution.constant([[0, 0, 1, 0], [0, 0, 0, 1]])


@pytest.mark.parametrize("name", ["type3", "derdzinski", "plumbing"])
def test_fibre_walker(name):
    m, _ = model(name)
    x = pt(name, 1)
    mj = metric_jet(m, x)
    r = check_walker(FIBRE, mj, christoffel(mj), x)
    assert r["null_residual"] < 1e-9 and r["parallel_residual"] < 1e-9


@pytest.mark.parametrize("sign", [1, -1])
def test_type2_jminus_eigendistributions(sign):
    m, (_, om) = model("type2")
    x = pt("type2", 7)
    mj = metric_jet(m, x)
    d = eigen_distribution(j_jet(om, mj, x), sign)
    r = check_walker(d, mj, christoffel(mj), x)
    assert r["null_residual"] < 1e-9 and r["parallel_residual"] < 1e-9


def test_euclidean_plane_not_null(flat):
    mj = metric_jet(flat, (0, 0, 0, 0))
    r = check_walker(Distribution.constant([[1, 0, 0, 0], [0, 1, 0, 0]]), mj, christoffel(mj))
    assert r["null_residual"] == 1


# -- semi-symmetry --------------------------------------------------------------------

@pytest.mark.parametrize("seed", range(3))
def test_type3_flat_case_semisymmetric(seed):
    m, _ = model("type3", **{"lambda": 0.0})
    _, _, cv = curvature_at(m, pt("type3", seed))
    r = semisymmetry(cv)
    assert r["derivation_residual"] < 1e-8 and r["commutation_residual"] < 1e-9


def test_semisymmetry_flat(flat):
    _, _, cv = curvature_at(flat, (0, 0, 0, 0))
    assert semisymmetry(cv) == {"derivation_residual": 0.0, "commutation_residual": 0.0}


def test_semisymmetry_detects_type1():
    m, _ = model("type1")
    _, _, cv = curvature_at(m, pt("type1"))
    assert semisymmetry(cv)["derivation_residual"] > 0.1


@pytest.mark.xfail(strict=True, reason="type III at lambda=1 evaluates as semi-symmetric; see the ledger")
def test_type3_lambda1_not_semisymmetric():
    m, _ = model("type3")
    _, _, cv = curvature_at(m, pt("type3"))
    assert semisymmetry(cv)["derivation_residual"] > 0.01


# -- parallel forms give parallel J -------------------------------------------------------

@pytest.mark.parametrize("name", ["type1", "type2"])
def test_parallel_form_gives_parallel_j(name):
    m, (_, om) = model(name)
    x = pt(name, 9)
    mj = metric_jet(m, x)
    Jj = j_jet(om, mj, x)
    gamma = christoffel(mj).gamma
    # nabla_m J^a_b = d_m J^a_b + Gamma^a_mc J^c_b - Gamma^c_mb J^a_c
    nab = (np.moveaxis(Jj.d(1), -1, 0) + np.einsum("amc,cb->mab", gamma, Jj.value)
           - np.einsum("cmb,ac->mab", gamma, Jj.value))
    assert np.abs(nab).max() < 1e-8
    assert np.abs(covariant_derivative(om.jet(x, 1), gamma)).max() < 1e-8
