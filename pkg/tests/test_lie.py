import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gensym.appendix import (
    connection_array, curvature_array, random_bracket_params, type1_connection, type1_curvature,
    type2_connection, type2_curvature,
)
from gensym.hodge import curvature_operator_frame
from gensym.lie import (
    BUILTIN_ALGEBRAS, BracketParams, LieAlgebra4, algebra_from_brackets, builtin_algebra, family_brackets,
    frame_covariant_derivative, frame_curvature, frame_nabla_R, jacobi_check, jacobi_system,
    koszul_connection, remark_params,
)

S3 = math.sqrt(3)
ABELIAN = LieAlgebra4(np.zeros((4, 4, 4)))
BUILTINS = [("type1", {"alpha": 0.7, "eta": 1}), ("type1", {"alpha": 2.5, "eta": -1}), ("type2", {"alpha": 1.3}),
            ("type3_pos", {"lambda": 0.6}), ("type3_zero", {}), ("remark1", {"alpha": 2.0}),
            ("remark2", {"alpha": 0.4}), ("remark3", {"alpha": -1.5})]


def frame_weyl_max(alg):
    conn = koszul_connection(alg)
    cv = frame_curvature(alg, conn)
    return (np.abs(frame_covariant_derivative(cv.weyl, conn)).max(),
            np.abs(frame_nabla_R(alg, conn, cv)).max())


@given(st.floats(-5, 5), st.sampled_from([1, -1]))
def test_type1_jacobi(alpha, eta):
    assert jacobi_check(builtin_algebra("type1", alpha=alpha, eta=eta)) < 1e-13 * max(1, alpha ** 2)


def test_abelian():
    assert jacobi_check(ABELIAN) == 0
    assert not koszul_connection(ABELIAN).L.any()
    assert not frame_curvature(ABELIAN).R.any()
    cv = frame_curvature(ABELIAN)
    assert not frame_nabla_R(ABELIAN, koszul_connection(ABELIAN), cv).any()


def test_perturbed_type2_breaks_jacobi():
    alg = builtin_algebra("type2", alpha=1.0)
    c = alg.c.copy()
    c[0, 0, 3] += 0.1
    c[0, 3, 0] -= 0.1
    assert jacobi_check(LieAlgebra4(c, alg.eps)) >= 0.05


def test_antisymmetry_enforced():
    c = np.zeros((4, 4, 4))
    c[0, 1, 2] = 1
    with pytest.raises(ValueError):
        LieAlgebra4(c)


@pytest.mark.parametrize("alpha", [0.0, 1.0, 2.5])
def test_type1_connection_entries(alpha):
    L = koszul_connection(builtin_algebra("type1", alpha=alpha, eta=1)).L
    assert np.allclose(L[:, 2, 2], [0, 0, 0, 2 * alpha])
    assert np.allclose(L[:, 2, 3], [0, 0, -2 * alpha, 0])


@pytest.mark.parametrize("alpha", [0.0, 1.0, 2.5])
def test_type2_e4_row_vanishes(alpha):
    assert np.abs(koszul_connection(builtin_algebra("type2", alpha=alpha)).L[:, 3, :]).max() == 0


@pytest.mark.parametrize("alpha", [0.0, 1.0, 2.5])
@pytest.mark.parametrize("eta", [1, -1])
def test_type1_frame_curvature(alpha, eta):
    cv = frame_curvature(builtin_algebra("type1", alpha=alpha, eta=eta))
    assert cv.R[0, 2, 2, 0] == pytest.approx(eta * (alpha ** 2 + 1))
    assert cv.R[0, 1, 0, 1] == pytest.approx(2 * (alpha ** 2 + 1))  # sign calibration anchor
    assert cv.tau == pytest.approx(-12 * (alpha ** 2 + 1))


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.5])
def test_type2_frame_curvature(alpha):
    cv = frame_curvature(builtin_algebra("type2", alpha=alpha))
    a2 = alpha ** 2
    assert cv.R[0, 2, 2, 0] == pytest.approx(2 * a2)
    assert cv.R[0, 2, 3, 1] == pytest.approx(2 * a2)
    assert cv.R[1, 3, 1, 3] == pytest.approx(4 * a2)
    assert np.allclose(cv.ric_op, -6 * a2 * np.diag([0, 1, 0, 1]))
    assert cv.tau == pytest.approx(-12 * a2)


@given(st.floats(-3, 3), st.sampled_from([1, -1]))
def test_type1_tables_reproduced(alpha, eta):
    alg = builtin_algebra("type1", alpha=alpha, eta=eta)
    conn = koszul_connection(alg)
    s = max(1.0, alpha ** 2)
    assert np.abs(conn.L - connection_array(type1_connection(alpha, eta))).max() < 1e-12 * s
    assert np.abs(frame_curvature(alg, conn).R - curvature_array(type1_curvature(alpha, eta))).max() < 1e-12 * s


@given(st.floats(-3, 3))
def test_type2_tables_reproduced(alpha):
    alg = builtin_algebra("type2", alpha=alpha)
    conn = koszul_connection(alg)
    s = max(1.0, alpha ** 2)
    assert np.abs(conn.L - connection_array(type2_connection(alpha))).max() < 1e-12 * s
    assert np.abs(frame_curvature(alg, conn).R - curvature_array(type2_curvature(alpha))).max() < 1e-12 * s


def test_type3_strictly_conformally_symmetric():
    nw, nr = frame_weyl_max(builtin_algebra("type3_pos", {"lambda": 1.0}))
    assert nw < 1e-12 and nr > 1e-3


def test_type1_not_symmetric():
    assert frame_weyl_max(builtin_algebra("type1", alpha=1.0, eta=1))[1] > 1e-3


@pytest.mark.parametrize("name,prm", BUILTINS)
def test_builtin_consistency(name, prm):
    alg = builtin_algebra(name, prm)
    conn = koszul_connection(alg)
    assert jacobi_check(alg) < 1e-12
    assert conn.metric_residual(alg.eps) < 1e-12
    assert conn.torsion_residual(alg.c) < 1e-12


def test_printed_type3_brackets_fail_jacobi():
    assert jacobi_check(builtin_algebra("type3_pos_printed", {"lambda": 1.0})) > 1.0


def test_builtin_errors():
    with pytest.raises(ValueError, match="unknown algebra"):
        builtin_algebra("type9")
    with pytest.raises(ValueError, match="needs parameter"):
        builtin_algebra("type1", alpha=1.0)
    with pytest.raises(ValueError):
        builtin_algebra("type3_pos", {"lambda": 0.0})


def test_builtin_brackets():
    assert np.allclose(builtin_algebra("type1", alpha=1.0, eta=-1).bracket(1, 3), [-2, -1, 0, 0])
    assert np.allclose(builtin_algebra("remark3", alpha=2.0).bracket(1, 3), [0, 2, 0, 2])
    assert np.allclose(builtin_algebra("type3_zero").bracket(2, 3), np.array([8 * S3, 2, 3 * S3, 13]) / 18)


def test_scale_is_homothety():
    alg = builtin_algebra("type1", alpha=1.0, eta=1)
    assert frame_curvature(alg.scaled(0.5)).tau == pytest.approx(frame_curvature(alg).tau * 0.25)


# -- bracket family and its Jacobi system ------------------------------------------------

def test_remark1_family_brackets():
    a = 1.7
    alg = family_brackets(remark_params(1, a))
    want = algebra_from_brackets({(1, 2): [0, 0, -2 * a, 0], (1, 4): [a, 0, 0, 0],
                                  (2, 4): [0, -2 * a, 0, 0], (3, 4): [0, 0, -a, 0]}, alg.eps)
    assert np.array_equal(alg.c, want.c)


def test_family_zero_is_abelian():
    assert not family_brackets(BracketParams()).c.any()
    assert not jacobi_system(BracketParams()).any()


def test_family_a1_rows():
    alg = family_brackets(BracketParams(a1=1.0))
    assert np.allclose(alg.bracket(0, 1), [1, 0, 0, 0])
    assert np.allclose(alg.bracket(1, 2), [0, 0, 1, 0])
    assert np.allclose(alg.bracket(0, 3), [0, 0, -2, 0])


@pytest.mark.parametrize("which", [1, 2, 3])
@pytest.mark.parametrize("alpha", [-1.0, 0.0, 0.5, 2.0])
def test_remark_parameters_solve_system(which, alpha):
    p = remark_params(which, alpha)
    assert np.abs(jacobi_system(p)).max() < 1e-12
    assert jacobi_check(family_brackets(p)) < 1e-12


def test_system_has_fourteen_equations():
    assert jacobi_system(BracketParams(a1=1, b3=2)).shape == (14,)


@given(st.integers(0, 2 ** 32 - 1))
def test_system_agrees_with_bracket_jacobi(seed):
    rng = np.random.default_rng(seed)
    for _ in range(20):
        p = random_bracket_params(rng)
        assert (np.abs(jacobi_system(p)).max() < 1e-10) == (jacobi_check(family_brackets(p)) < 1e-10)


@given(st.lists(st.integers(-3, 3), min_size=12, max_size=12))
def test_system_agrees_on_integer_parameters(vals):
    # integer entries keep both residuals exact, so the threshold cannot be straddled
    p = BracketParams.from_array(vals)
    a = np.abs(jacobi_system(p)).max() < 1e-10
    b = jacobi_check(family_brackets(p)) < 1e-10
    assert a == b


def test_curvature_operator_frame_flat():
    _, w = curvature_operator_frame(np.zeros((4, 4, 4, 4)), (1, 1, 1, 1))
    assert not w.Wplus.any() and not w.Wminus.any()


def test_builtin_registry_complete():
    assert set(BUILTIN_ALGEBRAS) >= {"type1", "type2", "type3_pos", "type3_zero", "remark1", "remark2", "remark3"}
