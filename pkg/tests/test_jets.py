import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gensym.jets import (
    BinOp, DomainError, ExprSyntaxError, Jet3, Num, Param, UnboundParameterError, Var,
    eval_jet, eval_value, finite_diff_jet, parse_expr, print_expr,
)

P0 = (0.3, -0.4, 0.2, 0.7)


def close(a, b, tol):
    return np.allclose(a, b, rtol=tol, atol=tol)


# -- parser --------------------------------------------------------------------

def test_parse_top_level_subtraction():
    e = parse_expr("sinh(2*u) - cosh(2*u)*sin(2*v)")
    assert isinstance(e, BinOp) and e.op == "-"


def test_parse_variable():
    assert isinstance(parse_expr("x"), Var)


def test_power_is_right_associative():
    assert eval_value("2^3^2", P0) == 512.0


def test_unary_minus_binds_looser_than_power():
    assert eval_value("-2^2", P0) == -4.0


def test_aliases_map_to_slots():
    for alias, slot in (("x1", "x"), ("x2", "y"), ("y1", "u"), ("y2", "v"), ("z", "u"), ("t", "v")):
        assert eval_value(alias, P0) == eval_value(slot, P0)


def test_constants():
    assert eval_value("pi", P0) == math.pi
    assert eval_value("e", P0) == math.e


def test_unknown_identifier_is_parameter():
    assert isinstance(parse_expr("lambda"), Param)
    with pytest.raises(UnboundParameterError):
        eval_jet("lambda*x", P0)
    assert eval_value("lambda*x", P0, {"lambda": 2.0}) == pytest.approx(0.6)


def test_syntax_error_reports_offset():
    with pytest.raises(ExprSyntaxError) as exc:
        parse_expr("x + * y")
    assert exc.value.offset == 4


def test_unknown_function():
    with pytest.raises(ExprSyntaxError):
        parse_expr("tanh(x)")


def test_numbers():
    assert isinstance(parse_expr("1.5e-3"), Num)
    assert eval_value("1.5e-3", P0) == 1.5e-3


# -- round trip ------------------------------------------------------------------

atoms = st.sampled_from(["x", "y", "u", "v", "lambda", "2", "0.5", "pi"])
funcs = st.sampled_from(["exp", "log", "sqrt", "sin", "cos", "tan", "sec", "sinh", "cosh"])


def _exprs():
    return st.recursive(
        atoms,
        lambda ch: st.one_of(
            st.tuples(ch, st.sampled_from("+-*/^"), ch).map(lambda t: f"({t[0]}){t[1]}({t[2]})"),
            st.tuples(funcs, ch).map(lambda t: f"{t[0]}({t[1]})"),
            ch.map(lambda s: f"-({s})"),
        ),
        max_leaves=8,
    )


@given(_exprs())
def test_parse_print_round_trip(src):
    tree = parse_expr(src)
    assert parse_expr(print_expr(tree)) == tree


# -- jets ----------------------------------------------------------------------

def test_product_jet():
    j = eval_jet("x*y", (2, 3, 0, 0))
    assert j.value == 6
    assert j.grad.tolist() == [3, 2, 0, 0]
    assert j.hess[0, 1] == 1 and j.hess[1, 0] == 1
    assert not j.third.any()


def test_exp_at_zero():
    j = eval_jet("exp(x)", (0, 0.5, 0.5, 0.5))
    assert (j.value, j.grad[0], j.hess[0, 0], j.third[0, 0, 0]) == (1, 1, 1, 1)


def test_sqrt_against_fd():
    e = "sqrt(1+x^2+y^2)"
    a = eval_jet(e, (1, 1, 0, 0))
    b = finite_diff_jet(e, (1, 1, 0, 0), h=1e-3)
    assert a.value == pytest.approx(math.sqrt(3))
    assert close(a.grad, b.grad, 1e-6)
    assert close(a.hess, b.hess, 1e-6)
    assert close(a.third, b.third, 1e-5)


def test_fd_sin():
    assert finite_diff_jet("sin(x)", (0.5, 0, 0, 0), h=1e-4).grad[0] == pytest.approx(math.cos(0.5), abs=1e-8)


def test_fd_constant():
    j = finite_diff_jet("c", P0, {"c": 3.0})
    assert not (j.grad.any() or j.hess.any() or j.third.any())


def test_fd_cubic_third():
    assert finite_diff_jet("x^3", P0, h=1e-3).third[0, 0, 0] == pytest.approx(6, abs=1e-3)


def test_fd_step_range():
    with pytest.raises(ValueError):
        finite_diff_jet("x", P0, h=1e-7)


@pytest.mark.parametrize("src,point", [
    ("log(x)", (0, 0, 0, 0)), ("log(x)", (-1, 0, 0, 0)), ("sqrt(x)", (-1, 0, 0, 0)),
    ("1/x", (0, 0, 0, 0)), ("x^0.5", (-1, 0, 0, 0)), ("1/(x - x)", (0.5, 0, 0, 0)),
])
def test_domain_errors(src, point):
    with pytest.raises(DomainError):
        eval_jet(src, point)


def test_jets_immutable():
    j = eval_jet("x", P0)
    with pytest.raises(AttributeError):
        j.value = 1.0
    with pytest.raises(ValueError):
        j.grad[0] = 2.0


def _random_poly(rng):
    terms = []
    for _ in range(4):
        mono = "*".join(rng.choice(list("xyuv"), size=rng.integers(0, 4)).tolist()) or "1"
        terms.append(f"{rng.normal():.6f}*{mono}")
    return "+".join(terms)


@given(st.integers(0, 10_000))
def test_product_rule_on_polynomials(seed):
    rng = np.random.default_rng(seed)
    p, q = _random_poly(rng), _random_poly(rng)
    pt = rng.uniform(-1, 1, 4)
    direct = eval_jet(f"({p})*({q})", pt)
    prod = eval_jet(p, pt) * eval_jet(q, pt)
    for a, b in zip((direct.value, direct.grad, direct.hess, direct.third),
                    (prod.value, prod.grad, prod.hess, prod.third)):
        assert np.allclose(a, b, rtol=1e-13, atol=1e-13)


ELEMENTARY = {
    "exp": "exp(x*y - u/2)", "log": "log(2 + x*y + v^2)", "sqrt": "sqrt(3 + x - y*u)",
    "sin": "sin(x + 2*y*v)", "cos": "cos(u*v - x)", "tan": "tan(x/3 + y/4)",
    "sec": "sec(x/3 - v/4)", "sinh": "sinh(x*u + y)", "cosh": "cosh(v - x*y)",
}


@pytest.mark.parametrize("k,name", list(enumerate(sorted(ELEMENTARY))))
def test_ad_matches_fd(k, name):
    rng = np.random.default_rng(100 + k)
    src = ELEMENTARY[name]
    for _ in range(100):
        pt = rng.uniform(-1, 1, 4)
        a = eval_jet(src, pt)
        b = finite_diff_jet(src, pt, h=1e-3)
        scale2 = max(1.0, np.abs(a.hess).max())
        scale3 = max(1.0, np.abs(a.third).max())
        assert np.abs(a.grad - b.grad).max() <= 1e-5 * max(1.0, np.abs(a.grad).max())
        assert np.abs(a.hess - b.hess).max() <= 1e-5 * scale2
        assert np.abs(a.third - b.third).max() <= 1e-3 * scale3


@given(st.integers(0, 1000))
def test_derivative_arrays_symmetric(seed):
    pt = np.random.default_rng(seed).uniform(-1, 1, 4)
    j = eval_jet("exp(x*y)*sin(u - v^2) + sqrt(2 + x*v)", pt)
    assert np.array_equal(j.hess, j.hess.T)
    for p in itertools.permutations(range(3)):
        assert np.allclose(j.third, j.third.transpose(p), atol=1e-14)


def test_deterministic():
    a = eval_jet("cosh(x*y)/sqrt(1+u^2)", P0)
    b = eval_jet("cosh(x*y)/sqrt(1+u^2)", P0)
    assert a.value == b.value and np.array_equal(a.third, b.third)


def test_jet_arithmetic_with_scalars():
    x = Jet3.variable(0, 2.0)
    j = (3 - x) / 2 + 1
    assert j.value == 1.5 and j.grad[0] == -0.5
