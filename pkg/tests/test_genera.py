from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from toric_genera.errors import SpecError
from toric_genera.genera import (
    cpn_values,
    elliptic_sine,
    exponent_from_cpn,
    exponent_from_spec,
    fgl_from_exponent,
    krichever_b2zero,
    parse_genus_spec,
    specialize,
    todd_exponent,
)
from toric_genera.params import ParamPoly, sym
from toric_genera.rational import Q
from toric_genera.series import ExponentSeries, TruncSeries, exp_linear

small = st.fractions(min_value=-3, max_value=3, max_denominator=4)


def _coeffs(f):
    return [Fraction(str(c)) for c in f.coefficients()]


def _sympy_coeffs(expr, n):
    x = sympy.Symbol("x")
    s = sympy.series(expr(x), x, 0, n + 1).removeO()
    return [Fraction(str(s.coeff(x, k))) for k in range(n + 1)]


# --------------------------------------------------------------------------
# elliptic sine


@pytest.mark.parametrize(
    "delta,eps,expr",
    [
        (Q(1, 2), 0, sympy.sin),
        (Q(-1, 2), 0, sympy.sinh),
        (1, 1, sympy.tanh),
        (0, 0, lambda x: x),
    ],
)
def test_sn_degenerations_match_sympy(delta, eps, expr):
    # (sin')^2 = 1 - sin^2, (sinh')^2 = 1 + sinh^2, (tanh')^2 = (1 - tanh^2)^2
    assert _coeffs(elliptic_sine(delta, eps, 13)) == _sympy_coeffs(expr, 13)


@pytest.mark.parametrize("m", ["0.3", "0.7"])
def test_sn_matches_jacobi_numerically(m):
    # sn(x | m) solves (f')^2 = 1 - (1 + m) f^2 + m f^4
    mpmath.mp.dps = 40
    mm = mpmath.mpf(m)
    expected = mpmath.taylor(lambda x: mpmath.ellipfun("sn", x, m=mm), 0, 11)
    mq = Q(Fraction(m))
    got = elliptic_sine((1 + mq) / 2, mq, 11).coefficients()
    for e, c in zip(expected, got):
        q = Fraction(str(c))
        assert abs(e - mpmath.mpf(q.numerator) / q.denominator) < mpmath.mpf(10) ** -25


def test_sn_first_coefficients_symbolic():
    f = elliptic_sine("delta", "eps", 5)
    assert f.coefficient(3) == sym("delta") * Q(-1, 3)
    assert f.coefficient(5) == (sym("delta") ** 2 + sym("eps") * 3) * Q(1, 30)


def test_sn_ode_residual_symbolic_order_12():
    f = elliptic_sine("delta", "eps", 13)
    df = f.derivative("x").truncate(12)
    g = f.plain().truncate(12)
    g2 = g * g
    rhs = TruncSeries.one(("x",), 12) - g2.scale(sym("delta") * 2) + (g2 * g2).scale(sym("eps"))
    assert (df * df - rhs).is_zero()


@given(small, small, st.integers(1, 14))
def test_sn_is_odd(delta, eps, n):
    f = elliptic_sine(Q(delta), Q(eps), n)
    assert all(not f.coefficient(k) for k in range(0, n + 1, 2))


def test_kr0_is_exp_times_sn():
    f = krichever_b2zero("alpha", "delta", "eps", 9)
    expected = exp_linear("alpha", (1,), ("x",), 9) * elliptic_sine("delta", "eps", 9)
    assert f.plain() == expected


def test_todd_matches_sympy_and_odd_factorisation():
    assert _coeffs(todd_exponent(10)) == _sympy_coeffs(lambda x: 1 - sympy.exp(-x), 10)
    # 1 - e^{-x} = e^{-x/2} * 2 sinh(x/2), and 2 sinh(x/2) = sn(-1/8, 0)
    assert todd_exponent(10).plain() == exp_linear(Q(-1, 2), (1,), ("x",), 10) * elliptic_sine(Q(-1, 8), 0, 10)


# --------------------------------------------------------------------------
# CP^k values and formal group laws


def test_cpn_values():
    assert cpn_values(todd_exponent(6), 5) == [ParamPoly.const(1)] * 5
    assert all(v.is_zero() for v in cpn_values(exponent_from_spec("id", 5), 4))
    assert cpn_values(elliptic_sine("d", "e", 3), 2) == [ParamPoly(), sym("d")]


@given(st.lists(small, min_size=4, max_size=7))
def test_cpn_round_trip(coeffs):
    f = ExponentSeries.from_coefficients("x", [0, 1] + [Q(c) for c in coeffs])
    K = f.order - 1
    assert exponent_from_cpn(cpn_values(f, K), f.order) == f


@pytest.mark.parametrize("spec", ["sn", "todd"])
def test_fgl_axioms_order_8(spec):
    F = fgl_from_exponent(exponent_from_spec(spec, 8), 8)
    assert F.check_unit() and F.check_symmetry() and F.check_associativity()


@settings(max_examples=10)
@given(st.lists(small, min_size=4, max_size=4))
def test_fgl_axioms_random(coeffs):
    f = ExponentSeries.from_coefficients("x", [0, 1] + [Q(c) for c in coeffs])
    F = fgl_from_exponent(f)
    assert F.check_unit() and F.check_symmetry() and F.check_associativity()


def test_todd_fgl_is_multiplicative():
    F = fgl_from_exponent(todd_exponent(6))
    assert str(F) == "x + y - x*y + O(7)"


# --------------------------------------------------------------------------
# genus specs


@pytest.mark.parametrize(
    "text",
    ["id", "todd", "sn:delta=d,eps=e", "sn:delta=1,eps=0", "kr0:alpha=a,delta=1/2,eps=e", "odd:alpha=0,g3=1/3,g5=1", "explicit:c2=1,c4=-2"],
)
def test_spec_round_trip(text):
    spec = parse_genus_spec(text)
    assert parse_genus_spec(str(spec)) == spec


def test_spec_defaults():
    assert str(parse_genus_spec("sn")) == "sn:delta=delta,eps=eps"
    assert str(parse_genus_spec("odd:g5=1")) == "odd:alpha=0,g5=1"


@pytest.mark.parametrize(
    "text",
    ["foo", "sn:delta=x1", "sn:delta=t", "sn:zeta=1", "sn:delta=1,delta=2", "odd:g4=1", "explicit:c1=1", "sn:delta=1/0", "sn:delta"],
)
def test_spec_errors(text):
    with pytest.raises(SpecError):
        parse_genus_spec(text)


def test_specialize():
    f = elliptic_sine("delta", "eps", 7)
    g = specialize(f, {"delta": 1, "eps": 0})
    assert g == elliptic_sine(1, 0, 7)
    with pytest.raises(SpecError):
        specialize(f, {"nonexistent_symbol_q": 1})
