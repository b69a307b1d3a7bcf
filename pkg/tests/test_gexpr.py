import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from toric_genera.errors import ContractError, OrderError
from toric_genera.genera import elliptic_sine, odd_family
from toric_genera.gexpr import DerivativeTable, GExpr
from toric_genera.params import ParamPoly
from toric_genera.rational import Q

from numeric import gexpr_value

V = ("x", "y")
forms = st.tuples(st.integers(-2, 2), st.integers(-2, 2)).filter(any)


@st.composite
def monomials(draw):
    facs = {}
    for _ in range(draw(st.integers(1, 3))):
        f = (draw(st.integers(0, 2)), draw(forms))
        facs[f] = facs.get(f, 0) + draw(st.sampled_from([-2, -1, 1, 2]))
    return GExpr.from_monomial(V, {k: e for k, e in facs.items() if e}, draw(st.integers(-3, 3)))


@st.composite
def expressions(draw):
    e = GExpr.zero(V)
    for _ in range(draw(st.integers(1, 3))):
        e = e + draw(monomials())
    return e


@given(expressions())
def test_canonical_odd_is_idempotent(e):
    c = e.canonical_odd()
    assert c.canonical_odd() == c
    assert all(f[-1] > 0 or (f[-1] == 0 and f[0] > 0) for f in c.forms())


@given(expressions(), expressions())
def test_cleared_numerators_multiply(a, b):
    num, den = (a * b).cleared()
    assert all(e > 0 for k in num.terms for _, e in k)
    assert num == (a * b) * GExpr.from_monomial(V, den)


@given(expressions(), st.tuples(st.integers(1, 9), st.integers(1, 9)))
def test_canonical_odd_preserves_values(e, pt):
    mpmath.mp.dps = 30
    g = [0, 1, 0, Q(1, 3), 0, 2]  # odd
    point = (mpmath.mpf(pt[0]) / 7, mpmath.mpf(pt[1]) / 11)
    assert mpmath.almosteq(gexpr_value(e, g, point), gexpr_value(e.canonical_odd(), g, point), 1e-20)


def test_substitute_and_render():
    e = GExpr.g((1, -1), V) * GExpr.g((0, 1), V, d=1) / GExpr.g((1, 0), V, power=2)
    assert str(e) == "g'(y)*g(x-y)/(g(x)^2)"
    s = e.substitute({"x": (1, 1), "y": (0, 1)}, ("u", "v"))
    assert str(s) == "g'(v)*g(u)/(g(u+v)^2)"
    assert str(GExpr.g((-1, 0), V).canonical_odd()) == "-g(x)"
    assert str(GExpr.g((-1, 0), V, d=1).canonical_odd()) == "g'(x)"


def test_inverse_requires_single_term():
    with pytest.raises(ContractError):
        (GExpr.g((1, 0), V) + GExpr.g((0, 1), V)).inverse()


def test_derivative_table():
    t = DerivativeTable(elliptic_sine("delta", "eps", 9))
    assert t.derivative(1).coefficient(0) == ParamPoly.const(1)
    assert t.valuation(0) == 1 and t.valuation(1) == 0
    with pytest.raises(OrderError):
        t.at(2, (1, 1), V, 9)
