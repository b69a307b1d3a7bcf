import os

import pytest
from hypothesis import given
from hypothesis import strategies as st

from toric_genera import _kernels_py as P
from toric_genera import kernels
from toric_genera.rational import Q

try:
    from toric_genera import _kernels as C
except ImportError:  # no compiler at install time
    C = None

needs_compiled = pytest.mark.skipif(C is None, reason="compiled kernels not built")

coef = st.builds(Q, st.integers(-9, 9).filter(bool), st.integers(1, 5))
poly = st.dictionaries(st.integers(0, 40), coef, max_size=6)


@st.composite
def graded(draw, n=4):
    out = []
    for d in range(n + 1):
        out.append(draw(st.dictionaries(st.sampled_from([d, d + 65536 * d, 2 * d]), poly, max_size=2)))
    return [{k: p for k, p in comp.items() if p} for comp in out]


def test_backend_selected():
    forced = os.environ.get("TORIC_GENERA_KERNELS", "").lower() == "python"
    assert kernels.BACKEND == ("cython" if C is not None and not forced else "python")


@given(poly, poly)
def test_python_poly_laws(a, b):
    assert P.poly_add(a, b) == P.poly_add(b, a)
    assert P.poly_sub(P.poly_add(a, b), b) == a
    assert P.poly_mul(a, b) == P.poly_mul(b, a)
    assert all(v for v in P.poly_mul(a, b).values())


@needs_compiled
@given(poly, poly, coef)
def test_parity_poly(a, b, c):
    assert C.poly_add(a, b) == P.poly_add(a, b)
    assert C.poly_sub(a, b) == P.poly_sub(a, b)
    assert C.poly_mul(a, b) == P.poly_mul(a, b)
    assert C.poly_scale(a, c) == P.poly_scale(a, c)


@needs_compiled
@given(graded(), graded(), st.integers(0, 4))
def test_parity_graded(A, B, n):
    assert C.graded_mul(A, B, n) == P.graded_mul(A, B, n)
    for d in range(n + 1):
        assert C.conv_degree(A, B, d, 1) == P.conv_degree(A, B, d, 1)


@needs_compiled
def test_inputs_not_mutated():
    a = {1: Q(1), 2: Q(-1)}
    b = {1: Q(-1)}
    before = (dict(a), dict(b))
    C.poly_add(a, b)
    C.poly_mul(a, b)
    assert (a, b) == before
