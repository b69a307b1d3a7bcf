"""Pure-Python inner loops for sparse polynomial and graded series arithmetic.

A polynomial is a ``dict`` mapping a packed monomial key (an ``int``) to a
nonzero rational.  Exponent vectors are packed into fixed-width bit fields,
so multiplying monomials is integer addition of their keys.

A graded series is a list indexed by total degree; entry ``d`` is a ``dict``
mapping a packed series monomial of degree ``d`` to a polynomial.

These functions never mutate their inputs.  The compiled module
``_kernels`` exports the same names with the same semantics.
"""

BACKEND = "python"


def poly_add(a, b):
    if not a:
        return dict(b)
    r = dict(a)
    for k, v in b.items():
        s = r.get(k)
        if s is None:
            r[k] = v
        else:
            s = s + v
            if s:
                r[k] = s
            else:
                del r[k]
    return r


def poly_sub(a, b):
    r = dict(a)
    for k, v in b.items():
        s = r.get(k)
        if s is None:
            r[k] = -v
        else:
            s = s - v
            if s:
                r[k] = s
            else:
                del r[k]
    return r


def poly_scale(a, c):
    if not c:
        return {}
    return {k: v * c for k, v in a.items()}


def poly_mul_acc(acc, a, b):
    """acc += a*b in place.  Zero entries may be left behind; see prune."""
    get = acc.get
    for ka, va in a.items():
        for kb, vb in b.items():
            k = ka + kb
            acc[k] = get(k, 0) + va * vb


def prune(acc):
    return {k: v for k, v in acc.items() if v}


def poly_mul(a, b):
    if not a or not b:
        return {}
    if len(a) == 1:
        (ka, va), = a.items()
        return {ka + kb: va * vb for kb, vb in b.items()}
    if len(b) == 1:
        (kb, vb), = b.items()
        return {ka + kb: va * vb for ka, va in a.items()}
    acc = {}
    poly_mul_acc(acc, a, b)
    return prune(acc)


def conv_degree(A, B, d, start):
    """Degree-``d`` component of sum_{i >= start} A[i] * B[d - i]."""
    out = {}
    la = len(A)
    lb = len(B)
    for i in range(start, min(d, la - 1) + 1):
        j = d - i
        if j >= lb:
            continue
        Ai = A[i]
        Bj = B[j]
        if not Ai or not Bj:
            continue
        for ka, pa in Ai.items():
            for kb, pb in Bj.items():
                k = ka + kb
                acc = out.get(k)
                if acc is None:
                    acc = out[k] = {}
                poly_mul_acc(acc, pa, pb)
    res = {}
    for k, acc in out.items():
        p = prune(acc)
        if p:
            res[k] = p
    return res


def graded_mul(A, B, n):
    return [conv_degree(A, B, d, 0) for d in range(n + 1)]
