# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled inner loops; drop-in replacement for ``_kernels_py``.

Coefficients stay Python objects (gmpy2 ``mpq`` or ``Fraction``); the gain
comes from walking dicts with ``PyDict_Next`` and skipping bytecode dispatch
in the multiply-accumulate loop.
"""

from cpython.dict cimport PyDict_Next, PyDict_GetItem, PyDict_SetItem
from cpython.object cimport PyObject

BACKEND = "cython"


def poly_add(dict a, dict b):
    cdef dict r = dict(a)
    cdef Py_ssize_t pos = 0
    cdef PyObject *kp
    cdef PyObject *vp
    cdef PyObject *sp
    cdef object s
    while PyDict_Next(b, &pos, &kp, &vp):
        sp = PyDict_GetItem(r, <object>kp)
        if sp is NULL:
            r[<object>kp] = <object>vp
        else:
            s = <object>sp + <object>vp
            if s:
                r[<object>kp] = s
            else:
                del r[<object>kp]
    return r


def poly_sub(dict a, dict b):
    cdef dict r = dict(a)
    cdef Py_ssize_t pos = 0
    cdef PyObject *kp
    cdef PyObject *vp
    cdef PyObject *sp
    cdef object s
    while PyDict_Next(b, &pos, &kp, &vp):
        sp = PyDict_GetItem(r, <object>kp)
        if sp is NULL:
            r[<object>kp] = -<object>vp
        else:
            s = <object>sp - <object>vp
            if s:
                r[<object>kp] = s
            else:
                del r[<object>kp]
    return r


def poly_scale(dict a, c):
    if not c:
        return {}
    cdef dict r = {}
    cdef Py_ssize_t pos = 0
    cdef PyObject *kp
    cdef PyObject *vp
    while PyDict_Next(a, &pos, &kp, &vp):
        r[<object>kp] = <object>vp * c
    return r


cdef inline void _mul_acc(dict acc, dict a, dict b) except *:
    cdef Py_ssize_t pa = 0
    cdef Py_ssize_t pb
    cdef PyObject *ka
    cdef PyObject *va
    cdef PyObject *kb
    cdef PyObject *vb
    cdef PyObject *old
    cdef object k, prod
    while PyDict_Next(a, &pa, &ka, &va):
        pb = 0
        while PyDict_Next(b, &pb, &kb, &vb):
            k = <object>ka + <object>kb
            prod = <object>va * <object>vb
            old = PyDict_GetItem(acc, k)
            if old is NULL:
                PyDict_SetItem(acc, k, prod)
            else:
                PyDict_SetItem(acc, k, <object>old + prod)


def poly_mul_acc(dict acc, dict a, dict b):
    _mul_acc(acc, a, b)


cdef dict _prune(dict acc):
    cdef dict r = {}
    cdef Py_ssize_t pos = 0
    cdef PyObject *kp
    cdef PyObject *vp
    while PyDict_Next(acc, &pos, &kp, &vp):
        if <object>vp:
            r[<object>kp] = <object>vp
    return r


def prune(dict acc):
    return _prune(acc)


def poly_mul(dict a, dict b):
    if not a or not b:
        return {}
    cdef dict acc = {}
    _mul_acc(acc, a, b)
    return _prune(acc)


def conv_degree(list A, list B, Py_ssize_t d, Py_ssize_t start):
    cdef dict out = {}
    cdef Py_ssize_t la = len(A)
    cdef Py_ssize_t lb = len(B)
    cdef Py_ssize_t i, j, hi
    cdef dict Ai, Bj, acc
    cdef Py_ssize_t pa, pb
    cdef PyObject *ka
    cdef PyObject *va
    cdef PyObject *kb
    cdef PyObject *vb
    cdef PyObject *slot
    cdef object k
    hi = d if d < la - 1 else la - 1
    for i in range(start, hi + 1):
        j = d - i
        if j >= lb:
            continue
        Ai = <dict>A[i]
        Bj = <dict>B[j]
        if not Ai or not Bj:
            continue
        pa = 0
        while PyDict_Next(Ai, &pa, &ka, &va):
            pb = 0
            while PyDict_Next(Bj, &pb, &kb, &vb):
                k = <object>ka + <object>kb
                slot = PyDict_GetItem(out, k)
                if slot is NULL:
                    acc = {}
                    out[k] = acc
                else:
                    acc = <dict>slot
                _mul_acc(acc, <dict>va, <dict>vb)
    cdef dict res = {}
    cdef dict p
    cdef Py_ssize_t pos = 0
    while PyDict_Next(out, &pos, &ka, &va):
        p = _prune(<dict>va)
        if p:
            res[<object>ka] = p
    return res


def graded_mul(list A, list B, Py_ssize_t n):
    return [conv_degree(A, B, d, 0) for d in range(n + 1)]
