"""Sparse polynomials over Q in named parameter symbols.

Symbols live in one process-wide registry.  ``alpha, delta, eps, c, a, a2``
are registered first, in that order; anything else is appended on first use.
Exponent vectors are packed into 16-bit fields of a Python int, symbol ``i``
occupying bits ``16*i .. 16*i+15``.

Printing does not depend on registration order: preset symbols come first,
then the rest in natural name order (``g3 < g5 < g11``).
"""

import re

from . import kernels as K
from .rational import Q, as_rational, rational_str

BITS = 16
MASK = (1 << BITS) - 1

PRESET_SYMBOLS = ("alpha", "delta", "eps", "c", "a", "a2")

_names = []
_index = {}


class SymbolError(ValueError):
    pass


def register(name):
    """Return the registry index of ``name``, registering it if new."""
    idx = _index.get(name)
    if idx is None:
        if not name.isidentifier():
            raise SymbolError(f"invalid symbol name {name!r}")
        idx = len(_names)
        _names.append(name)
        _index[name] = idx
    return idx


for _n in PRESET_SYMBOLS:
    register(_n)


def is_registered(name):
    return name in _index


def symbol_names():
    return tuple(_names)


def pack(exps):
    """Pack ``{index: exponent}`` or a sequence of exponents into a key."""
    items = exps.items() if isinstance(exps, dict) else enumerate(exps)
    key = 0
    for i, e in items:
        if e < 0 or e > MASK:
            raise ValueError(f"exponent {e} out of range")
        key += e << (BITS * i)
    return key


def unpack(key, width=None):
    out = []
    while key:
        out.append(key & MASK)
        key >>= BITS
    if width is not None:
        out.extend([0] * (width - len(out)))
    return tuple(out)


def key_degree(key):
    d = 0
    while key:
        d += key & MASK
        key >>= BITS
    return d


def _natural(name):
    return tuple(int(p) if p.isdigit() else p for p in re.split(r"(\d+)", name))


_display = {"n": -1, "order": ()}


def display_order():
    """Registry indices in printing order."""
    if _display["n"] != len(_names):
        npre = len(PRESET_SYMBOLS)
        rest = sorted(range(npre, len(_names)), key=lambda i: _natural(_names[i]))
        _display["order"] = tuple(range(npre)) + tuple(rest)
        _display["n"] = len(_names)
    return _display["order"]


def _sort_key(key, width):
    e = unpack(key, width)
    e = tuple(e[i] for i in display_order())
    # total degree ascending, then lexicographically descending exponents
    return (sum(e), tuple(-x for x in e))


def _monomial_str(key, names):
    e = unpack(key, len(names))
    parts = []
    for i in display_order():
        if e[i] == 1:
            parts.append(names[i])
        elif e[i]:
            parts.append(f"{names[i]}^{e[i]}")
    return "*".join(parts)


def render_terms(terms, names, coeff_str):
    """Render ``[(monomial_str, coeff)]`` as ``"a - 2*b + 1/3*c"``."""
    out = []
    for mono, c in terms:
        cs = coeff_str(c)
        neg = cs.startswith("-")
        if neg:
            cs = cs[1:]
        if not mono:
            body = cs
        elif cs == "1":
            body = mono
        else:
            body = f"{cs}*{mono}"
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out) if out else "0"


class ParamPoly:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("_t",)

    def __init__(self, terms=None):
        # terms: packed key -> nonzero rational.  Not copied; callers hand over ownership.
        self._t = terms if terms is not None else {}

    @classmethod
    def const(cls, value):
        q = as_rational(value)
        return cls({0: q} if q else {})

    @classmethod
    def symbol(cls, name):
        return cls({1 << (BITS * register(name)): Q(1)})

    @classmethod
    def coerce(cls, value):
        if isinstance(value, ParamPoly):
            return value
        if isinstance(value, str):
            text = value.strip()
            if text.isidentifier():
                return cls.symbol(text)
            return cls.const(text)
        return cls.const(value)

    @property
    def terms(self):
        return self._t

    def is_zero(self):
        return not self._t

    def is_constant(self):
        return not self._t or (len(self._t) == 1 and 0 in self._t)

    def constant_term(self):
        return self._t.get(0, Q(0))

    def symbols(self):
        names = set()
        for k in self._t:
            for i, e in enumerate(unpack(k)):
                if e:
                    names.add(_names[i])
        return names

    def degree(self):
        return max((key_degree(k) for k in self._t), default=-1)

    def coefficient(self, monomial):
        """Coefficient of ``{name: exponent}``."""
        key = pack({register(n): e for n, e in monomial.items()})
        return self._t.get(key, Q(0))

    def degree_in(self, name):
        i = register(name)
        return max(((k >> (BITS * i)) & MASK for k in self._t), default=-1)

    def coefficients_in(self, name):
        """Split as ``{e: ParamPoly}`` with ``self = sum(name**e * p_e)``."""
        i = register(name)
        shift = BITS * i
        out = {}
        for k, v in self._t.items():
            e = (k >> shift) & MASK
            out.setdefault(e, {})[k - (e << shift)] = v
        return {e: ParamPoly(t) for e, t in out.items()}

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return ParamPoly(K.poly_add(self._t, other._t))

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return ParamPoly(K.poly_sub(self._t, other._t))

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        return ParamPoly({k: -v for k, v in self._t.items()})

    def __mul__(self, other):
        if isinstance(other, ParamPoly):
            return ParamPoly(K.poly_mul(self._t, other._t))
        try:
            q = as_rational(other)
        except (TypeError, ValueError):
            return NotImplemented
        return ParamPoly(K.poly_scale(self._t, q))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, ParamPoly):
            if not other.is_constant() or other.is_zero():
                raise ZeroDivisionError("division by a non-constant or zero polynomial")
            other = other.constant_term()
        q = as_rational(other)
        return ParamPoly(K.poly_scale(self._t, 1 / q))

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power")
        r = ParamPoly.const(1)
        b = self
        while n:
            if n & 1:
                r = r * b
            n >>= 1
            if n:
                b = b * b
        return r

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self._t == other._t

    def __hash__(self):
        return hash(frozenset(self._t.items()))

    def __bool__(self):
        return bool(self._t)

    def substitute(self, bindings):
        """Replace symbols by rationals or ParamPolys.

        ``bindings`` maps symbol names to values.  Unknown names raise
        ``SymbolError``.
        """
        sub = {}
        for name, val in bindings.items():
            if name not in _index:
                raise SymbolError(f"unknown symbol {name!r}")
            sub[_index[name]] = ParamPoly.coerce(val)
        if not sub:
            return self
        out = ParamPoly()
        cache = {}
        for k, v in self._t.items():
            exps = unpack(k)
            rest = 0
            factor = ParamPoly.const(v)
            for i, e in enumerate(exps):
                if not e:
                    continue
                if i in sub:
                    p = cache.get((i, e))
                    if p is None:
                        p = cache[(i, e)] = sub[i] ** e
                    factor = factor * p
                else:
                    rest += e << (BITS * i)
            if rest:
                factor = ParamPoly(K.poly_mul(factor._t, {rest: Q(1)}))
            out = out + factor
        return out

    def evaluate(self, bindings):
        """Substitute rationals for every symbol present; returns a rational."""
        r = self.substitute(bindings)
        if not r.is_constant():
            missing = sorted(r.symbols())
            raise SymbolError(f"unbound symbols: {', '.join(missing)}")
        return r.constant_term()

    def sorted_terms(self):
        width = len(_names)
        return sorted(self._t.items(), key=lambda kv: _sort_key(kv[0], width))

    def __str__(self):
        return render_terms(
            [(_monomial_str(k, _names), v) for k, v in self.sorted_terms()],
            _names,
            rational_str,
        )

    def __repr__(self):
        return f"ParamPoly({str(self)!r})"


def _coerce(value):
    if isinstance(value, ParamPoly):
        return value
    try:
        return ParamPoly.const(value)
    except (TypeError, ValueError):
        return NotImplemented


def sym(name):
    return ParamPoly.symbol(name)


def const(value):
    return ParamPoly.const(value)
