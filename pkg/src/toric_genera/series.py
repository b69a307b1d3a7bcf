"""Truncated multivariate power series and Laurent series over ParamPoly.

A ``TruncSeries`` is stored graded by total degree: ``_g[d]`` maps a packed
series monomial of degree ``d`` to a raw coefficient dict (packed parameter
monomial -> rational).  Univariate series are therefore dense in degree.
Truncation is by total degree in the series variables only; parameter
symbols are never truncated.
"""

from math import factorial

from . import kernels as K
from .errors import ContractError, InvalidExponent, NotAUnit, OrderError, DivisibilityError
from .params import BITS, MASK, ParamPoly, pack, render_terms, unpack
from .rational import Q, as_rational


def _poly_of(value):
    if isinstance(value, ParamPoly):
        return value.terms
    if isinstance(value, str):
        return ParamPoly.symbol(value).terms
    return ParamPoly.const(value).terms


def _coeff_str(p):
    p = ParamPoly(p) if isinstance(p, dict) else p
    s = str(p)
    return s if len(p.terms) == 1 else f"({s})"


class TruncSeries:
    """Immutable power series in ``variables`` known up to total degree ``order``."""

    __slots__ = ("variables", "order", "_g")

    def __init__(self, variables, order, graded=None):
        if order < 0:
            raise ContractError("order must be non-negative")
        self.variables = tuple(variables)
        self.order = order
        if graded is None:
            graded = [{} for _ in range(order + 1)]
        elif len(graded) != order + 1:
            graded = list(graded[: order + 1]) + [{} for _ in range(order + 1 - len(graded))]
        self._g = graded

    # construction ---------------------------------------------------------

    @classmethod
    def zero(cls, variables, order):
        return cls(variables, order)

    @classmethod
    def constant(cls, value, variables, order):
        p = _poly_of(value)
        s = cls(variables, order)
        if p:
            s._g[0] = {0: dict(p)}
        return s

    @classmethod
    def one(cls, variables, order):
        return cls.constant(1, variables, order)

    @classmethod
    def var(cls, name, variables, order):
        variables = tuple(variables)
        if name not in variables:
            raise ContractError(f"{name!r} is not one of {variables}")
        s = cls(variables, order)
        if order >= 1:
            s._g[1] = {1 << (BITS * variables.index(name)): {0: Q(1)}}
        return s

    @classmethod
    def from_terms(cls, variables, order, terms):
        """Build from ``{exponent tuple: coefficient}``; terms above ``order`` are dropped."""
        variables = tuple(variables)
        s = cls(variables, order)
        for idx, c in terms.items():
            if len(idx) != len(variables):
                raise ContractError(f"multi-index {idx} does not match {variables}")
            d = sum(idx)
            if d > order:
                continue
            p = _poly_of(c)
            if not p:
                continue
            key = pack(idx)
            old = s._g[d].get(key)
            s._g[d][key] = K.poly_add(old, p) if old else dict(p)
            if not s._g[d][key]:
                del s._g[d][key]
        return s

    @classmethod
    def from_coefficients(cls, var, coeffs, order=None):
        """Univariate series ``sum coeffs[k] * var**k``."""
        if order is None:
            order = len(coeffs) - 1
        s = cls((var,), order)
        for k, c in enumerate(coeffs[: order + 1]):
            p = _poly_of(c)
            if p:
                s._g[k] = {k: dict(p)}
        return s

    # access ---------------------------------------------------------------

    @property
    def nvars(self):
        return len(self.variables)

    def coefficient(self, index):
        """Coefficient of the monomial with exponent tuple ``index`` (or an int for univariate)."""
        if isinstance(index, int):
            index = (index,)
        d = sum(index)
        if d > self.order:
            raise OrderError(f"degree {d} exceeds order {self.order}")
        return ParamPoly(self._g[d].get(pack(index), {}))

    def __getitem__(self, index):
        return self.coefficient(index)

    def coefficients(self):
        """Univariate only: list of ParamPoly for degrees 0..order."""
        self._require_univariate()
        return [ParamPoly(self._g[d].get(d, {})) for d in range(self.order + 1)]

    def terms(self):
        """Nonzero terms as ``(exponent tuple, ParamPoly)`` in canonical order."""
        out = []
        n = self.nvars
        for d, comp in enumerate(self._g):
            items = [(unpack(k, n), ParamPoly(p)) for k, p in comp.items()]
            items.sort(key=lambda it: tuple(-e for e in it[0]))
            out.extend(items)
        return out

    def is_zero(self):
        return not any(self._g)

    def __bool__(self):
        return not self.is_zero()

    def valuation(self):
        """Lowest degree with a nonzero component, or ``None`` for zero."""
        for d, comp in enumerate(self._g):
            if comp:
                return d
        return None

    def constant_term(self):
        return ParamPoly(self._g[0].get(0, {}))

    def homogeneous_part(self, d):
        s = TruncSeries(self.variables, self.order)
        if d <= self.order:
            s._g[d] = self._g[d]
        return s

    def truncate(self, order):
        if order > self.order:
            raise OrderError(f"cannot raise order {self.order} to {order}")
        return TruncSeries(self.variables, order, self._g[: order + 1])

    def parameter_symbols(self):
        out = set()
        for comp in self._g:
            for p in comp.values():
                out |= ParamPoly(p).symbols()
        return out

    # arithmetic -----------------------------------------------------------

    def _check(self, other):
        if not isinstance(other, TruncSeries):
            raise ContractError(f"expected TruncSeries, got {type(other).__name__}")
        if self.variables != other.variables:
            raise ContractError(f"variable mismatch {self.variables} vs {other.variables}")
        if self.order != other.order:
            raise ContractError(f"order mismatch {self.order} vs {other.order}")

    def _scalar(self, value):
        if isinstance(value, TruncSeries):
            return None
        try:
            return _poly_of(value)
        except (TypeError, ValueError):
            return None

    def __add__(self, other):
        p = self._scalar(other)
        if p is not None:
            other = TruncSeries.constant(ParamPoly(p), self.variables, self.order)
        self._check(other)
        g = []
        for a, b in zip(self._g, other._g):
            if not b:
                g.append(a)
                continue
            if not a:
                g.append(b)
                continue
            r = dict(a)
            for k, pb in b.items():
                pa = r.get(k)
                if pa is None:
                    r[k] = pb
                else:
                    s = K.poly_add(pa, pb)
                    if s:
                        r[k] = s
                    else:
                        del r[k]
            g.append(r)
        return TruncSeries(self.variables, self.order, g)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries(
            self.variables,
            self.order,
            [{k: {m: -v for m, v in p.items()} for k, p in comp.items()} for comp in self._g],
        )

    def __sub__(self, other):
        p = self._scalar(other)
        if p is not None:
            other = TruncSeries.constant(ParamPoly(p), self.variables, self.order)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, value):
        p = _poly_of(value)
        if not p:
            return TruncSeries(self.variables, self.order)
        g = []
        for comp in self._g:
            r = {}
            for k, q in comp.items():
                m = K.poly_mul(q, p)
                if m:
                    r[k] = m
            g.append(r)
        return TruncSeries(self.variables, self.order, g)

    def __mul__(self, other):
        p = self._scalar(other)
        if p is not None:
            return self.scale(ParamPoly(p))
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return ts_mul(self, other)

    def __rmul__(self, other):
        p = self._scalar(other)
        if p is None:
            return NotImplemented
        return self.scale(ParamPoly(p))

    def __truediv__(self, other):
        if isinstance(other, TruncSeries):
            return ts_mul(self, ts_invert_unit(other))
        q = as_rational(other) if not isinstance(other, ParamPoly) else other.constant_term()
        if isinstance(other, ParamPoly) and not other.is_constant():
            raise NotAUnit("division by a non-constant parameter polynomial")
        return self.scale(ParamPoly.const(1 / q))

    def __pow__(self, n):
        if n < 0:
            return ts_invert_unit(self) ** (-n)
        r = TruncSeries.one(self.variables, self.order)
        b = self
        while n:
            if n & 1:
                r = r * b
            n >>= 1
            if n:
                b = b * b
        return r

    def __eq__(self, other):
        if isinstance(other, TruncSeries):
            return (
                self.variables == other.variables
                and self.order == other.order
                and all(a == b for a, b in zip(self._g, other._g))
            )
        p = self._scalar(other)
        if p is None:
            return NotImplemented
        return self == TruncSeries.constant(ParamPoly(p), self.variables, self.order)

    def __hash__(self):
        return hash((self.variables, self.order, str(self)))

    # calculus and substitutions ------------------------------------------

    def derivative(self, var):
        return ts_derivative(self, var)

    def substitute_params(self, bindings):
        g = []
        for comp in self._g:
            r = {}
            for k, p in comp.items():
                q = ParamPoly(p).substitute(bindings)
                if q:
                    r[k] = q.terms
            g.append(r)
        return type(self)._rebuild(self, g)

    @staticmethod
    def _rebuild(template, graded):
        return TruncSeries(template.variables, template.order, graded)

    def coefficient_series(self, var, k):
        """Coefficient of ``var**k`` as a series in the remaining variables (order N-k)."""
        i = self._index(var)
        shift = BITS * i
        rest = self.variables[:i] + self.variables[i + 1:]
        order = self.order - k
        if order < 0:
            raise OrderError(f"{var}^{k} is beyond order {self.order}")
        out = TruncSeries(rest, order)
        for d, comp in enumerate(self._g):
            if d < k:
                continue
            for key, p in comp.items():
                if (key >> shift) & MASK != k:
                    continue
                low = key & ((1 << shift) - 1)
                high = key >> (shift + BITS)
                out._g[d - k][low | (high << shift)] = p
        return out

    def at_zero(self, var):
        return self.coefficient_series(var, 0)

    def divide_by_var(self, var):
        """Exact division by ``var``; raises DivisibilityError unless every term contains it."""
        i = self._index(var)
        shift = BITS * i
        if self.order == 0:
            raise OrderError("cannot divide an order-0 series")
        out = TruncSeries(self.variables, self.order - 1)
        one = 1 << shift
        for d, comp in enumerate(self._g):
            for key, p in comp.items():
                if not (key >> shift) & MASK:
                    raise DivisibilityError(
                        f"term {unpack(key, self.nvars)} is not divisible by {var}"
                    )
                if d - 1 <= out.order:
                    out._g[d - 1][key - one] = p
        return out

    def is_divisible_by(self, var):
        i = self._index(var)
        shift = BITS * i
        return all((key >> shift) & MASK for comp in self._g for key in comp)

    def rescale(self, factors):
        """Substitute ``x_i -> m_i * x_i`` for integer (or rational) ``factors``."""
        if len(factors) != self.nvars:
            raise ContractError("one factor per variable required")
        g = []
        n = self.nvars
        for comp in self._g:
            r = {}
            for key, p in comp.items():
                m = Q(1)
                for f, e in zip(factors, unpack(key, n)):
                    if e:
                        m *= Q(f) ** e
                if m:
                    r[key] = K.poly_scale(p, m)
            g.append(r)
        return TruncSeries(self.variables, self.order, g)

    def embed(self, variables, order=None):
        """Re-express in a larger variable list (names matched by identity)."""
        variables = tuple(variables)
        order = self.order if order is None else order
        if order > self.order:
            raise OrderError("cannot raise the order while embedding")
        pos = []
        for v in self.variables:
            if v not in variables:
                raise ContractError(f"{v!r} missing from {variables}")
            pos.append(variables.index(v))
        out = TruncSeries(variables, order)
        n = self.nvars
        for d in range(order + 1):
            for key, p in self._g[d].items():
                e = unpack(key, n)
                out._g[d][pack({pos[i]: e[i] for i in range(n)})] = p
        return out

    def _index(self, var):
        try:
            return self.variables.index(var)
        except ValueError:
            raise ContractError(f"{var!r} is not one of {self.variables}") from None

    def _require_univariate(self):
        if self.nvars != 1:
            raise ContractError("univariate series required")

    # rendering ------------------------------------------------------------

    def __str__(self):
        parts = []
        for idx, c in self.terms():
            mono = "*".join(
                (v if e == 1 else f"{v}^{e}") for v, e in zip(self.variables, idx) if e
            )
            parts.append((mono, c))
        body = render_terms(parts, None, _coeff_str)
        return f"{body} + O({self.order + 1})"

    def __repr__(self):
        return f"TruncSeries({self.variables}, {self.order}, {str(self)!r})"


class ExponentSeries(TruncSeries):
    """Univariate series ``x + ...``: zero constant term, unit linear coefficient."""

    __slots__ = ()

    def __init__(self, variables, order, graded=None, check=True):
        super().__init__(variables, order, graded)
        if check:
            self._validate()

    def _validate(self):
        if self.nvars != 1:
            raise InvalidExponent("an exponent is a univariate series")
        if self.order < 1:
            raise InvalidExponent("an exponent needs order >= 1")
        if self._g[0]:
            raise InvalidExponent("exponent must satisfy f(0) = 0")
        if self._g[1] != {1: {0: Q(1)}}:
            raise InvalidExponent("exponent must satisfy f'(0) = 1")

    @classmethod
    def from_series(cls, s):
        return cls(s.variables, s.order, s._g)

    @classmethod
    def from_coefficients(cls, var, coeffs, order=None):
        return cls.from_series(TruncSeries.from_coefficients(var, coeffs, order))

    @staticmethod
    def _rebuild(template, graded):
        return ExponentSeries(template.variables, template.order, graded)

    def truncate(self, order):
        return ExponentSeries(self.variables, order, self._g[: order + 1])

    def plain(self):
        return TruncSeries(self.variables, self.order, self._g)

    def unit_part(self):
        """``f(x)/x`` as a unit series of order N-1."""
        g = [({d - 1: self._g[d][d]} if self._g[d] else {}) for d in range(1, self.order + 1)]
        return TruncSeries(self.variables, self.order - 1, g)


# --------------------------------------------------------------------------
# operations


def ts_mul(a, b):
    a._check(b)
    return TruncSeries(a.variables, a.order, K.graded_mul(a._g, b._g, a.order))


def ts_invert_unit(a):
    c0 = a._g[0].get(0) if a._g[0] else None
    if not c0 or len(c0) != 1 or 0 not in c0 or len(a._g[0]) != 1:
        raise NotAUnit("constant term must be a nonzero parameter-free rational")
    inv0 = 1 / c0[0]
    neg = -inv0
    B = [{0: {0: inv0}}]
    for d in range(1, a.order + 1):
        s = K.conv_degree(a._g, B, d, 1)
        B.append({k: K.poly_scale(p, neg) for k, p in s.items()})
    return TruncSeries(a.variables, a.order, B)


def linear_form_powers(w, variables, order):
    """``[L**0, ..., L**order]`` for ``L = sum w_i * x_i``, as graded integer dicts."""
    n = len(variables)
    if len(w) != n:
        raise ContractError(f"weight {tuple(w)} does not match variables {variables}")
    lin = {1 << (BITS * i): int(c) for i, c in enumerate(w) if c}
    powers = [{0: 1}]
    for _ in range(order):
        prev = powers[-1]
        nxt = {}
        for k1, c1 in prev.items():
            for k2, c2 in lin.items():
                k = k1 + k2
                nxt[k] = nxt.get(k, 0) + c1 * c2
        powers.append({k: c for k, c in nxt.items() if c})
    return powers


def ts_compose_linear(f, w, variables, order=None):
    """``f(<w, x>)`` for univariate ``f``, truncated at ``order`` (default ``f.order``)."""
    f._require_univariate()
    variables = tuple(variables)
    order = f.order if order is None else order
    if order > f.order:
        raise OrderError(f"series of order {f.order} cannot be composed to order {order}")
    powers = linear_form_powers(w, variables, order)
    out = TruncSeries(variables, order)
    for k in range(order + 1):
        fk = f._g[k].get(k)
        if not fk:
            continue
        comp = out._g[k]
        for key, c in powers[k].items():
            comp[key] = K.poly_scale(fk, Q(c))
    return out


def compose(f, h):
    """``f(h)`` for univariate ``f`` and any series ``h`` with zero constant term."""
    f._require_univariate()
    if h._g[0]:
        raise ContractError("inner series must have zero constant term")
    order = h.order
    if f.order < order:
        raise OrderError(f"outer series of order {f.order} is too short for order {order}")
    r = TruncSeries.constant(ParamPoly(f._g[order].get(order, {})), h.variables, order)
    for k in range(order - 1, -1, -1):
        r = r * h + ParamPoly(f._g[k].get(k, {}))
    return r


def compositional_inverse(f):
    """``h`` with ``f(h(x)) = h(f(x)) = x`` to the order of ``f``."""
    if not isinstance(f, ExponentSeries):
        f = ExponentSeries.from_series(f)
    n = f.order
    var = f.variables
    coeffs = [{}, {0: Q(1)}] + [{} for _ in range(n - 1)]
    for k in range(2, n + 1):
        h = TruncSeries(var, k, [({d: coeffs[d]} if coeffs[d] else {}) for d in range(k + 1)])
        fk = compose(f.truncate(k), h)
        c = fk._g[k].get(k, {})
        coeffs[k] = {m: -v for m, v in c.items()}
    return ExponentSeries(var, n, [({d: coeffs[d]} if coeffs[d] else {}) for d in range(n + 1)])


def ts_derivative(f, var):
    i = f._index(var)
    shift = BITS * i
    one = 1 << shift
    order = max(f.order - 1, 0)
    out = TruncSeries(f.variables, order)
    for d in range(1, f.order + 1):
        for key, p in f._g[d].items():
            e = (key >> shift) & MASK
            if e:
                out._g[d - 1][key - one] = K.poly_scale(p, Q(e))
    return out


def exp_linear(alpha, w, variables, order):
    """``exp(alpha * <w, x>)`` truncated at ``order``; ``alpha`` a symbol name, ParamPoly or rational."""
    a = _poly_of(alpha)
    powers = linear_form_powers(w, variables, order)
    out = TruncSeries(variables, order)
    apow = {0: Q(1)}
    for k in range(order + 1):
        if k:
            apow = K.poly_mul(apow, a)
        if not apow:
            break
        coef = K.poly_scale(apow, Q(1, factorial(k)))
        out._g[k] = {key: K.poly_scale(coef, Q(c)) for key, c in powers[k].items()}
    return out


# --------------------------------------------------------------------------
# Laurent series in one variable


class LaurentSeries:
    """``sum_{k=low}^{order} c_k t^k`` with ParamPoly coefficients.

    Coefficients are known for every degree up to ``order``.  ``low`` is the
    degree of the first stored (nonzero) coefficient; the zero series has
    ``low = order + 1`` and no coefficients.
    """

    __slots__ = ("variable", "low", "order", "_c")

    def __init__(self, variable, low, order, coeffs):
        coeffs = [c if isinstance(c, dict) else _poly_of(c) for c in list(coeffs)[: max(order - low + 1, 0)]]
        while coeffs and not coeffs[0]:
            coeffs.pop(0)
            low += 1
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        if not coeffs:
            low = order + 1
        self.variable = variable
        self.low = low
        self.order = order
        self._c = coeffs

    @classmethod
    def zero(cls, variable, order):
        return cls(variable, order + 1, order, [])

    @classmethod
    def from_series(cls, s, shift=0):
        """``t**shift * s`` for a univariate TruncSeries ``s``."""
        s._require_univariate()
        coeffs = [s._g[d].get(d, {}) for d in range(s.order + 1)]
        return cls(s.variables[0], shift, s.order + shift, coeffs)

    def coefficient(self, k):
        if k > self.order:
            raise OrderError(f"degree {k} exceeds order {self.order}")
        i = k - self.low
        if 0 <= i < len(self._c):
            return ParamPoly(self._c[i])
        return ParamPoly()

    def __getitem__(self, k):
        return self.coefficient(k)

    def is_zero(self):
        return not self._c

    def valuation(self):
        return None if not self._c else self.low

    def principal_part(self):
        return {k: self.coefficient(k) for k in range(self.low, 0) if self.coefficient(k)}

    def has_principal_part(self):
        return bool(self._c) and self.low < 0

    def regular_part(self):
        """Coefficients of t^0..t^order as a univariate TruncSeries (requires no poles)."""
        if self.has_principal_part():
            raise ContractError("series has a nonzero principal part")
        g = [{} for _ in range(max(self.order, 0) + 1)]
        for i, p in enumerate(self._c):
            k = self.low + i
            if 0 <= k <= self.order and p:
                g[k] = {k: p}
        return TruncSeries((self.variable,), max(self.order, 0), g)

    def _dense(self, low, order):
        out = []
        for k in range(low, order + 1):
            i = k - self.low
            out.append(self._c[i] if 0 <= i < len(self._c) else {})
        return out

    def __add__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        if self.variable != other.variable:
            raise ContractError("variable mismatch")
        order = min(self.order, other.order)
        low = min(self.low, other.low)
        a = self._dense(low, order)
        b = other._dense(low, order)
        return LaurentSeries(self.variable, low, order, [K.poly_add(x, y) for x, y in zip(a, b)])

    def __neg__(self):
        return LaurentSeries(
            self.variable, self.low, self.order, [{m: -v for m, v in p.items()} for p in self._c]
        )

    def __sub__(self, other):
        return self + (-other)

    def scale(self, value):
        p = _poly_of(value)
        return LaurentSeries(
            self.variable, self.low, self.order, [K.poly_mul(c, p) for c in self._c]
        )

    def __mul__(self, other):
        if isinstance(other, TruncSeries):
            other = LaurentSeries.from_series(other)
        if not isinstance(other, LaurentSeries):
            return self.scale(other)
        if self.variable != other.variable:
            raise ContractError("variable mismatch")
        if not self._c or not other._c:
            return LaurentSeries.zero(self.variable, min(self.order + (other.valuation() or 0),
                                                         other.order + (self.valuation() or 0)))
        order = min(self.order + other.low, other.order + self.low)
        n = order - (self.low + other.low)
        A = [({i: c} if c else {}) for i, c in enumerate(self._c)]
        B = [({i: c} if c else {}) for i, c in enumerate(other._c)]
        prod = K.graded_mul(A, B, n) if n >= 0 else []
        coeffs = [comp.get(d, {}) for d, comp in enumerate(prod)]
        return LaurentSeries(self.variable, self.low + other.low, order, coeffs)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (
            self.variable == other.variable
            and self.order == other.order
            and self.low == other.low
            and self._c == other._c
        )

    def __hash__(self):
        return hash((self.variable, self.order, str(self)))

    def terms(self):
        return [(self.low + i, ParamPoly(c)) for i, c in enumerate(self._c) if c]

    def __str__(self):
        parts = []
        for k, c in self.terms():
            mono = "" if k == 0 else (self.variable if k == 1 else f"{self.variable}^{k}")
            parts.append((mono, c))
        return f"{render_terms(parts, None, _coeff_str)} + O({self.variable}^{self.order + 1})"

    def __repr__(self):
        return f"LaurentSeries({str(self)!r})"


def laurent_sum(terms):
    terms = list(terms)
    if not terms:
        raise ContractError("laurent_sum needs at least one term")
    var = terms[0].variable
    order = terms[0].order
    for t in terms:
        if t.variable != var or t.order != order:
            raise ContractError("all terms must share variable and order")
    low = min(t.low for t in terms)
    acc = [{} for _ in range(order - low + 1)]
    for t in terms:
        for i, c in enumerate(t._c):
            j = t.low + i - low
            acc[j] = K.poly_add(acc[j], c)
    return LaurentSeries(var, low, order, acc)


def substitute(F, inners):
    """``F(h_1, ..., h_k)`` where each ``h_i`` has zero constant term.

    The ``h_i`` share a variable list and order; the result lives there.
    """
    if len(inners) != F.nvars:
        raise ContractError("one inner series per variable of F required")
    h0 = inners[0]
    for h in inners:
        h0._check(h)
        if h._g[0]:
            raise ContractError("inner series must have zero constant term")
    order = h0.order
    if F.order < order:
        raise OrderError(f"outer series of order {F.order} is too short for order {order}")
    powers = [[TruncSeries.one(h0.variables, order)] for _ in inners]
    out = TruncSeries(h0.variables, order)
    n = F.nvars
    for d in range(order + 1):
        for key, p in F._g[d].items():
            e = unpack(key, n)
            term = None
            for i, ei in enumerate(e):
                pw = powers[i]
                while len(pw) <= ei:
                    pw.append(pw[-1] * inners[i])
                if ei:
                    term = pw[ei] if term is None else term * pw[ei]
            if term is None:
                term = powers[0][0]
            out = out + term.scale(ParamPoly(p))
    return out
