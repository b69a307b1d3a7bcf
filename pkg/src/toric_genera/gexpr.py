"""Rational expressions in the values of one series ``g`` and its derivatives.

A term is ``coeff * prod g^(d)(L)^e`` over integer linear forms ``L`` in a
fixed variable list, with ``e`` of either sign.  Clearing denominators
multiplies every term by the least common multiple of the negative powers,
after which the expression is a polynomial in series values and can be
expanded as a TruncSeries.
"""

from math import factorial

from .errors import ContractError, OrderError
from .params import ParamPoly
from .quasitoric import render_linear_form
from .series import TruncSeries, ts_compose_linear, ts_derivative


def _norm_form(form):
    return tuple(int(c) for c in form)


def _last_nonzero(form):
    for c in reversed(form):
        if c:
            return c
    return 0


class GExpr:
    """Immutable sum of terms; ``terms`` maps a sorted factor tuple to its coefficient."""

    __slots__ = ("variables", "terms")

    def __init__(self, variables, terms=None):
        self.variables = tuple(variables)
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    # construction ---------------------------------------------------------

    @classmethod
    def zero(cls, variables):
        return cls(variables)

    @classmethod
    def constant(cls, value, variables):
        return cls(variables, {(): ParamPoly.coerce(value)})

    @classmethod
    def g(cls, form, variables, d=0, power=1):
        form = _norm_form(form)
        if len(form) != len(variables):
            raise ContractError(f"form {form} does not match variables {tuple(variables)}")
        return cls(variables, {(((d, form), power),): ParamPoly.const(1)})

    @classmethod
    def from_monomial(cls, variables, factors, coeff=1):
        return cls(variables, {_key(factors): ParamPoly.coerce(coeff)})

    # arithmetic -----------------------------------------------------------

    def _same(self, other):
        if self.variables != other.variables:
            raise ContractError("expressions live over different variables")

    def __add__(self, other):
        if not isinstance(other, GExpr):
            other = GExpr.constant(other, self.variables)
        self._same(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return GExpr(self.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return GExpr(self.variables, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, GExpr):
            c = ParamPoly.coerce(other)
            return GExpr(self.variables, {k: v * c for k, v in self.terms.items()})
        self._same(other)
        out = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = _key(_merge(dict(k1), k2))
                out[k] = out[k] + v1 * v2 if k in out else v1 * v2
        return GExpr(self.variables, out)

    __rmul__ = __mul__

    def inverse(self):
        """Reciprocal of a single term."""
        if len(self.terms) != 1:
            raise ContractError("only a single term can be inverted")
        (k, v), = self.terms.items()
        if not v.is_constant():
            raise ContractError("coefficient of an inverted term must be a rational")
        return GExpr(self.variables, {tuple((f, -e) for f, e in k): ParamPoly.const(1 / v.constant_term())})

    def __truediv__(self, other):
        if isinstance(other, GExpr):
            return self * other.inverse()
        c = ParamPoly.coerce(other)
        return self * (ParamPoly.const(1) / c)

    def __eq__(self, other):
        if not isinstance(other, GExpr):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    def is_zero(self):
        return not self.terms

    # transformations ------------------------------------------------------

    def canonical_odd(self):
        """Rewrite with ``g^(d)(-L) = (-1)^(d+1) g^(d)(L)`` (valid for odd g).

        Canonical forms have a positive last nonzero coefficient.  An even
        derivative at the zero form vanishes; in a denominator that is an
        error.
        """
        out = GExpr(self.variables)
        for k, v in self.terms.items():
            sign = 1
            facs = {}
            dead = False
            for (d, form), e in k:
                lead = _last_nonzero(form)
                if lead == 0 and d % 2 == 0:
                    if e < 0:
                        raise ZeroDivisionError(f"g^({d})(0) = 0 in a denominator")
                    dead = True
                    break
                if lead < 0:
                    form = tuple(-c for c in form)
                    if (d + 1) % 2 and e % 2:
                        sign = -sign
                facs[(d, form)] = facs.get((d, form), 0) + e
            if dead:
                continue
            out = out + GExpr(self.variables, {_key(facs): v * sign})
        return out

    def substitute(self, images, variables):
        """Linear change of variables: old variable ``v`` becomes form ``images[v]``."""
        variables = tuple(variables)
        rows = []
        for v in self.variables:
            if v not in images:
                raise ContractError(f"no image for variable {v!r}")
            img = _norm_form(images[v])
            if len(img) != len(variables):
                raise ContractError(f"image of {v!r} does not match {variables}")
            rows.append(img)
        out = GExpr(variables)
        for k, c in self.terms.items():
            facs = {}
            for (d, form), e in k:
                new = tuple(sum(form[i] * rows[i][j] for i in range(len(form))) for j in range(len(variables)))
                facs[(d, new)] = facs.get((d, new), 0) + e
            out = out + GExpr(variables, {_key(facs): c})
        return out

    def cleared(self):
        """``(numerator, denominator)`` with ``self = numerator / denominator``.

        The denominator is the least common multiple of all negative powers,
        as a dict ``{(d, form): exponent}``; the numerator has no negative
        exponents.
        """
        den = {}
        for k in self.terms:
            for f, e in k:
                if e < 0:
                    den[f] = max(den.get(f, 0), -e)
        num = {}
        for k, v in self.terms.items():
            facs = dict(den)
            _merge(facs, k)
            kk = _key(facs)
            num[kk] = num[kk] + v if kk in num else v
        return GExpr(self.variables, num), den

    def common_factor(self):
        """Factors dividing every term (nonnegative powers only)."""
        keys = list(self.terms)
        if not keys:
            return {}
        common = {f: e for f, e in keys[0] if e > 0}
        for k in keys[1:]:
            d = dict(k)
            common = {f: min(e, d.get(f, 0)) for f, e in common.items() if d.get(f, 0) > 0}
        return common

    def without_common_factor(self):
        common = self.common_factor()
        if not common:
            return self, {}
        inv = {f: -e for f, e in common.items()}
        out = {}
        for k, v in self.terms.items():
            facs = dict(k)
            _merge(facs, _key(inv))
            out[_key(facs)] = v
        return GExpr(self.variables, out), common

    def max_derivative(self):
        return max((d for k in self.terms for (d, _), _ in k), default=0)

    def forms(self):
        return sorted({form for k in self.terms for (_, form), _ in k})

    # evaluation -----------------------------------------------------------

    def evaluate(self, table, order):
        """Expand as a TruncSeries in ``self.variables`` up to total degree ``order``."""
        out = TruncSeries(self.variables, order)
        cache = {}
        for k, c in sorted(self.terms.items(), key=lambda kv: _key_sort(kv[0])):
            term = None
            for (d, form), e in k:
                if e < 0:
                    raise ContractError("clear denominators before evaluating")
                base = cache.get((d, form))
                if base is None:
                    base = cache[(d, form)] = table.at(d, form, self.variables, order)
                p = base ** e if e != 1 else base
                term = p if term is None else term * p
            if term is None:
                term = TruncSeries.one(self.variables, order)
            out = out + term.scale(c)
        return out

    # rendering ------------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for k, c in sorted(self.terms.items(), key=lambda kv: _key_sort(kv[0])):
            num = [render_factor(f, e, self.variables) for f, e in k if e > 0]
            den = [render_factor(f, -e, self.variables) for f, e in k if e < 0]
            body = "*".join(num) if num else "1"
            if den:
                body += "/(" + "*".join(den) + ")"
            cs = str(c)
            if len(c.terms) > 1:
                cs = f"({cs})"
            if cs == "1":
                parts.append(f"+ {body}")
            elif cs == "-1":
                parts.append(f"- {body}")
            elif cs.startswith("-"):
                parts.append(f"- {cs[1:]}*{body}")
            else:
                parts.append(f"+ {cs}*{body}")
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    def __repr__(self):
        return f"GExpr({str(self)!r})"


def render_factor(f, e, variables):
    d, form = f
    name = "g" + "'" * d if d <= 3 else f"g^({d})"
    s = f"{name}({render_linear_form(form, variables)})"
    return s if e == 1 else f"{s}^{e}"


def render_monomial(factors, variables):
    items = sorted(factors.items(), key=lambda kv: (kv[0][1], kv[0][0]))
    return "*".join(render_factor(f, e, variables) for f, e in items) or "1"


def _merge(acc, key):
    for f, e in key:
        n = acc.get(f, 0) + e
        if n:
            acc[f] = n
        else:
            acc.pop(f, None)
    return acc


def _key(facs):
    items = facs.items() if isinstance(facs, dict) else facs
    return tuple(sorted(((f, e) for f, e in items if e), key=lambda fe: (fe[0][1], fe[0][0])))


def _key_sort(k):
    return (sum(abs(e) for _, e in k), k)


# --------------------------------------------------------------------------
# derivative tables


class DerivativeTable:
    """Derivatives of a univariate series ``g`` and their compositions with linear forms."""

    def __init__(self, g):
        if g.nvars != 1:
            raise ContractError("g must be univariate")
        self.g = g
        self._derivs = [g]
        self._composed = {}

    def derivative(self, d):
        while len(self._derivs) <= d:
            self._derivs.append(ts_derivative(self._derivs[-1], self.g.variables[0]))
        return self._derivs[d]

    def valuation(self, d):
        v = self.derivative(d).valuation()
        return 0 if v is None else v

    def value_at_zero(self, d):
        return self.derivative(d).coefficient(0)

    def at(self, d, form, variables, order):
        key = (d, form, variables, order)
        s = self._composed.get(key)
        if s is None:
            gd = self.derivative(d)
            if gd.order < order:
                raise OrderError(
                    f"g^({d}) is known to order {gd.order}; order {order} requested "
                    f"(need g of order >= {order + d})"
                )
            if not any(form):
                s = TruncSeries.constant(gd.coefficient(0), variables, order)
            else:
                s = ts_compose_linear(gd.truncate(order), form, variables, order)
            self._composed[key] = s
        return s

    def monomial_valuation(self, factors):
        return sum(e * self.valuation(d) for (d, form), e in factors.items() if any(form))


def derivative_value_at_zero(g, d):
    """``g^(d)(0) = d! * g_d``."""
    return g.coefficient(d) * factorial(d)
