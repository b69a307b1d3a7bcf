"""Genus exponents and their ℂPᵏ-value and formal-group-law correspondences.

A complex genus over a Q-algebra is determined by its exponent, a series
``f(x) = x + ...``.  The compositional inverse of ``f`` is
``x + sum_k phi(CP^k)/(k+1) x^(k+1)`` and the formal group law is
``F(u, v) = f(f^{-1}(u) + f^{-1}(v))``.
"""

import re
from dataclasses import dataclass, field
from math import factorial

from . import kernels as K
from .errors import OrderError, SpecError
from .params import ParamPoly, SymbolError, is_registered
from .rational import Q, as_rational
from .series import (
    ExponentSeries,
    TruncSeries,
    compose,
    compositional_inverse,
    exp_linear,
    substitute,
    ts_compose_linear,
)

X = "x"

RESERVED = {"t", "x", "y", "z", "g", "s", "u", "v"}
_RESERVED_RE = re.compile(r"^x\d+$")


def _param(value):
    if isinstance(value, ParamPoly):
        return value
    return ParamPoly.coerce(value)


def elliptic_sine(delta, eps, order):
    """Odd solution ``x + ...`` of ``(f')^2 = 1 - 2*delta*f^2 + eps*f^4`` up to ``x**order``.

    The ``x**(2m)`` coefficient of the residual is linear in ``c_(2m+1)``
    with factor ``2(2m+1)``, so coefficients are solved one at a time.
    """
    if order < 1:
        raise OrderError("order must be >= 1")
    d = _param(delta).terms
    e = _param(eps).terms
    f = [{} for _ in range(order + 1)]  # graded univariate lists, key = degree
    df = [{} for _ in range(order + 1)]
    f[1] = {1: {0: Q(1)}}
    df[0] = {0: {0: Q(1)}}
    f2 = [{} for _ in range(order + 1)]
    for m in range(1, (order - 1) // 2 + 1):
        k = 2 * m
        f2[k - 2] = K.conv_degree(f, f, k - 2, 0)
        f2[k] = K.conv_degree(f, f, k, 0)
        known = K.conv_degree(df, df, k, 1).get(k, {})  # excludes the two f'_0 f'_k terms
        if d:
            known = K.poly_add(known, K.poly_scale(K.poly_mul(f2[k].get(k, {}), d), Q(2)))
        if e:
            f4k = K.conv_degree(f2, f2, k, 0).get(k, {})
            known = K.poly_sub(known, K.poly_mul(f4k, e))
        c = K.poly_scale(known, Q(-1, 2 * (k + 1)))
        if c:
            f[k + 1] = {k + 1: c}
            df[k] = {k: K.poly_scale(c, Q(k + 1))}
    return ExponentSeries((X,), order, f)


def krichever_b2zero(alpha, delta, eps, order):
    """``exp(alpha*x) * sn(x)``."""
    e = exp_linear(_param(alpha), (1,), (X,), order)
    return ExponentSeries.from_series(e * elliptic_sine(delta, eps, order))


def todd_exponent(order):
    """``1 - exp(-x)``."""
    coeffs = [0] + [Q((-1) ** (k + 1), factorial(k)) for k in range(1, order + 1)]
    return ExponentSeries.from_coefficients(X, coeffs, order)


def identity_exponent(order):
    return ExponentSeries.from_coefficients(X, [0, 1], order)


def odd_family(alpha, odd_coeffs, order):
    """``exp(alpha*x) * g(x)`` with ``g = x + sum g_k x^k`` over odd ``k >= 3``."""
    coeffs = [0, 1] + [0] * max(order - 1, 0)
    for k, c in odd_coeffs.items():
        if k < 3 or k % 2 == 0:
            raise SpecError(f"odd family coefficient index {k} must be odd and >= 3")
        if k <= order:
            coeffs[k] = _param(c)
    g = TruncSeries.from_coefficients(X, coeffs, order)
    a = _param(alpha)
    if a.is_zero():
        return ExponentSeries.from_series(g)
    return ExponentSeries.from_series(exp_linear(a, (1,), (X,), order) * g)


def explicit_exponent(coeffs, order):
    """``x + sum coeffs[k] x^k`` with keys ``k >= 2``."""
    full = [0, 1] + [0] * max(order - 1, 0)
    for k, c in coeffs.items():
        if k < 2:
            raise SpecError("explicit coefficients start at degree 2")
        if k <= order:
            full[k] = _param(c)
    return ExponentSeries.from_coefficients(X, full, order)


# --------------------------------------------------------------------------
# genus specs


@dataclass(frozen=True)
class GenusSpec:
    kind: str
    params: dict = field(default_factory=dict)

    KINDS = ("id", "todd", "sn", "kr0", "odd", "explicit")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise SpecError(f"unknown genus kind {self.kind!r}")

    def __str__(self):
        if not self.params:
            return self.kind
        body = ",".join(f"{k}={_value_str(v)}" for k, v in self.params.items())
        return f"{self.kind}:{body}"

    def __hash__(self):
        return hash(str(self))

    def symbols(self):
        out = set()
        for v in self.params.values():
            out |= v.symbols()
        return out


def _value_str(v):
    s = str(v)
    return s if len(v.terms) <= 1 else f"({s})"


_DEFAULTS = {
    "id": {},
    "todd": {},
    "sn": {"delta": "delta", "eps": "eps"},
    "kr0": {"alpha": "alpha", "delta": "delta", "eps": "eps"},
    "odd": {"alpha": 0},
    "explicit": {},
}


def _parse_value(text):
    text = text.strip()
    if not text:
        raise SpecError("empty parameter value")
    if re.fullmatch(r"[+-]?\d+(/\d+)?", text):
        try:
            return ParamPoly.const(as_rational(text))
        except ZeroDivisionError:
            raise SpecError(f"zero denominator in {text!r}") from None
    if not text.isidentifier():
        raise SpecError(f"cannot parse parameter value {text!r}")
    if text in RESERVED or _RESERVED_RE.match(text):
        raise SpecError(f"symbol {text!r} collides with a series variable name")
    try:
        return ParamPoly.symbol(text)
    except SymbolError as exc:
        raise SpecError(str(exc)) from None


def parse_genus_spec(text):
    """Parse ``kind[:key=value,...]``.  Values are ``p/q`` rationals or symbol names."""
    text = text.strip()
    kind, _, rest = text.partition(":")
    kind = kind.strip()
    if kind not in GenusSpec.KINDS:
        raise SpecError(f"unknown genus kind {kind!r}; expected one of {', '.join(GenusSpec.KINDS)}")
    given = {}
    if rest.strip():
        for item in rest.split(","):
            key, eq, val = item.partition("=")
            key = key.strip()
            if not eq or not key:
                raise SpecError(f"malformed parameter {item!r}")
            if key in given:
                raise SpecError(f"duplicate parameter {key!r}")
            given[key] = _parse_value(val)
    allowed = _allowed_keys(kind, given)
    for key in given:
        if key not in allowed:
            raise SpecError(f"parameter {key!r} not accepted by {kind!r}")
    params = {k: ParamPoly.coerce(v) for k, v in _DEFAULTS[kind].items()}
    params.update(given)
    if kind in ("odd", "explicit"):
        params = dict(sorted(params.items(), key=lambda kv: _key_order(kv[0])))
    return GenusSpec(kind, params)


def _key_order(key):
    if key == "alpha":
        return (0, 0)
    return (1, int(key[1:]))


def _allowed_keys(kind, given):
    if kind == "sn":
        return {"delta", "eps"}
    if kind == "kr0":
        return {"alpha", "delta", "eps"}
    if kind == "odd":
        ok = {"alpha"}
        for k in given:
            m = re.fullmatch(r"g(\d+)", k)
            if m and int(m.group(1)) >= 3 and int(m.group(1)) % 2 == 1:
                ok.add(k)
        return ok
    if kind == "explicit":
        ok = set()
        for k in given:
            m = re.fullmatch(r"c(\d+)", k)
            if m and int(m.group(1)) >= 2:
                ok.add(k)
        return ok
    return set()


def exponent_from_spec(spec, order):
    if isinstance(spec, str):
        spec = parse_genus_spec(spec)
    p = spec.params
    try:
        if spec.kind == "id":
            return identity_exponent(order)
        if spec.kind == "todd":
            return todd_exponent(order)
        if spec.kind == "sn":
            return elliptic_sine(p["delta"], p["eps"], order)
        if spec.kind == "kr0":
            return krichever_b2zero(p["alpha"], p["delta"], p["eps"], order)
        if spec.kind == "odd":
            odd = {int(k[1:]): v for k, v in p.items() if k != "alpha"}
            return odd_family(p.get("alpha", 0), odd, order)
        if spec.kind == "explicit":
            return explicit_exponent({int(k[1:]): v for k, v in p.items()}, order)
    except KeyError as exc:
        raise SpecError(f"missing parameter {exc.args[0]!r} for {spec.kind!r}") from None
    raise SpecError(f"unknown genus kind {spec.kind!r}")


# --------------------------------------------------------------------------
# correspondences


def cpn_values(f, k_max):
    """``[phi(CP^1), ..., phi(CP^k_max)]``."""
    if f.order < k_max + 1:
        raise OrderError(f"need an exponent of order >= {k_max + 1}, got {f.order}")
    h = compositional_inverse(f.truncate(k_max + 1))
    return [h.coefficient(k + 1) * (k + 1) for k in range(1, k_max + 1)]


def exponent_from_cpn(values, order=None):
    """Rebuild the exponent from ``[phi(CP^1), ...]`` by inverting the logarithm."""
    order = len(values) + 1 if order is None else order
    coeffs = [0, 1] + [0] * (order - 1)
    for k, v in enumerate(values, start=1):
        if k + 1 <= order:
            coeffs[k + 1] = ParamPoly.coerce(v) / (k + 1)
    log = ExponentSeries.from_coefficients(X, coeffs, order)
    return compositional_inverse(log)


class FormalGroupLaw:
    """Bivariate series ``F(x, y)`` known up to total degree ``order``."""

    VARS = ("x", "y")

    def __init__(self, series):
        if series.variables != self.VARS:
            raise SpecError(f"formal group law must be in variables {self.VARS}")
        self.series = series

    @property
    def order(self):
        return self.series.order

    def coefficient(self, i, j):
        return self.series.coefficient((i, j))

    def check_unit(self):
        x_only = self.series.at_zero("y")
        y_only = self.series.at_zero("x")
        xs = TruncSeries.var("x", ("x",), self.order)
        ys = TruncSeries.var("y", ("y",), self.order)
        return x_only == xs and y_only == ys

    def swapped(self):
        n = self.order
        return TruncSeries.from_terms(
            self.VARS, n, {(j, i): c for (i, j), c in self.series.terms()}
        )

    def check_symmetry(self):
        return self.swapped() == self.series

    def associativity_defect(self):
        """``F(F(x,y),z) - F(x,F(y,z))`` as a series in ``x, y, z``."""
        v3 = ("x", "y", "z")
        n = self.order
        x = TruncSeries.var("x", v3, n)
        z = TruncSeries.var("z", v3, n)
        fxy = self.series.embed(v3)
        fyz = substitute(self.series, [TruncSeries.var("y", v3, n), z])
        return substitute(self.series, [fxy, z]) - substitute(self.series, [x, fyz])

    def check_associativity(self):
        return self.associativity_defect().is_zero()

    def __str__(self):
        return str(self.series)


def fgl_from_exponent(f, order=None):
    order = f.order if order is None else order
    if f.order < order:
        raise OrderError(f"exponent of order {f.order} cannot give an FGL of order {order}")
    f = f.truncate(order)
    h = compositional_inverse(f)
    v = FormalGroupLaw.VARS
    s = ts_compose_linear(h, (1, 0), v) + ts_compose_linear(h, (0, 1), v)
    return FormalGroupLaw(compose(f, s))


def specialize(obj, bindings):
    """Substitute rationals for symbols in every coefficient."""
    for name in bindings:
        if not is_registered(name):
            raise SpecError(f"unknown symbol {name!r}")
    try:
        if isinstance(obj, (TruncSeries,)):
            return obj.substitute_params(bindings)
        if isinstance(obj, ParamPoly):
            return obj.substitute(bindings)
    except SymbolError as exc:
        raise SpecError(str(exc)) from None
    raise SpecError(f"cannot specialise a {type(obj).__name__}")
