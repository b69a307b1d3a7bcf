"""Mechanical checks of the argument that rigidity on L(2,3) forces ``g = sn``.

Every identity is checked after clearing denominators, as an equality of
truncated series.  Orders are *relative*: an identity whose cleared
denominator has leading degree ``v`` is checked through total degree
``v + N``, so ``N`` counts how far past the leading term the meromorphic
identity is verified.  Leading degrees use the generic valuations of an odd
series (``g`` and its even derivatives vanish to first order, odd
derivatives are units), so they do not depend on the particular ``g``.

Limits ``t -> 0`` are exact: the cleared numerator must be divisible by the
right power of ``t``, after which ``t`` is set to zero.
"""

from dataclasses import dataclass, field

from .errors import ContractError, DivisibilityError, InternalInconsistency, InvalidExponent, OrderError, StructureError
from .genera import GenusSpec, elliptic_sine, exponent_from_spec
from .gexpr import DerivativeTable, GExpr, render_monomial
from .params import ParamPoly, sym
from .quasitoric import fixed_point_data, l23_fixture
from .rational import Q
from .series import ExponentSeries, TruncSeries

V5 = ("x1", "x2", "x3", "x4", "x5")


def nominal_valuation(factors):
    """Leading degree of a monomial in odd-series values."""
    return sum(e for (d, form), e in factors.items() if d % 2 == 0 and any(form))


def is_odd(g):
    return all(not g.coefficient(k) for k in range(0, g.order + 1, 2))


def _exponent(g, order):
    """An exponent of at least ``order``: built from a spec, or a given series checked and truncated."""
    if isinstance(g, (str, GenusSpec)):
        return exponent_from_spec(g, order)
    if callable(g) and not isinstance(g, TruncSeries):
        return g(order)
    if g.order < order:
        raise OrderError(f"g of order {g.order} is too short; this check needs order {order}")
    return g.truncate(order)


@dataclass
class ClearedIdentity:
    """``lhs = rhs`` after multiplying by ``denominator``, checked through total degree ``order``."""

    name: str
    variables: tuple
    lhs: TruncSeries
    rhs: TruncSeries
    denominator: dict
    relative_order: int
    order: int

    def residual(self):
        return self.lhs - self.rhs

    def holds(self):
        return self.lhs == self.rhs

    def lowest_nonzero_degree(self):
        return self.residual().valuation()

    def denominator_str(self):
        return render_monomial(self.denominator, self.variables)

    def to_dict(self):
        r = self.residual()
        return {
            "name": self.name,
            "variables": list(self.variables),
            "denominator": self.denominator_str(),
            "order": self.order,
            "relative_order": self.relative_order,
            "holds": r.is_zero(),
            "lowest_nonzero_degree": r.valuation(),
            "residual": str(r),
        }


def _g(form, vars_, d=0, e=1):
    return GExpr.g(form, vars_, d, e)


# --------------------------------------------------------------------------
# the 12-term equation and the limit identities


def rigidity_summands(pair=None):
    """The localisation summands of L(2,3) as expressions in ``x1..x5``, in vertex order."""
    data = fixed_point_data(pair or l23_fixture())
    out = []
    for d in data:
        facs = {}
        for w in d.weights:
            facs[(0, tuple(w))] = facs.get((0, tuple(w)), 0) - 1
        out.append(GExpr.from_monomial(V5, facs, d.sign))
    return out


def _e(*pairs, vars_=V5):
    """Monomial from ``(form, d, e)`` triples."""
    facs = {}
    for form, d, e in pairs:
        facs[(d, tuple(form))] = facs.get((d, tuple(form)), 0) + e
    return GExpr.from_monomial(vars_, facs)


X1 = (1, 0, 0, 0, 0)
X2 = (0, 1, 0, 0, 0)
X3 = (0, 0, 1, 0, 0)
X4 = (0, 0, 0, 1, 0)
X5 = (0, 0, 0, 0, 1)
X31 = (-1, 0, 1, 0, 0)  # x3 - x1
X23 = (0, 1, 1, 0, 0)  # x2 + x3
X45 = (0, 0, 0, 1, 1)  # x4 + x5
X135 = (-1, 0, 1, 0, -1)  # -x1 + x3 - x5


def _claimed(i, as_printed=False):
    """Displayed limit values, as expressions in ``x1..x5``.

    For the combined step 7 the printed fourth term lacks the factor
    ``g'(x3)``; the corrected term is used unless ``as_printed`` is set.
    """
    if i == 1:
        return (_e((X1, 1, 1), (X31, 0, 1)) - _e((X1, 0, 1), (X31, 1, 1))) * _e(
            (X1, 0, -2), (X31, 0, -2), (X4, 0, -1), (X5, 0, -1)
        )
    if i == 2:
        return _e((X1, 1, 1), (X4, 0, -2), (X1, 0, -3)) * 2
    if i == 3:
        return (_e((X2, 1, 1), (X23, 0, 1)) + _e((X2, 0, 1), (X23, 1, 1))) * _e(
            (X2, 0, -3), (X23, 0, -3)
        ) * 2
    if i == 4:
        return _e((X3, 1, 1), (X1, 0, -1), (X2, 0, -1), (X3, 0, -3)) * 2
    if i == 5:
        return _e((X3, 1, 1), (X1, 0, -1), (X2, 0, -1), (X3, 0, -3)) * -2
    if i == 6:
        return -(_e((X1, 1, 1), (X135, 0, 1)) - _e((X135, 1, 1), (X1, 0, 1))) * _e(
            (X45, 0, -1), (X5, 0, -1), (X1, 0, -2), (X135, 0, -2)
        )
    if i == 7:
        return (
            _e((X1, 1, 1), (X31, 1, 1), (X1, 0, -2), (X3, 0, -1), (X31, 0, -2))
            + _e((X31, 2, 1), (X1, 0, -1), (X3, 0, -1), (X31, 0, -2))
            - _e((X31, 1, 2), (X1, 0, -1), (X3, 0, -1), (X31, 0, -3)) * 2
            + (
                _e((X1, 1, 1), (X1, 0, -2), (X3, 0, -2), (X31, 0, -1))
                if as_printed
                else _e((X1, 1, 1), (X3, 1, 1), (X1, 0, -2), (X3, 0, -2), (X31, 0, -1))
            )
            - _e((X31, 1, 1), (X3, 1, 1), (X1, 0, -1), (X31, 0, -2), (X3, 0, -2))
        )
    raise ContractError(f"no limit identity {i}")


# x1 + x2 = t -> 0, optionally with x3 + x4 = 0 and x5 = 0
_T_VARS = ("x1", "x3", "x4", "x5", "t")
_T_IMAGES = {
    "x1": (1, 0, 0, 0, 0),
    "x2": (-1, 0, 0, 0, 1),
    "x3": (0, 1, 0, 0, 0),
    "x4": (0, 0, 1, 0, 0),
    "x5": (0, 0, 0, 1, 0),
}
_T_RESTRICTED_VARS = ("x1", "x3", "t")
_T_RESTRICTED_IMAGES = {
    "x1": (1, 0, 0),
    "x2": (-1, 0, 1),
    "x3": (0, 1, 0),
    "x4": (0, -1, 0),
    "x5": (0, 0, 0),
}
# x3 + x4 = s -> 0 with x1 + x2 = 0, hence x5 = -s
_S_VARS = ("x1", "x3", "s")
_S_IMAGES = {
    "x1": (1, 0, 0),
    "x2": (-1, 0, 0),
    "x3": (0, 1, 0),
    "x4": (0, -1, 1),
    "x5": (0, 0, -1),
}


@dataclass(frozen=True)
class LimitIdentity:
    number: int
    summands: tuple  # 1-based summand numbers, or () for the combined identity
    description: str
    variables: tuple
    images: dict
    limit_variable: str


LIMIT_IDENTITIES = {
    1: LimitIdentity(1, (2, 3), "summands 2+3 as x1+x2 = t -> 0", _T_VARS, _T_IMAGES, "t"),
    2: LimitIdentity(2, (8, 9), "summands 8+9 as x1+x2 = t -> 0, x3+x4 = 0, x5 = 0",
                     _T_RESTRICTED_VARS, _T_RESTRICTED_IMAGES, "t"),
    3: LimitIdentity(3, (5, 6), "summands 5+6 as x1+x2 = t -> 0, x3+x4 = 0, x5 = 0",
                     _T_RESTRICTED_VARS, _T_RESTRICTED_IMAGES, "t"),
    4: LimitIdentity(4, (1, 10), "summands 1+10 as x3+x4 = s -> 0, x1+x2 = 0", _S_VARS, _S_IMAGES, "s"),
    5: LimitIdentity(5, (4, 7), "summands 4+7 as x3+x4 = s -> 0, x1+x2 = 0", _S_VARS, _S_IMAGES, "s"),
    6: LimitIdentity(6, (11, 12), "summands 11+12 as x1+x2 = t -> 0", _T_VARS, _T_IMAGES, "t"),
    7: LimitIdentity(7, (), "results of 1 and 6 as x3+x4 = s -> 0, x1+x2 = 0", _S_VARS, _S_IMAGES, "s"),
}


def limit_expression(i):
    spec = LIMIT_IDENTITIES[i]
    if spec.summands:
        terms = rigidity_summands()
        out = GExpr.zero(V5)
        for k in spec.summands:
            out = out + terms[k - 1]
        return out
    return _claimed(1) + _claimed(6)


@dataclass
class LimitReport:
    number: int
    description: str
    limit_exists: bool
    holds: bool
    identity: ClearedIdentity
    claimed: GExpr
    note: str = ""

    def __bool__(self):
        return self.holds


def _drop_coordinate(expr, idx):
    keep = [v for j, v in enumerate(expr.variables) if j != idx]
    images = {}
    for j, v in enumerate(expr.variables):
        images[v] = tuple(0 if j == idx else int(keep.index(v) == m) for m in range(len(keep)))
    return expr.substitute(images, keep)


def _limit_check(A, R, lim, table_for, rel_order, name):
    vars_ = lim.variables
    it = vars_.index(lim.limit_variable)
    A2 = A.substitute(lim.images, vars_).canonical_odd()
    num, den = A2.cleared()
    tfacs, rest = {}, {}
    for (d, form), e in den.items():
        if any(c for j, c in enumerate(form) if j != it):
            rest[(d, form)] = e
        else:
            if not form[it]:
                raise StructureError("a denominator factor vanishes identically after restriction")
            if d != 0:
                raise StructureError(f"derivative g^({d}) of the limit variable in a denominator")
            tfacs[(d, form)] = e
    vt = sum(tfacs.values())
    lead = Q(1)
    for (d, form), e in tfacs.items():
        lead *= Q(form[it]) ** e
    vars0 = tuple(v for j, v in enumerate(vars_) if j != it)
    Qm = _drop_coordinate(GExpr.from_monomial(vars_, rest, lead), it)
    R0 = _drop_coordinate(R.substitute(lim.images, vars_), it)
    QR = (Qm * R0).canonical_odd()
    qr_num, qr_den = QR.cleared()
    qfacs = dict(next(iter(Qm.canonical_odd().terms)))
    M = nominal_valuation(qfacs) + nominal_valuation(qr_den) + rel_order
    maxd = max(A2.max_derivative(), QR.max_derivative())
    table = table_for(M + vt + maxd + 1)
    P = num.evaluate(table, M + vt)
    exists = True
    try:
        for _ in range(vt):
            P = P.divide_by_var(lim.limit_variable)
    except DivisibilityError:
        exists = False
    if not exists:
        zero = TruncSeries(vars0, M)
        ident = ClearedIdentity(name, vars0, zero, zero, qr_den, rel_order, M)
        return False, False, ident
    S1 = P.at_zero(lim.limit_variable)
    lhs = S1 * GExpr.from_monomial(vars0, qr_den).evaluate(table, M)
    rhs = qr_num.evaluate(table, M)
    full_den = dict(qfacs)
    for f, e in qr_den.items():
        full_den[f] = full_den.get(f, 0) + e
    ident = ClearedIdentity(name, vars0, lhs, rhs, full_den, rel_order, M)
    return True, lhs == rhs, ident


def verify_limit_identity(i, g, order=8, as_printed=False):
    """Check limit identity ``i`` (1..6, and 7 for the combined step) for odd ``g``.

    ``g`` is an ExponentSeries of sufficient order or a genus spec.
    """
    if i not in LIMIT_IDENTITIES:
        raise ContractError(f"limit identities are numbered 1..{len(LIMIT_IDENTITIES)}")
    lim = LIMIT_IDENTITIES[i]
    cache = {}

    def table_for(n):
        if "t" not in cache:
            gg = _exponent(g, n)
            if not is_odd(gg):
                raise InvalidExponent("the limit identities assume an odd series g")
            cache["t"] = DerivativeTable(gg)
        return cache["t"]

    A = limit_expression(i)
    R = _claimed(i, as_printed)
    exists, ok, ident = _limit_check(A, R, lim, table_for, order, f"limit identity {i}")
    note = "" if exists else "cleared numerator is not divisible by the limit variable"
    return LimitReport(i, lim.description, exists, ok, ident, R, note)


# --------------------------------------------------------------------------
# the restricted equation and its symmetrisation

XY = ("x", "y")
_X, _Y, _YX = (1, 0), (0, 1), (-1, 1)


def restricted_expression():
    """Right-hand side of the two-variable equation at ``x1 = -x2 = x``, ``x3 = -x4 = y``, ``x5 = 0``."""
    e = lambda *p: _e(*p, vars_=XY)  # noqa: E731
    return (
        e((_X, 1, 1), (_Y, 0, -2), (_X, 0, -3)) * 2
        - e((_X, 1, 1), (_X, 0, -3), (_YX, 0, -2)) * 2
        + e((_YX, 1, 1), (_X, 0, -2), (_YX, 0, -3)) * 2
        + e((_X, 1, 1), (_YX, 1, 1), (_X, 0, -2), (_Y, 0, -1), (_YX, 0, -2))
        + e((_YX, 2, 1), (_Y, 0, -1), (_X, 0, -1), (_YX, 0, -2))
        - e((_YX, 1, 2), (_X, 0, -1), (_Y, 0, -1), (_YX, 0, -3)) * 2
        + e((_X, 1, 1), (_Y, 1, 1), (_X, 0, -2), (_Y, 0, -2), (_YX, 0, -1))
        - e((_YX, 1, 1), (_Y, 1, 1), (_YX, 0, -2), (_X, 0, -1), (_Y, 0, -2))
    )


RESTRICTED_DENOMINATOR = {(0, _X): 3, (0, _Y): 2, (0, _YX): 3}


def _cleared_identity(name, vars_, lhs_expr, rhs_expr, den, g, rel_order):
    M = nominal_valuation(den) + rel_order
    maxd = max(lhs_expr.max_derivative(), rhs_expr.max_derivative())
    table = DerivativeTable(_exponent(g, M + maxd + 1))
    return ClearedIdentity(
        name, vars_, lhs_expr.evaluate(table, M), rhs_expr.evaluate(table, M), den, rel_order, M
    )


def restricted_residual(g, c=0, order=10):
    """``c * D = T * D`` with ``D = g(x)^3 g(y)^2 g(y-x)^3`` and ``T`` the restricted right-hand side."""
    D = GExpr.from_monomial(XY, RESTRICTED_DENOMINATOR)
    num = restricted_expression() * D
    if any(e < 0 for k in num.terms for _, e in k):
        raise InternalInconsistency("restricted denominator does not clear the expression")
    return _cleared_identity("restricted", XY, D * ParamPoly.coerce(c), num, RESTRICTED_DENOMINATOR, g, order)


YZ = ("y", "z")
_Yz, _Zz, _YZ = (1, 0), (0, 1), (1, 1)
SYMMETRIZED_DENOMINATOR = {(0, _YZ): 2, (0, _Yz): 3, (0, _Zz): 3}


def symmetrized_sides(c=0):
    e = lambda *p: _e(*p, vars_=YZ)  # noqa: E731
    lhs = (
        e((_YZ, 0, 2), (_Yz, 0, 3), (_Zz, 0, 3)) * (2 * ParamPoly.coerce(c))
        + e((_Zz, 1, 1), (_Yz, 0, 3)) * 2
        + e((_Yz, 1, 1), (_Zz, 0, 3)) * 2
    )
    inner = (
        -e((_Zz, 2, 1), (_Yz, 0, 2), (_Zz, 0, 1))
        - e((_Yz, 2, 1), (_Zz, 0, 2), (_Yz, 0, 1))
        + e((_Zz, 1, 2), (_Yz, 0, 2)) * 2
        + e((_Yz, 1, 2), (_Zz, 0, 2)) * 2
        - e((_Yz, 1, 1), (_Zz, 1, 1), (_Yz, 0, 1), (_Zz, 0, 1)) * 2
    )
    return lhs, e((_YZ, 0, 1)) * inner


def symmetrized_residual(g, c=0, order=10):
    """The cleared symmetrised identity in ``y, z`` (denominator ``g(y+z)^2 g(y)^3 g(z)^3``)."""
    lhs, rhs = symmetrized_sides(c)
    return _cleared_identity("symmetrized", YZ, lhs, rhs, SYMMETRIZED_DENOMINATOR, g, order)


def substituted_expression():
    """The restricted right-hand side after ``x = y + z``, as an expression in ``y, z``."""
    images = {"x": (1, 1), "y": (1, 0)}
    return restricted_expression().substitute(images, YZ)


def symmetrisation_defect(g, c=0, order=10):
    """``(2c - S) * Dsym - (lhs - rhs)`` where ``S`` symmetrises the substituted equation.

    Zero for every odd ``g``: the displayed symmetrised identity is exactly the
    symmetrisation of the substituted one.
    """
    sub = substituted_expression()
    swapped = sub.substitute({"y": (0, 1), "z": (1, 0)}, YZ)
    S = (sub + swapped).canonical_odd()
    Dsym = GExpr.from_monomial(YZ, SYMMETRIZED_DENOMINATOR)
    mine = ((GExpr.constant(2 * ParamPoly.coerce(c), YZ) - S) * Dsym).canonical_odd()
    lhs, rhs = symmetrized_sides(c)
    diff = mine - (lhs - rhs)
    if any(e < 0 for k in diff.terms for _, e in k):
        raise InternalInconsistency("symmetrised denominator does not clear the substituted equation")
    M = nominal_valuation(SYMMETRIZED_DENOMINATOR) + order
    table = DerivativeTable(_exponent(g, M + 3))
    return diff.evaluate(table, M)


# --------------------------------------------------------------------------
# the z^3 coefficient: an ODE for g


@dataclass
class OdeReport:
    residual: TruncSeries  # LHS - RHS of the ODE, in y
    z3_coefficient: TruncSeries  # the same, read off the symmetrised identity
    a: ParamPoly  # g_3 = a/3
    c_coefficient: TruncSeries  # part of the residual multiplying c
    c_free_part: TruncSeries
    c_free_part_even: bool
    c_coefficient_odd: bool
    c_forced_zero: bool

    def holds(self):
        return self.residual.is_zero()

    def to_dict(self):
        return {
            "a": str(self.a),
            "residual": str(self.residual),
            "holds": self.holds(),
            "c_coefficient": str(self.c_coefficient),
            "c_free_part": str(self.c_free_part),
            "c_free_part_even": self.c_free_part_even,
            "c_coefficient_odd": self.c_coefficient_odd,
            "c_forced_zero": self.c_forced_zero,
        }


def _parity(s, parity):
    return all(not s.coefficient(k) for k in range(1 - parity, s.order + 1, 2))


def ode_residual(g, c, order):
    """``2c g^5 + 2g' - (-2 g'' g' g - (2a/3) g^2 g' + 2 g'^3 + g''' g^2 / 3)`` in ``y``, ``a = 3 g_3``."""
    gg = _exponent(g, order + 3)
    table = DerivativeTable(TruncSeries(("y",), gg.order, gg._g))
    g0, g1, g2, g3 = (table.derivative(d).truncate(order) for d in range(4))
    a = gg.coefficient(3) * 3
    c = ParamPoly.coerce(c)
    g02 = g0 * g0
    lhs = (g02 * g02 * g0).scale(c * 2) + g1 * 2
    rhs = (
        (g2 * g1 * g0).scale(ParamPoly.const(-2))
        - (g02 * g1).scale(a * Q(2, 3))
        + (g1 * g1 * g1) * 2
        + (g3 * g02).scale(ParamPoly.const(Q(1, 3)))
    )
    return lhs - rhs, a, g0


def z3_ode_residual(g, c="c", order=10):
    """The ODE read off the ``z^3`` coefficient, and the parity argument for ``c``."""
    res, a, g0 = ode_residual(g, c, order)
    lhs, rhs = symmetrized_sides(c)
    M = order + 3
    table = DerivativeTable(_exponent(g, M + 3))
    sym_res = lhs.evaluate(table, M) - rhs.evaluate(table, M)
    z3 = sym_res.coefficient_series("z", 3)
    if z3 != res:
        raise InternalInconsistency("z^3 coefficient of the symmetrised identity differs from the ODE")
    cpoly = ParamPoly.coerce(c)
    g5 = g0 * g0 * g0 * g0 * g0 * 2
    c_free = res - g5.scale(cpoly) if cpoly else res
    even = _parity(c_free, 0)
    odd = _parity(g5, 1)
    forced = even and odd and not g5.is_zero()
    return OdeReport(res, z3, a, g5, c_free, even, odd, forced)


# --------------------------------------------------------------------------
# the ansatz (g')^2 = 1 + sum a_k g^(2k)


@dataclass
class AnsatzReport:
    K: int
    a1: ParamPoly  # derived value of a_1
    bracket: TruncSeries  # 6 + 3G P' + 2a G^2 - 6P - G^2 P''/2, in G
    coefficient_identities: list  # (k, lhs factor 6(k-1), rhs factor k(2k-1))
    solutions: dict  # k -> ParamPoly, or None when unconstrained
    surviving: str

    def to_dict(self):
        return {
            "K": self.K,
            "a1": str(self.a1),
            "solutions": {f"a{k}": (None if v is None else str(v)) for k, v in self.solutions.items()},
            "coefficient_identities": [
                {"k": k, "lhs": f"6*{k - 1}*a{k}", "rhs": f"{k}*{2 * k - 1}*a{k}", "equal_factors": l == r}
                for k, l, r in self.coefficient_identities
            ],
            "surviving": self.surviving,
        }


def _a_symbol(k):
    return sym(f"a{k}")


def ansatz_reduction(K=5):
    """Substitute ``(g')^2 = P(g)`` into the ODE and solve for ``a_1..a_K``.

    With ``g'' = P'(g)/2`` and ``g''' = g' P''(g)/2`` the ODE divided by the
    unit ``g'`` becomes a polynomial identity in ``G = g``; each ``G^(2k)``
    coefficient is linear in ``a_k``.
    """
    if K < 3:
        raise ContractError("K must be >= 3")
    a = sym("a")
    # a_1 from g = y + (a/3) y^3 + g5 y^5: compare (g')^2 - 1 with g^2 at y^2
    gy = TruncSeries.from_coefficients("y", [0, 1, 0, a * Q(1, 3), 0, sym("g5")], 5)
    dg = gy.derivative("y")
    a1 = ((dg * dg).coefficient(2)) / (gy * gy).truncate(4).coefficient(2)
    n = 2 * K + 2
    coeffs = [ParamPoly.const(0)] * (n + 1)
    coeffs[0] = ParamPoly.const(1)
    for k in range(1, K + 1):
        coeffs[2 * k] = _a_symbol(k)
    P = TruncSeries.from_coefficients("G", coeffs, n)
    G = TruncSeries.var("G", ("G",), n)
    P1 = P.derivative("G")
    P2 = P1.derivative("G")
    m = n - 2
    Gm = G.truncate(m)
    GG = Gm * Gm
    bracket = (
        TruncSeries.constant(6, ("G",), m)
        + (Gm * P1.truncate(m)) * 3
        + GG.scale(a * 2)
        - P.truncate(m) * 6
        - (GG * P2) * Q(1, 2)
    )
    solutions = {}
    identities = []
    for k in range(1, K + 1):
        coeff = bracket.coefficient(2 * k)
        if k == 1:
            # coeff = 2a - a1: fixes a1
            lin = coeff.coefficients_in("a1")
            factor = lin.get(1, ParamPoly())
            sol = -lin.get(0, ParamPoly()) / factor
            if sol != a1:
                raise InternalInconsistency(f"a1 from the ODE ({sol}) differs from a1 = {a1}")
            solutions[1] = sol
            continue
        lin = coeff.coefficients_in(f"a{k}")
        factor = lin.get(1, ParamPoly())
        rest = lin.get(0, ParamPoly())
        if not factor.is_constant():
            raise StructureError(f"G^{2 * k} coefficient is not linear in a{k} with rational factor")
        identities.append((k, 6 * (k - 1), k * (2 * k - 1)))
        if factor.is_zero():
            if rest:
                raise StructureError(f"G^{2 * k} coefficient {rest} cannot vanish")
            solutions[k] = None
        else:
            solutions[k] = -rest / factor
    free = [k for k, v in solutions.items() if v is None]
    surviving = "(g')^2 = 1 + " + " + ".join(
        [f"{a1}*g^2"] + [f"a{k}*g^{2 * k}" for k in free]
    )
    return AnsatzReport(K, a1, bracket, identities, solutions, surviving)


# --------------------------------------------------------------------------
# solving the symmetrised identity for g


@dataclass
class OddSeriesUnknown:
    """``g = x + sum g_k x^k`` over odd ``k``; ``None`` marks a free coefficient."""

    coefficients: dict
    order: int
    free_symbols: tuple = ()

    def series(self, order=None):
        order = self.order if order is None else order
        coeffs = [0, 1] + [0] * (order - 1)
        for k, v in self.coefficients.items():
            if k <= order:
                coeffs[k] = sym(f"g{k}") if v is None else v
        return ExponentSeries.from_coefficients("x", coeffs, order)


@dataclass
class SolveReport:
    g: OddSeriesUnknown
    c: ParamPoly
    forced: dict  # k -> ParamPoly for k >= 7
    free_orders_consistent: bool
    sn_coefficients: dict  # k -> sn coefficient under the parameter map
    matches_elliptic_sine: bool
    parameter_map: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "c": str(self.c),
            "forced": {f"g{k}": str(v) for k, v in self.forced.items()},
            "free_orders_consistent": self.free_orders_consistent,
            "parameter_map": {k: str(v) for k, v in self.parameter_map.items()},
            "matches_elliptic_sine": self.matches_elliptic_sine,
        }


def _sym_residual_series(coeffs, c, M):
    g = ExponentSeries.from_coefficients("x", coeffs, M + 3)
    lhs, rhs = symmetrized_sides(c)
    table = DerivativeTable(g)
    return lhs.evaluate(table, M) - rhs.evaluate(table, M)


def _solve_linear(component, name, label):
    """Solve every coefficient of ``component`` (monomial -> ParamPoly) for symbol ``name``."""
    value = None
    for key in sorted(component):
        p = ParamPoly(component[key])
        lin = p.coefficients_in(name)
        if set(lin) - {0, 1}:
            raise StructureError(f"{label}: constraint is not affine in {name}")
        factor = lin.get(1, ParamPoly())
        if factor.is_zero():
            continue
        if not factor.is_constant():
            raise StructureError(f"{label}: leading factor {factor} of {name} is not a rational")
        value = -lin.get(0, ParamPoly()) / factor
        break
    if value is None:
        raise StructureError(f"{label}: {name} does not occur")
    for key, p in component.items():
        if ParamPoly(p).substitute({name: value}):
            raise StructureError(f"{label}: constraints on {name} are inconsistent")
    return value


def solve_g_from_rigidity(K=6):
    """Force ``g_7, ..., g_(2K+1)`` (and ``c``) from the symmetrised identity.

    ``g_3`` and ``g_5`` stay free.  The ``g``-part of the cleared identity
    has odd total degrees starting at 3 and the ``c``-part even degrees
    starting at 8, so ``c`` is read off degree 8 and the unknown
    ``g_(2j+1)`` first enters, linearly, at degree ``3 + 2j``.
    """
    if K < 3:
        raise ContractError("K must be >= 3")
    g3, g5 = sym("g3"), sym("g5")
    top = 2 * K + 1
    coeffs = [0, 1] + [0] * (top - 1)
    coeffs[3], coeffs[5] = g3, g5
    res = _sym_residual_series(coeffs, "c", 8)
    for d in range(8):
        if res._g[d]:
            raise StructureError(f"degree {d} constraint fails for free g3, g5")
    c = _solve_linear(res._g[8], "c", "degree 8")
    forced = {}
    for j in range(3, K + 1):
        name = f"g{2 * j + 1}"
        coeffs[2 * j + 1] = sym(name)
        M = 3 + 2 * j
        res = _sym_residual_series(coeffs, c, M)
        for d in range(M):
            if res._g[d]:
                raise StructureError(f"degree {d} constraint fails with solved coefficients")
        value = _solve_linear(res._g[M], name, f"degree {M}")
        forced[2 * j + 1] = value
        coeffs[2 * j + 1] = value
    final = _sym_residual_series(coeffs, c, 3 + 2 * K)
    consistent = final.is_zero()
    delta = g3 * -3
    eps = g5 * 10 - g3 * g3 * 3
    sn = elliptic_sine(delta, eps, top)
    sn_coeffs = {k: sn.coefficient(k) for k in range(3, top + 1, 2)}
    all_coeffs = {3: g3, 5: g5, **forced}
    matches = all(sn_coeffs[k] == all_coeffs[k] for k in sn_coeffs)
    unknown = OddSeriesUnknown({3: None, 5: None, **forced}, top, ("g3", "g5"))
    return SolveReport(unknown, c, forced, consistent, sn_coeffs, matches, {"delta": delta, "eps": eps})
