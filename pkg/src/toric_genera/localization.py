"""Equivariant genus by fixed-point localisation, evaluated on generic lines.

For fixed points ``p`` with sign ``sigma(p)`` and weights ``w_i(p)`` the
equivariant genus is ``sum_p sigma(p) prod_i 1/f(<w_i(p), x>)``.  Putting
``x = t*s`` for an integer direction ``s`` pairing to nonzero values with
every weight turns each summand into a Laurent series in ``t`` with a pole
of order at most ``n``; the poles cancel in the sum.

Directions come from a splitmix64 stream, so a seed names the same lines in
every implementation.
"""

import json
from dataclasses import dataclass, field

from . import kernels as K
from .errors import ContractError, GenericityError, InternalInconsistency, OrderError
from .params import ParamPoly
from .quasitoric import su_weight_sum_check
from .rational import Q
from .series import ExponentSeries, LaurentSeries, TruncSeries, exp_linear, laurent_sum, ts_invert_unit

T = "t"
MASK64 = (1 << 64) - 1
RETRY_BUDGET = 10000


def splitmix64(state):
    """One step of splitmix64: returns ``(new_state, output)``."""
    state = (state + 0x9E3779B97F4A7C15) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return state, z ^ (z >> 31)


def draw_entry(z, bound):
    """Map a 64-bit output to ``[-bound, bound] \\ {0}``."""
    v = z % (2 * bound)
    return v - bound if v < bound else v - bound + 1


class LineStream:
    """Deterministic stream of candidate directions in ``Z^k``."""

    def __init__(self, k, seed=0, bound=64):
        if bound < 1:
            raise ContractError("bound must be >= 1")
        if k < 1:
            raise ContractError("dimension must be >= 1")
        self.k = k
        self.bound = bound
        self.seed = seed
        self._state = seed & MASK64
        self.drawn = 0

    def next(self):
        s = []
        for _ in range(self.k):
            self._state, z = splitmix64(self._state)
            s.append(draw_entry(z, self.bound))
        self.drawn += 1
        return tuple(s)


@dataclass(frozen=True)
class GenericLine:
    direction: tuple
    seed: int = None
    attempts: int = 0

    def pairings(self, data):
        return [[sum(a * b for a, b in zip(w, self.direction)) for w in d.weights] for d in data]


def _pair(w, s):
    return sum(a * b for a, b in zip(w, s))


def first_degenerate_pairing(data, s):
    """``(vertex, weight)`` with ``<w, s> = 0``, or None."""
    for d in data:
        for w in d.weights:
            if len(w) != len(s):
                raise ContractError(f"direction {tuple(s)} does not match weight {w}")
            if _pair(w, s) == 0:
                return d.vertex, w
    return None


def is_generic(data, s):
    return first_degenerate_pairing(data, s) is None


def check_line(data, s):
    """Wrap ``s`` as a GenericLine or raise GenericityError."""
    bad = first_degenerate_pairing(data, s)
    if bad is not None:
        v, w = bad
        raise GenericityError(f"direction {tuple(s)} pairs to zero with weight {w} at vertex {v + 1}")
    return GenericLine(tuple(s))


def sample_generic_lines(data, k, count, seed=0, bound=64, budget=RETRY_BUDGET):
    """``count`` distinct generic lines from one seeded stream."""
    stream = LineStream(k, seed, bound)
    out = []
    seen = set()
    rejected = 0
    while len(out) < count:
        s = stream.next()
        if s in seen or not is_generic(data, s):
            rejected += 1
            if rejected > budget:
                raise GenericityError(
                    f"no generic line after {budget} rejected draws with bound {bound}; "
                    "increase the bound"
                )
            continue
        seen.add(s)
        out.append(GenericLine(s, seed, stream.drawn))
    return out


def sample_generic_line(data, k, seed=0, bound=64, budget=RETRY_BUDGET):
    return sample_generic_lines(data, k, 1, seed, bound, budget)[0]


# --------------------------------------------------------------------------
# evaluation


def _fixed_point_dimension(data):
    if not data:
        raise ContractError("no fixed points")
    n = len(data[0].weights)
    if any(len(d.weights) != n for d in data):
        raise ContractError("fixed points of different dimensions")
    return n


def inverse_unit(f, order):
    """``x / f(x)`` in the variable ``t`` up to ``t**order``."""
    if not isinstance(f, ExponentSeries):
        f = ExponentSeries.from_series(f)
    if f.order < order + 1:
        raise OrderError(f"exponent of order {f.order} is too short; need {order + 1}")
    u = f.truncate(order + 1).unit_part()
    return ts_invert_unit(TruncSeries(u.variables, u.order, u._g)), u.variables[0]


def _rescaled(U, m):
    # U(m t) as a raw graded list
    out = []
    mk = Q(1)
    for d, comp in enumerate(U._g):
        if d:
            mk *= m
        out.append({d: K.poly_scale(p, mk) for p in comp.values()} if comp else {})
    return out


def _summand(U, sign, ms, order):
    prod = _rescaled(U, ms[0])
    for m in ms[1:]:
        prod = K.graded_mul(prod, _rescaled(U, m), order)
    denom = 1
    for m in ms:
        denom *= m
    c = Q(sign, 1) / denom
    coeffs = [K.poly_scale(comp.get(d, {}), c) for d, comp in enumerate(prod)]
    return LaurentSeries(T, -len(ms), order - len(ms), coeffs)


def localized_genus_on_line(data, f, line, order, unit=None):
    """``sum_p sigma(p) prod_i 1/f(<w_i(p), s> t)`` as a Laurent series up to ``t**order``."""
    n = _fixed_point_dimension(data)
    s = line.direction if isinstance(line, GenericLine) else tuple(line)
    check_line(data, s)
    U = unit if unit is not None else inverse_unit(f, order + n)[0]
    terms = [_summand(U, d.sign, [_pair(w, s) for w in d.weights], order + n) for d in data]
    return laurent_sum(terms)


def localized_summands_on_line(data, f, line, order):
    """The individual summands, in vertex order."""
    n = _fixed_point_dimension(data)
    s = line.direction if isinstance(line, GenericLine) else tuple(line)
    check_line(data, s)
    U = inverse_unit(f, order + n)[0]
    return [_summand(U, d.sign, [_pair(w, s) for w in d.weights], order + n) for d in data]


# --------------------------------------------------------------------------
# verdicts


@dataclass(frozen=True)
class Violation:
    kind: str  # "non-cancelling-poles" or "nonzero-coefficient"
    line: tuple
    degree: int
    coefficient: ParamPoly

    def to_dict(self):
        return {
            "kind": self.kind,
            "line": list(self.line),
            "degree": self.degree,
            "coefficient": str(self.coefficient),
        }


@dataclass(frozen=True)
class LineReport:
    index: int
    direction: tuple
    poles_cancel: bool
    first_nonzero_degree: int  # None when t^1..t^N all vanish
    constant: ParamPoly


@dataclass
class RigidityVerdict:
    rigid: bool
    constant: ParamPoly
    violation: Violation
    lines: int
    order: int
    line_reports: list = field(default_factory=list)

    def to_dict(self):
        return {
            "rigid": self.rigid,
            "constant": str(self.constant),
            "order": self.order,
            "lines": self.lines,
            "violation": self.violation.to_dict() if self.violation else None,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)

    def render_text(self):
        rows = [("line", "direction", "poles", "first nonzero t^k", "t^0")]
        for r in self.line_reports:
            rows.append(
                (
                    str(r.index + 1),
                    "(" + ",".join(str(c) for c in r.direction) + ")",
                    "cancel" if r.poles_cancel else "REMAIN",
                    "-" if r.first_nonzero_degree is None else str(r.first_nonzero_degree),
                    str(r.constant),
                )
            )
        widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
        lines = ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in rows]
        if self.rigid:
            lines.append(f"verdict: rigid up to order {self.order} on {self.lines} lines")
            lines.append(f"constant: {self.constant}")
        else:
            v = self.violation
            lines.append(f"verdict: NOT rigid ({v.kind})")
            lines.append(
                f"certificate: line ({','.join(str(c) for c in v.line)}), "
                f"t^{v.degree} coefficient = {v.coefficient}"
            )
        return "\n".join(lines)


def rigidity_check(data, f, order=10, lines=20, seed=0, bound=64, sampled=None):
    """Test rigidity up to ``t**order`` on ``lines`` seeded generic lines.

    Stops at the first line that certifies non-rigidity.
    """
    n = _fixed_point_dimension(data)
    k = len(data[0].weights[0])
    if sampled is None:
        sampled = sample_generic_lines(data, k, lines, seed, bound)
    U = inverse_unit(f, order + n)[0]
    reports = []
    constant = None
    for i, line in enumerate(sampled):
        L = localized_genus_on_line(data, f, line, order, unit=U)
        c0 = L.coefficient(0)
        poles = L.principal_part()
        first = None
        for d in range(1, order + 1):
            if L.coefficient(d):
                first = d
                break
        reports.append(LineReport(i, line.direction, not poles, first, c0))
        if poles:
            d = min(poles)
            v = Violation("non-cancelling-poles", line.direction, d, poles[d])
            return RigidityVerdict(False, c0, v, i + 1, order, reports)
        if constant is None:
            constant = c0
        elif c0 != constant:
            raise InternalInconsistency(
                f"t^0 coefficient differs between lines: {constant} vs {c0} on {line.direction}"
            )
        if first is not None:
            v = Violation("nonzero-coefficient", line.direction, first, L.coefficient(first))
            return RigidityVerdict(False, constant, v, i + 1, order, reports)
    return RigidityVerdict(True, constant, None, len(sampled), order, reports)


@dataclass(frozen=True)
class FactorisationReport:
    ok: bool
    weight_sum: tuple
    first_difference: tuple  # (degree, lhs coefficient, rhs coefficient) or None

    def __bool__(self):
        return self.ok


def alpha_factorisation_check(data, g, alpha, line, order):
    """``phi_{e^{ax} g} = exp(-a <sum w, s> t) * phi_g`` on one line, up to ``t**order``."""
    su = su_weight_sum_check(data)
    if not su.ok:
        raise ContractError("weight sums differ between fixed points; no common prefactor")
    n = _fixed_point_dimension(data)
    s = line.direction if isinstance(line, GenericLine) else tuple(line)
    work = order + n
    g = ExponentSeries.from_series(g.truncate(work + 1)) if g.order > work + 1 else g
    a = ParamPoly.coerce(alpha)
    e = exp_linear(a, (1,), g.variables, g.order)
    f = ExponentSeries.from_series(e * g)
    lhs = localized_genus_on_line(data, f, s, order)
    rhs = localized_genus_on_line(data, g, s, order)
    prefactor = exp_linear(a, (-_pair(su.common_sum, s),), (T,), work)
    rhs = rhs * prefactor
    for d in range(-n, order + 1):
        l, r = lhs.coefficient(d), rhs.coefficient(d)
        if l != r:
            return FactorisationReport(False, su.common_sum, (d, l, r))
    return FactorisationReport(True, su.common_sum, None)
