"""Combinatorial quasitoric pairs (P, Λ) and their torus fixed-point data.

Facets are indexed from 0 internally; JSON documents and rendered tables use
1-based facet numbers.  At a vertex the facet indices are sorted ascending
and both determinants of the sign formula use that column order.
"""

import json
from dataclasses import dataclass
from itertools import combinations
from typing import NamedTuple

from .errors import ContractError, ValidationError


# --------------------------------------------------------------------------
# exact integer linear algebra


def int_det(rows):
    """Determinant of a square integer matrix (fraction-free Bareiss elimination)."""
    m = [list(map(int, r)) for r in rows]
    n = len(m)
    if any(len(r) != n for r in m):
        raise ContractError("square matrix required")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def adjugate(rows):
    n = len(rows)
    if n == 1:
        return [[1]]
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [r[:j] + r[j + 1:] for k, r in enumerate(rows) if k != i]
            # adj[j][i] is the (i, j) cofactor
            adj[j][i] = (-1) ** (i + j) * int_det(minor)
    return adj


def unimodular_inverse(rows):
    """Inverse of an integer matrix with determinant ±1, as integer rows."""
    rows = [list(map(int, r)) for r in rows]
    d = int_det(rows)
    if d not in (1, -1):
        raise ValidationError(f"determinant {d} is not ±1")
    return [[c * d for c in r] for r in adjugate(rows)]


def mat_mul(a, b):
    return [[sum(x * y for x, y in zip(r, col)) for col in zip(*b)] for r in a]


def transpose(rows):
    return [list(c) for c in zip(*rows)]


# --------------------------------------------------------------------------
# polytopes


@dataclass(frozen=True)
class SimplePolytope:
    """Combinatorial simple polytope: facet normals plus vertices as facet sets."""

    dim: int
    normals: tuple
    vertices: tuple

    def __post_init__(self):
        normals = tuple(tuple(int(c) for c in a) for a in self.normals)
        vertices = tuple(tuple(sorted(int(j) for j in v)) for v in self.vertices)
        object.__setattr__(self, "normals", normals)
        object.__setattr__(self, "vertices", vertices)
        m = len(normals)
        for a in normals:
            if len(a) != self.dim:
                raise ValidationError(f"normal {a} is not in Z^{self.dim}")
        for v in vertices:
            if len(v) != self.dim or len(set(v)) != self.dim:
                raise ValidationError(f"vertex {v} must name {self.dim} distinct facets")
            if any(j < 0 or j >= m for j in v):
                raise ValidationError(f"vertex {v} refers to a facet outside 0..{m - 1}")
        used = {j for v in vertices for j in v}
        missing = sorted(set(range(m)) - used)
        if missing:
            raise ValidationError(f"facets {missing} appear in no vertex")

    @property
    def n_facets(self):
        return len(self.normals)

    def normal_matrix(self, facets):
        """Columns ``a_j`` for ``j`` in ``facets``."""
        return transpose([self.normals[j] for j in facets])

    def singular_vertices(self):
        return [i for i, v in enumerate(self.vertices) if int_det(self.normal_matrix(v)) == 0]


def simplex(n):
    """Standard n-simplex: normals e_1..e_n, -(1,..,1).

    Vertex order: the origin (missing the last facet), then e_k (missing facet k).
    """
    if n < 1:
        raise ContractError("simplex dimension must be >= 1")
    normals = [tuple(1 if i == k else 0 for i in range(n)) for k in range(n)]
    normals.append(tuple(-1 for _ in range(n)))
    everything = list(range(n + 1))
    vertices = [tuple(everything[:n])]
    for k in range(n):
        vertices.append(tuple(j for j in everything if j != k))
    return SimplePolytope(n, tuple(normals), tuple(vertices))


def point():
    return SimplePolytope(0, (), ((),))


def product(p, q):
    """``p × q``: p's facets first, normals block-embedded; p's vertex index varies fastest."""
    dim = p.dim + q.dim
    normals = [tuple(a) + (0,) * q.dim for a in p.normals]
    normals += [(0,) * p.dim + tuple(b) for b in q.normals]
    shift = p.n_facets
    vertices = [vp + tuple(j + shift for j in vq) for vq in q.vertices for vp in p.vertices]
    return SimplePolytope(dim, tuple(normals), tuple(vertices))


# --------------------------------------------------------------------------
# quasitoric pairs


@dataclass(frozen=True)
class QuasitoricPair:
    polytope: SimplePolytope
    lam: tuple
    name: str = ""

    def __post_init__(self):
        lam = tuple(tuple(int(c) for c in r) for r in self.lam)
        object.__setattr__(self, "lam", lam)
        n, m = self.polytope.dim, self.polytope.n_facets
        if len(lam) != n or any(len(r) != m for r in lam):
            raise ValidationError(f"characteristic matrix must be {n}x{m}")

    @property
    def dim(self):
        return self.polytope.dim

    def lambda_v(self, facets):
        return [[r[j] for j in facets] for r in self.lam]

    def to_json(self):
        p = self.polytope
        return {
            "name": self.name,
            "dim": p.dim,
            "facet_normals": [list(a) for a in p.normals],
            "vertices": [[j + 1 for j in v] for v in p.vertices],
            "lambda": [list(r) for r in self.lam],
        }

    @classmethod
    def from_json(cls, doc):
        if isinstance(doc, str):
            doc = json.loads(doc)
        try:
            dim = int(doc["dim"])
            normals = doc["facet_normals"]
            vertices = [[int(j) - 1 for j in v] for v in doc["vertices"]]
            lam = doc["lambda"]
            name = str(doc.get("name", ""))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed manifold document: {exc}") from None
        return cls(SimplePolytope(dim, normals, vertices), lam, name)


class VertexCheck(NamedTuple):
    vertex: int
    facets: tuple
    det_lambda: int


@dataclass
class ValidationReport:
    ok: bool
    determinants: list
    failures: list

    def describe(self):
        if self.ok:
            return "ok"
        parts = [
            f"vertex {f.vertex + 1} (facets {','.join(str(j + 1) for j in f.facets)}): det = {f.det_lambda}"
            for f in self.failures
        ]
        return "; ".join(parts)


def validate_pair(pair):
    dets = []
    failures = []
    for i, v in enumerate(pair.polytope.vertices):
        d = int_det(pair.lambda_v(v))
        dets.append(d)
        if d not in (1, -1):
            failures.append(VertexCheck(i, v, d))
    for i in pair.polytope.singular_vertices():
        if all(f.vertex != i for f in failures):
            failures.append(VertexCheck(i, pair.polytope.vertices[i], dets[i]))
    return ValidationReport(not failures, dets, failures)


@dataclass(frozen=True)
class FixedPointDatum:
    vertex: int
    facets: tuple
    sign: int
    weights: tuple
    lambda_v: tuple
    det_lambda: int
    det_normals: int

    def weight_sum(self):
        return tuple(sum(c) for c in zip(*self.weights))


def fixed_point_data(pair):
    report = validate_pair(pair)
    if not report.ok:
        raise ValidationError(f"invalid quasitoric pair: {report.describe()}", report.failures)
    out = []
    for i, v in enumerate(pair.polytope.vertices):
        lv = pair.lambda_v(v)
        dl = report.determinants[i]
        da = int_det(pair.polytope.normal_matrix(v))
        inv = unimodular_inverse(lv)
        out.append(
            FixedPointDatum(
                vertex=i,
                facets=tuple(v),
                sign=1 if dl * da > 0 else -1,
                weights=tuple(tuple(r) for r in inv),
                lambda_v=tuple(tuple(r) for r in lv),
                det_lambda=dl,
                det_normals=da,
            )
        )
    return out


class WeightSumCheck(NamedTuple):
    ok: bool
    common_sum: tuple
    counterexample: tuple


def su_weight_sum_check(data):
    """Do all fixed points share the same weight sum?  (Necessary for SU.)"""
    if not data:
        raise ContractError("no fixed points")
    first = data[0].weight_sum()
    for d in data[1:]:
        s = d.weight_sum()
        if s != first:
            return WeightSumCheck(False, None, ((data[0].vertex, first), (d.vertex, s)))
    return WeightSumCheck(True, first, None)


# --------------------------------------------------------------------------
# localisation terms


def render_linear_form(w, variables):
    parts = []
    for c, v in zip(w, variables):
        if not c:
            continue
        mag = "" if abs(c) == 1 else f"{abs(c)}*"
        sign = "-" if c < 0 else ("+" if parts else "")
        parts.append(f"{sign}{mag}{v}")
    return "".join(parts) if parts else "0"


@dataclass(frozen=True)
class LocalisationTerm:
    vertex: int
    sign: int
    weights: tuple
    forms: tuple

    def canonical(self):
        """Sign and the sorted multiset of linear forms."""
        return ("+" if self.sign > 0 else "-") + "[" + "; ".join(sorted(self.forms)) + "]"

    def __str__(self):
        s = "+" if self.sign > 0 else "-"
        return f"{s}1/(" + ")(".join(f"f({f})" for f in self.forms).join(["", ""]) + ")"


def default_variables(n):
    return tuple(f"x{i + 1}" for i in range(n))


def localisation_term_dump(data, variables=None):
    if variables is None:
        variables = default_variables(len(data[0].weights[0]) if data else 0)
    return [
        LocalisationTerm(
            d.vertex, d.sign, d.weights, tuple(render_linear_form(w, variables) for w in d.weights)
        )
        for d in data
    ]


def render_rigidity_equation(terms):
    body = " ".join(
        ("+ " if t.sign > 0 else "- ") + "1/(" + "*".join(f"f({f})" for f in t.forms) + ")"
        for t in terms
    )
    return "c = " + body.lstrip("+ ")


# --------------------------------------------------------------------------
# fixtures

L23_LAMBDA = (
    (1, 0, 1, 0, 0, 0, 0),
    (0, 1, -1, 0, 0, 0, 0),
    (0, 0, 1, 1, 0, 0, 1),
    (0, 0, 0, 0, 1, 0, -1),
    (0, 0, 0, 0, 0, 1, 1),
)


# Published vertex numbering (1-based facets).  The first Δ³ block visits the
# triangle's vertices as origin, e1, e2; the remaining blocks as origin, e2, e1.
L23_VERTEX_ORDER = (
    (1, 2, 4, 5, 6),
    (2, 3, 4, 5, 6),
    (1, 3, 4, 5, 6),
    (1, 2, 5, 6, 7),
    (1, 3, 5, 6, 7),
    (2, 3, 5, 6, 7),
    (1, 2, 4, 6, 7),
    (1, 3, 4, 6, 7),
    (2, 3, 4, 6, 7),
    (1, 2, 4, 5, 7),
    (1, 3, 4, 5, 7),
    (2, 3, 4, 5, 7),
)


def reorder_vertices(p, order):
    """Same polytope with vertices listed as ``order`` (0-based facet sets)."""
    order = [tuple(sorted(v)) for v in order]
    if sorted(order) != sorted(p.vertices):
        raise ValidationError("reordering must be a permutation of the vertex list")
    return SimplePolytope(p.dim, p.normals, tuple(order))


def l23_fixture():
    """The 10-dimensional SU-manifold over Δ²×Δ³ with the 5×7 characteristic matrix."""
    p = product(simplex(2), simplex(3))
    p = reorder_vertices(p, [[j - 1 for j in v] for v in L23_VERTEX_ORDER])
    return QuasitoricPair(p, L23_LAMBDA, "L(2,3)")


def cp1_fixture(lam=(1, -1)):
    """ℂP¹ over the segment.  Λ = (1 -1) gives weights 1 and -1, both signs +1."""
    return QuasitoricPair(simplex(1), (tuple(lam),), "CP1")


BUILTINS = {"l23": l23_fixture, "cp1": cp1_fixture}


def all_subsets_are_vertices(p):
    """True for simplices: every dim-subset of facets is a vertex."""
    return set(p.vertices) == set(combinations(range(p.n_facets), p.dim))
