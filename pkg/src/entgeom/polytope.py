"""Exact convex geometry of Newton polytopes and non-expansive direction sets.

All computations use Python integers (and ``Fraction`` where a ratio is
unavoidable); nothing here touches floating point.  Supports are small (a few
dozen points at most), so hulls are built by direct enumeration of candidate
supporting hyperplanes.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

from .laurent import LaurentPoly, is_monomial, support
from .values import EntropyValue

Vec = tuple[int, ...]


class GeometryError(ValueError):
    pass


class DegeneratePolytopeError(GeometryError):
    """The Newton polytope is not full-dimensional."""


# -- integer vector helpers ----------------------------------------------------

def dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def sub(a: Sequence[int], b: Sequence[int]) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def add(a: Sequence[int], b: Sequence[int]) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def cross(a: Sequence[int], b: Sequence[int]) -> Vec:
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def content(v: Iterable[int]) -> int:
    return reduce(math.gcd, (abs(int(x)) for x in v), 0)


def primitive(v: Sequence[int | Fraction]) -> Vec:
    """Scale a nonzero rational vector to the primitive integer vector on its ray."""
    if any(isinstance(x, Fraction) for x in v):
        den = reduce(lambda a, b: a * b // math.gcd(a, b), (Fraction(x).denominator for x in v), 1)
        v = [int(Fraction(x) * den) for x in v]
    g = content(v)
    if g == 0:
        raise GeometryError("zero vector has no direction")
    return tuple(int(x) // g for x in v)


def canonical_line(v: Sequence[int]) -> Vec:
    """Primitive representative with positive leading nonzero entry (for hashing lines)."""
    w = primitive(v)
    lead = next(x for x in w if x)
    return w if lead > 0 else tuple(-x for x in w)


def rotate_ccw(v: Sequence[int]) -> Vec:
    return (-v[1], v[0])


def lattice_length(a: Sequence[int], b: Sequence[int]) -> int:
    return content(sub(b, a))


# -- hulls ---------------------------------------------------------------------

def _turn(o: Vec, a: Vec, b: Vec) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def hull_2d(points: Iterable[Sequence[int]]) -> list[Vec]:
    """Strict convex hull vertices in counterclockwise order, starting at the lex-min point."""
    pts = sorted(set(tuple(p) for p in points))
    if len(pts) <= 2:
        return pts
    lower: list[Vec] = []
    for p in pts:
        while len(lower) >= 2 and _turn(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Vec] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _turn(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 2 and hull[0] == hull[1]:
        return hull[:1]
    return hull


@dataclass(frozen=True)
class HalfspaceRep:
    """Exact H-representation: ``eq_normal . x == value`` and ``normal . x <= value``."""

    dim: int
    equalities: tuple[tuple[Vec, int], ...]
    inequalities: tuple[tuple[Vec, int], ...]
    box: tuple[tuple[int, int], ...]

    def contains(self, x: Sequence[int]) -> bool:
        return all(dot(n, x) == c for n, c in self.equalities) and all(
            dot(n, x) <= c for n, c in self.inequalities
        )

    def lattice_points(self) -> list[Vec]:
        ranges = [range(lo, hi + 1) for lo, hi in self.box]
        return [p for p in itertools.product(*ranges) if self.contains(p)]


def _affine_basis(pts: list[Vec]) -> list[Vec]:
    """Differences from pts[0] spanning the affine hull (greedy, exact)."""
    basis: list[Vec] = []
    for p in pts[1:]:
        d = sub(p, pts[0])
        cand = basis + [d]
        if _rank(cand) > len(basis):
            basis.append(d)
    return basis


def _rank(vectors: list[Vec]) -> int:
    rows = [[Fraction(x) for x in v] for v in vectors]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col] / rows[rank][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def halfspace_rep(points: Iterable[Sequence[int]]) -> HalfspaceRep:
    """H-representation of the convex hull of integer points in dimension 1, 2 or 3."""
    pts = sorted(set(tuple(int(x) for x in p) for p in points))
    if not pts:
        raise GeometryError("empty point set")
    d = len(pts[0])
    if d > 3:
        raise GeometryError("only dimensions 1..3 are supported")
    box = tuple((min(p[i] for p in pts), max(p[i] for p in pts)) for i in range(d))
    basis = _affine_basis(pts)
    k = len(basis)
    eqs: list[tuple[Vec, int]] = []
    ineqs: set[tuple[Vec, int]] = set()

    # normals orthogonal to the affine hull
    if d == 2 and k == 1:
        eqs.append((rotate_ccw(basis[0]), 0))
    elif d == 3 and k == 1:
        b = basis[0]
        for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
            n = cross(b, e)
            if any(n):
                eqs.append((n, 0))
    elif d == 3 and k == 2:
        eqs.append((primitive(cross(basis[0], basis[1])), 0))
    elif k == 0:
        eqs.extend((tuple(int(i == j) for j in range(d)), 0) for i in range(d))
    eqs = [(n, dot(n, pts[0])) for n, _ in eqs]

    def _try(n: Vec):
        if not any(n):
            return
        n = primitive(n)
        for s in (1, -1):
            m = tuple(s * x for x in n)
            vals = [dot(m, p) for p in pts]
            c = max(vals)
            if vals.count(c) >= 1 and all(v <= c for v in vals):
                # keep only facet-defining directions: at least k points on it
                on = [p for p, v in zip(pts, vals) if v == c]
                if k == 0 or _affine_dim(on) == k - 1:
                    ineqs.add((m, c))

    if k == 1:
        _try(basis[0])
    elif k == 2:
        if d == 2:
            for a, b in itertools.combinations(pts, 2):
                _try(rotate_ccw(sub(b, a)))
        else:
            normal = cross(basis[0], basis[1])
            for a, b in itertools.combinations(pts, 2):
                _try(cross(sub(b, a), normal))
    elif k == 3:
        for a, b, c in itertools.combinations(pts, 3):
            _try(cross(sub(b, a), sub(c, a)))
    return HalfspaceRep(d, tuple(eqs), tuple(sorted(ineqs)), box)


def _affine_dim(pts: list[Vec]) -> int:
    return len(_affine_basis(pts)) if pts else -1


# -- Newton polytopes ---------------------------------------------------------

@dataclass(frozen=True)
class Edge:
    start: Vec
    end: Vec
    normal: Vec
    lattice_length: int
    face_normals: tuple[Vec, ...] = ()


@dataclass(frozen=True)
class Face:
    normal: Vec
    vertices: tuple[Vec, ...]


@dataclass(frozen=True)
class NewtonPolytope:
    """Newton polytope of a Laurent polynomial in dimension 2 or 3.

    For d=2, ``vertices`` are in counterclockwise order and each edge carries
    its primitive outward normal.  For d=3, faces carry outward normals and
    vertex cycles (counterclockwise seen from outside); edges carry the pair of
    adjacent face normals and have ``normal`` set to their sum's primitive.
    ``affine_dim`` records degeneracy: a point (0), segment (1), polygon (2).
    """

    dim: int
    vertices: tuple[Vec, ...]
    edges: tuple[Edge, ...]
    faces: tuple[Face, ...] = ()
    affine_dim: int = 0
    points: frozenset[Vec] = field(default=frozenset(), repr=False)

    @property
    def full_dimensional(self) -> bool:
        return self.affine_dim == self.dim

    def normals(self) -> list[Vec]:
        if self.dim == 2:
            return [e.normal for e in self.edges]
        return [f.normal for f in self.faces]

    def contains(self, x: Sequence[int]) -> bool:
        return halfspace_rep(self.vertices).contains(x)


def newton_polytope(f: LaurentPoly) -> NewtonPolytope:
    if not f:
        raise GeometryError("the zero polynomial has no Newton polytope")
    if f.dim not in (2, 3):
        raise GeometryError(f"Newton polytopes are supported for d=2,3 only (got d={f.dim})")
    return polytope_of(support(f))


def polytope_of(points: Iterable[Sequence[int]]) -> NewtonPolytope:
    pts = frozenset(tuple(p) for p in points)
    if not pts:
        raise GeometryError("empty support")
    d = len(next(iter(pts)))
    if d == 2:
        return _polygon(pts)
    if d == 3:
        return _polytope3(pts)
    raise GeometryError(f"unsupported dimension {d}")


def _polygon(pts: frozenset[Vec]) -> NewtonPolytope:
    verts = hull_2d(pts)
    if len(verts) == 1:
        return NewtonPolytope(2, tuple(verts), (), (), 0, pts)
    if len(verts) == 2:
        a, b = verts
        n = primitive(rotate_ccw(sub(a, b)))
        ll = lattice_length(a, b)
        edges = (Edge(a, b, n, ll), Edge(b, a, tuple(-x for x in n), ll))
        return NewtonPolytope(2, tuple(verts), edges, (), 1, pts)
    edges = []
    for a, b in zip(verts, verts[1:] + verts[:1]):
        e = sub(b, a)
        edges.append(Edge(a, b, primitive((e[1], -e[0])), lattice_length(a, b)))
    return NewtonPolytope(2, tuple(verts), tuple(edges), (), 2, pts)


def _polytope3(pts: frozenset[Vec]) -> NewtonPolytope:
    plist = sorted(pts)
    k = _affine_dim(plist)
    if k < 3:
        # vertices of a degenerate polytope: points outside the hull of the others
        verts = tuple(
            p for p in plist if len(plist) == 1 or not halfspace_rep([q for q in plist if q != p]).contains(p)
        )
        return NewtonPolytope(3, verts, (), (), k, pts)
    rep = halfspace_rep(plist)
    faces = []
    for n, c in rep.inequalities:
        on = [p for p in plist if dot(n, p) == c]
        faces.append(Face(n, _face_cycle(on, n)))
    faces.sort(key=lambda fc: fc.normal)
    edge_faces: dict[tuple[Vec, Vec], list[Vec]] = {}
    for fc in faces:
        cyc = fc.vertices
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            edge_faces.setdefault(tuple(sorted((a, b))), []).append(fc.normal)
    edges = []
    for (a, b), fns in sorted(edge_faces.items()):
        if len(fns) != 2:
            raise GeometryError(f"edge {a}-{b} is not shared by exactly two faces")
        fns_t = tuple(sorted(fns))
        edges.append(Edge(a, b, primitive(add(*fns_t)), lattice_length(a, b), fns_t))
    verts = tuple(sorted({v for fc in faces for v in fc.vertices}))
    return NewtonPolytope(3, verts, tuple(edges), tuple(faces), 3, pts)


def _face_cycle(on: list[Vec], n: Vec) -> tuple[Vec, ...]:
    drop = max(range(3), key=lambda i: abs(n[i]))
    keep = [i for i in range(3) if i != drop]
    proj = {(p[keep[0]], p[keep[1]]): p for p in on}
    cyc = [proj[q] for q in hull_2d(proj)]
    if len(cyc) >= 3 and dot(cross(sub(cyc[1], cyc[0]), sub(cyc[2], cyc[0])), n) < 0:
        cyc = [cyc[0]] + cyc[1:][::-1]
    return tuple(cyc)


def minkowski_sum(a: NewtonPolytope, b: NewtonPolytope) -> NewtonPolytope:
    return polytope_of(add(x, y) for x in a.vertices for y in b.vertices)


# -- non-expansive direction geometry -------------------------------------------

@dataclass(frozen=True)
class FiniteDirections:
    """Finitely many rational directions in the plane (primitive integer vectors)."""

    vectors: frozenset[Vec]

    kind = "directions"

    def sorted(self) -> list[Vec]:
        return sorted(self.vectors, reverse=True)


@dataclass(frozen=True)
class ConeComplex:
    """Union of rational polyhedral cones of dimension <= 2 in R^3.

    Each cone is a sorted tuple of one or two primitive generators.
    """

    cones: frozenset[tuple[Vec, ...]]

    kind = "cones"

    def rays(self) -> set[Vec]:
        return {g for c in self.cones for g in c}

    def sorted(self) -> list[tuple[Vec, ...]]:
        return sorted(self.cones, key=lambda c: (len(c), c))


DirectionGeometry = FiniteDirections | ConeComplex


def _require_principal_shape(f: LaurentPoly) -> NewtonPolytope:
    if not f:
        raise GeometryError("zero relation")
    if is_monomial(f):
        raise GeometryError("monomial relation: the system is trivial")
    poly = newton_polytope(f)
    if not poly.full_dimensional:
        raise DegeneratePolytopeError(
            f"Newton polytope has affine dimension {poly.affine_dim} < {poly.dim}; "
            "entropy rank is outside the supported range"
        )
    return poly


def nonexpansive_from_poly(f: LaurentPoly) -> DirectionGeometry:
    poly = _require_principal_shape(f)
    if poly.dim == 2:
        return FiniteDirections(frozenset(e.normal for e in poly.edges))
    cones: set[tuple[Vec, ...]] = {(fc.normal,) for fc in poly.faces}
    cones |= {e.face_normals for e in poly.edges}
    return ConeComplex(frozenset(cones))


def nonexpansive_set(pres) -> DirectionGeometry:
    """N(alpha) for a principal presentation (or a recoding of one)."""
    from .shiftsys import base_principal

    p, f = base_principal(pres)
    return nonexpansive_from_poly(f)


def in_cone(cone: tuple[Vec, ...], v: Sequence[int | Fraction]) -> bool:
    """Exact membership of a nonzero rational vector in a cone of dimension <= 2."""
    v = primitive(v)
    if len(cone) == 1:
        g = cone[0]
        return not any(cross(g, v)) and dot(g, v) > 0
    g1, g2 = cone
    n = cross(g1, g2)
    if dot(n, v) != 0:
        return False
    a = dot(cross(v, g2), n)
    b = dot(cross(g1, v), n)
    return a >= 0 and b >= 0


def geometry_contains(g: DirectionGeometry, v: Sequence[int | Fraction]) -> bool:
    if not any(v):
        raise GeometryError("the zero vector is not a direction")
    if isinstance(g, FiniteDirections):
        if len(v) != 2:
            raise GeometryError("direction dimension mismatch")
        return primitive(v) in g.vectors
    if len(v) != 3:
        raise GeometryError("direction dimension mismatch")
    return any(in_cone(c, v) for c in g.cones)


def _position_on_cone(cone: tuple[Vec, Vec], v: Vec) -> Fraction:
    g1, g2 = cone
    n = cross(g1, g2)
    a = dot(cross(v, g2), n)
    b = dot(cross(g1, v), n)
    return Fraction(b, a + b)


def _candidates_on(cone: tuple[Vec, ...], other: ConeComplex) -> tuple[list[Vec], list[Vec]]:
    """Rays of ``cone`` where membership in ``other`` can change, plus arc midpoints."""
    if len(cone) == 1:
        return [cone[0]], []
    cuts = set(cone)
    n_sigma = cross(*cone)
    for tau in other.cones:
        for g in tau:
            if in_cone(cone, g):
                cuts.add(g)
        if len(tau) == 2:
            line = cross(n_sigma, cross(*tau))
            if any(line):
                for r in (line, tuple(-x for x in line)):
                    if in_cone(cone, r):
                        cuts.add(primitive(r))
    ordered = sorted(cuts, key=lambda r: _position_on_cone(cone, r))
    mids = [primitive(add(a, b)) for a, b in zip(ordered, ordered[1:])]
    return sorted(cuts), mids


def geometry_difference_witness(a: DirectionGeometry, b: DirectionGeometry) -> Vec | None:
    """A primitive integer direction in ``a`` but not in ``b``, or None.

    Candidates are tried in tiers (generators of ``a``, then intersection
    rays, then midpoints of sub-arcs) and the lexicographically largest valid
    candidate of the first nonempty tier is returned.
    """
    if type(a) is not type(b):
        raise GeometryError("cannot compare geometries of different kinds")
    if isinstance(a, FiniteDirections):
        diff = a.vectors - b.vectors
        return max(diff) if diff else None
    gens = sorted(a.rays())
    cuts: set[Vec] = set()
    mids: set[Vec] = set()
    for cone in a.cones:
        c, m = _candidates_on(cone, b)
        cuts.update(c)
        mids.update(m)
    for tier in (gens, sorted(cuts - set(gens)), sorted(mids)):
        hits = [r for r in tier if not geometry_contains(b, r)]
        if hits:
            return max(hits)
    return None


def edge_entropy_weights(poly: NewtonPolytope, p: int) -> dict[Vec, EntropyValue]:
    """Outward edge normal -> lattice length * log p (d=2)."""
    if poly.dim != 2:
        raise GeometryError("edge weights are defined for d=2")
    if poly.affine_dim == 0:
        return {}
    if not poly.full_dimensional:
        raise DegeneratePolytopeError("segment Newton polygon")
    out: dict[Vec, EntropyValue] = {}
    for e in poly.edges:
        out[e.normal] = EntropyValue(Fraction(e.lattice_length), p)
    return out
