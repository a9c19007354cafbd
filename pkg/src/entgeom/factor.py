"""Bounded irreducibility test for Laurent polynomials over F_p.

Over a field the Newton polytope of a product is the Minkowski sum of the
factors' polytopes.  A nontrivial factorisation f = g*h (up to units) therefore
has N(g) a lattice summand of N(f).  After normalising g so that its lex-least
support point is the origin with coefficient 1, every candidate g lives on the
lattice points of P0 = N(f) - lexmin(f), and h lives on

    M = {x : x + vert(N(g)) inside P0} + lexmin(f).

Candidate supports are enumerated by vertex set, coefficients by exhaustion,
and the cofactor h is found by solving the linear system g*h = f.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator

from .laurent import LaurentPoly, is_monomial, mul, support
from .polytope import HalfspaceRep, Vec, add, halfspace_rep, polytope_of, sub
from .shiftsys import is_prime

DEFAULT_EFFORT = 200_000


class FactorError(ValueError):
    pass


@dataclass(frozen=True)
class Irreducible:
    candidates: int
    transcript: tuple[str, ...] = field(default=(), compare=False)

    verdict = "Irreducible"


@dataclass(frozen=True)
class Reducible:
    factor: LaurentPoly
    cofactor: LaurentPoly
    candidates: int = 0
    transcript: tuple[str, ...] = field(default=(), compare=False)

    verdict = "Reducible"


@dataclass(frozen=True)
class Unknown:
    reason: str
    candidates: int = 0
    transcript: tuple[str, ...] = field(default=(), compare=False)

    verdict = "Unknown"


FactorResult = Irreducible | Reducible | Unknown


class _Budget:
    def __init__(self, bound: int):
        self.bound = bound
        self.used = 0

    def spend(self, k: int = 1) -> bool:
        self.used += k
        return self.used <= self.bound


def _solve_mod_p(rows: list[list[int]], rhs: list[int], p: int) -> list[int] | None:
    """One solution of A x = b over F_p (free variables set to 0), or None."""
    n = len(rows[0]) if rows else 0
    A = [r[:] + [b % p] for r, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(A)) if A[i][c] % p), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][c], p - 2, p)
        A[r] = [(x * inv) % p for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c]:
                k = A[i][c]
                A[i] = [(x - k * y) % p for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    if any(row[-1] for row in A[r:]):
        return None
    x = [0] * n
    for i, c in enumerate(pivots):
        x[c] = A[i][-1]
    return x


def _cofactor(f: LaurentPoly, g: LaurentPoly, cells: list[Vec]) -> LaurentPoly | None:
    """h supported on ``cells`` with g*h = f, if one exists."""
    p = f.modulus
    gt = list(g.terms.items())
    targets = sorted({add(e, c) for e, _ in gt for c in cells} | set(f.terms))
    tindex = {t: i for i, t in enumerate(targets)}
    rows = [[0] * len(cells) for _ in targets]
    for j, c in enumerate(cells):
        for e, a in gt:
            rows[tindex[add(e, c)]][j] = (rows[tindex[add(e, c)]][j] + a) % p
    rhs = [f.coeff(t) for t in targets]
    sol = _solve_mod_p(rows, rhs, p)
    if sol is None:
        return None
    return LaurentPoly.from_terms(f.dim, p, {c: v for c, v in zip(cells, sol) if v})


def _convex_position(subset: tuple[Vec, ...]) -> bool:
    return len(polytope_of(subset).vertices) == len(subset)


def _summand_translates(vertices: tuple[Vec, ...], p0: HalfspaceRep, p0_points: list[Vec]) -> list[Vec]:
    """Lattice x with x + vertices inside P0 (x ranges over P0 - v0 for the first vertex v0)."""
    v0 = vertices[0]
    out = []
    for q in p0_points:
        x = sub(q, v0)
        if all(p0.contains(add(x, v)) for v in vertices[1:]):
            out.append(x)
    return out


def _coefficient_choices(vertices: tuple[Vec, ...], others: list[Vec], p: int) -> Iterator[dict[Vec, int]]:
    nz = range(1, p)
    anyc = range(p)
    origin_first = [v for v in vertices if not any(v)]
    rest = [v for v in vertices if any(v)]
    for vc in itertools.product(nz, repeat=len(rest)):
        for oc in itertools.product(anyc, repeat=len(others)):
            coeffs = {v: 1 for v in origin_first}
            coeffs.update(zip(rest, vc))
            coeffs.update((o, c) for o, c in zip(others, oc) if c)
            yield coeffs


def irreducible_mod_p(f: LaurentPoly, p: int | None = None, effort_bound: int = DEFAULT_EFFORT) -> FactorResult:
    """Decide irreducibility of f in F_p[u^+-1] (up to units) by Minkowski-summand search.

    Irreducible is exact whenever the search finishes inside ``effort_bound``
    candidate checks; otherwise the answer is Unknown.
    """
    p = f.modulus if p is None else p
    if not is_prime(p):
        raise FactorError(f"{p} is not prime")
    f = f.reduce(p)
    if not f:
        raise FactorError("the zero polynomial has no factorisation")
    if is_monomial(f):
        raise FactorError("monomials are units")
    if f.dim not in (1, 2, 3):
        return Unknown(f"no summand enumeration for d={f.dim}")
    if f.dim == 1:
        return _irreducible_1d(f, p, _Budget(effort_bound))

    low = min(support(f))
    p0_points_shifted = [sub(e, low) for e in support(f)]
    p0 = halfspace_rep(p0_points_shifted)
    lattice = sorted(p0.lattice_points())
    p0_vertices = polytope_of(lattice).vertices
    budget = _Budget(effort_bound)
    log = [f"P0 has {len(lattice)} lattice points"]
    # non-origin points of a candidate support; the origin is always its lex-least vertex
    nonorigin = [x for x in lattice if any(x) and x > (0,) * f.dim]
    for k in range(1, len(nonorigin) + 1):
        for extra in itertools.combinations(nonorigin, k):
            verts = ((0,) * f.dim,) + extra
            if not budget.spend():
                return Unknown(f"effort bound {effort_bound} exhausted", budget.used, tuple(log))
            if not _convex_position(verts):
                continue
            trans = _summand_translates(verts, p0, lattice)
            if len(trans) < 2:
                continue
            # every vertex of P0 must be reachable as a vertex of Q plus a translate
            reach = {add(v, t) for v in verts for t in trans}
            if not all(w in reach for w in p0_vertices):
                continue
            q_rep = halfspace_rep(verts)
            others = [x for x in q_rep.lattice_points() if x not in verts]
            cells = sorted(add(t, low) for t in trans)
            for coeffs in _coefficient_choices(verts, others, p):
                if not budget.spend():
                    return Unknown(f"effort bound {effort_bound} exhausted", budget.used, tuple(log))
                g = LaurentPoly.from_terms(f.dim, p, coeffs)
                h = _cofactor(f, g, cells)
                if h is not None and h and not is_monomial(h):
                    assert mul(g, h) == f
                    log.append(f"summand with vertices {verts}: f = ({g}) * ({h})")
                    return Reducible(g, h, budget.used, tuple(log))
    log.append(f"no nontrivial summand factor among {budget.used} candidates")
    return Irreducible(budget.used, tuple(log))


def _irreducible_1d(f: LaurentPoly, p: int, budget: _Budget) -> FactorResult:
    """Univariate case: trial division by monic polynomials of degree <= deg/2."""
    low = min(support(f))[0]
    g0 = f.shift((-low,))
    deg = max(support(g0))[0]
    for k in range(1, deg // 2 + 1):
        for tail in itertools.product(range(p), repeat=k):
            if not budget.spend():
                return Unknown("effort bound exhausted", budget.used)
            if tail[0] == 0:
                continue
            g = LaurentPoly.from_terms(1, p, {(i,): c for i, c in enumerate(tail) if c} | {(k,): 1})
            h = _cofactor(g0, g, [(i,) for i in range(deg - k + 1)])
            if h is not None and not is_monomial(h):
                return Reducible(g, h.shift((low,)), budget.used, (f"f = ({g}) * ({h.shift((low,))})",))
    return Irreducible(budget.used, ("no factor of degree <= deg/2",))
