"""Presentations of zero-dimensional algebraic Z^d-actions and finite regions of Z^d.

A presentation is the data (d, q, s, J): the system is the closed shift-invariant
subgroup of ((Z/q)^s)^(Z^d) annihilated by the relation vectors in J.  A relation
vector g = (g_1, ..., g_s) imposes, for every shift m,

    sum_c sum_n g_c[n] * x^(c)_(m+n) = 0   (mod q).
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

from .laurent import LaurentPoly
from .polytope import Vec, dot, primitive, rotate_ccw

Relation = tuple[LaurentPoly, ...]


class PresentationError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    return all(n % k for k in range(3, math.isqrt(n) + 1, 2))


@dataclass(frozen=True)
class Principal:
    p: int
    f: LaurentPoly


@dataclass(frozen=True)
class Product:
    factors: tuple["Presentation", ...]


@dataclass(frozen=True)
class Recoded:
    base: "Presentation"
    radius: int
    block: tuple[Vec, ...]


@dataclass(frozen=True)
class Presentation:
    dim: int
    modulus: int
    rank: int
    relations: tuple[Relation, ...]
    provenance: Principal | Product | Recoded | None = field(default=None, compare=False)
    name: str = field(default="", compare=False)

    def __post_init__(self):
        for rel in self.relations:
            if len(rel) != self.rank:
                raise PresentationError("relation length does not match alphabet rank")
            for g in rel:
                if g.dim != self.dim or g.modulus != self.modulus:
                    raise PresentationError("relation entry lives in a different ring")

    @property
    def is_principal(self) -> bool:
        return isinstance(self.provenance, Principal)

    def component_slices(self) -> list[range]:
        """Alphabet components belonging to each top-level factor (one range if not a product)."""
        if isinstance(self.provenance, Product):
            out, start = [], 0
            for fac in self.provenance.factors:
                out.append(range(start, start + fac.rank))
                start += fac.rank
            return out
        return [range(self.rank)]


def principal(p: int, f: LaurentPoly, name: str = "") -> Presentation:
    if not is_prime(p):
        raise PresentationError(f"{p} is not prime")
    f = f.reduce(p)
    if not f:
        raise PresentationError("the relation polynomial is zero mod p")
    return Presentation(f.dim, p, 1, ((f,),), Principal(p, f), name)


def product(factors: Sequence[Presentation], name: str = "") -> Presentation:
    factors = tuple(factors)
    if not factors:
        raise PresentationError("product of no factors")
    if len(factors) == 1:
        return factors[0]
    d = factors[0].dim
    if any(fac.dim != d for fac in factors):
        raise PresentationError("factors have different dimensions")
    q = math.lcm(*(fac.modulus for fac in factors))
    s = sum(fac.rank for fac in factors)
    zero = LaurentPoly.zero(d, q)
    rels: list[Relation] = []
    offset = 0
    for fac in factors:
        scale = q // fac.modulus
        for rel in fac.relations:
            vec = [zero] * s
            for c, g in enumerate(rel):
                vec[offset + c] = LaurentPoly.from_terms(d, q, g.terms)
            rels.append(tuple(vec))
        if scale != 1:
            # the factor's alphabet sits inside Z/q as the multiples of q/q_i
            for c in range(fac.rank):
                vec = [zero] * s
                vec[offset + c] = LaurentPoly.monomial((0,) * d, q, fac.modulus)
                rels.append(tuple(vec))
        offset += fac.rank
    return Presentation(d, q, s, tuple(rels), Product(factors), name)


def ball(radius: int, dim: int) -> tuple[Vec, ...]:
    r2 = radius * radius
    rng = range(-radius, radius + 1)
    pts = [b for b in itertools.product(rng, repeat=dim) if sum(x * x for x in b) <= r2]
    pts.sort(key=lambda b: (any(b), b))
    return tuple(pts)


def higher_block(pres: Presentation, r: int) -> Presentation:
    """Recode over blocks B(r): new symbol at n is the (x_(n+b))_(b in B(r)) pattern."""
    if r < 1:
        raise PresentationError("block radius must be at least 1")
    block = ball(r, pres.dim)  # block[0] is the origin
    k = len(block)
    d, q = pres.dim, pres.modulus
    s_new = pres.rank * k
    zero = LaurentPoly.zero(d, q)
    rels: list[Relation] = []
    for rel in pres.relations:
        vec = [zero] * s_new
        for c, g in enumerate(rel):
            vec[c * k] = g
        rels.append(tuple(vec))
    for c in range(pres.rank):
        for j in range(1, k):
            vec = [zero] * s_new
            vec[c * k + j] = LaurentPoly.one(d, q)
            vec[c * k] = LaurentPoly.monomial(block[j], q, -1)
            rels.append(tuple(vec))
    return Presentation(d, q, s_new, tuple(rels), Recoded(pres, r, block), pres.name and f"{pres.name}[r={r}]")


def base_principal(pres: Presentation) -> tuple[int, LaurentPoly]:
    prov = pres.provenance
    if isinstance(prov, Principal):
        return prov.p, prov.f
    if isinstance(prov, Recoded):
        return base_principal(prov.base)
    raise PresentationError("not a principal presentation (or a recoding of one)")


def principal_factors(pres: Presentation) -> list[tuple[int, LaurentPoly]]:
    """Principal data of every factor of a product (or of the system itself)."""
    prov = pres.provenance
    if isinstance(prov, Product):
        return [pf for fac in prov.factors for pf in principal_factors(fac)]
    return [base_principal(pres)]


def relation_offsets(pres: Presentation) -> list[Vec]:
    return [e for rel in pres.relations for g in rel for e, _ in g]


# -- regions --------------------------------------------------------------------

@dataclass(frozen=True)
class Region:
    cells: tuple[Vec, ...]
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "cells", tuple(sorted(set(tuple(c) for c in self.cells))))

    def __len__(self) -> int:
        return len(self.cells)

    def __iter__(self):
        return iter(self.cells)

    def __contains__(self, cell) -> bool:
        return tuple(cell) in self._set

    @property
    def _set(self) -> frozenset[Vec]:
        s = self.__dict__.get("_cellset")
        if s is None:
            s = frozenset(self.cells)
            object.__setattr__(self, "_cellset", s)
        return s

    def __or__(self, other: Region) -> Region:
        return Region(self.cells + other.cells, f"{self.label}|{other.label}")

    def __sub__(self, other: Region) -> Region:
        return Region(tuple(c for c in self.cells if c not in other), f"{self.label}-{other.label}")

    def translate(self, n: Sequence[int]) -> Region:
        return Region(tuple(tuple(a + b for a, b in zip(c, n)) for c in self.cells), self.label)


def _normalize(v: Sequence[int]) -> Vec:
    w = primitive(v)
    if w != tuple(v):
        warnings.warn(f"direction {tuple(v)} normalized to primitive {w}", stacklevel=3)
    return w


def perp(v: Sequence[int]) -> Vec:
    """Primitive generator of v-perp in Z^2: the counterclockwise rotation of v."""
    return rotate_ccw(v)


def region_box(sides: Sequence[int], origin: Sequence[int] | None = None) -> Region:
    if not sides or any(s < 1 for s in sides):
        raise ValueError("box sides must be positive")
    origin = origin or (0,) * len(sides)
    cells = itertools.product(*(range(o, o + s) for o, s in zip(origin, sides)))
    return Region(tuple(cells), "box")


def _slab_cells(v: Vec, lo: int, hi: int, half_width: int) -> list[Vec]:
    """Lattice points n of Z^2 with lo <= v.n <= hi and |n.w| <= half_width*|w|^2."""
    w = perp(v)
    ww = dot(w, w)
    # n = a*v_star + b*w with v.v_star = 1
    vs = dual_step(v)
    c = dot(vs, w)
    cells = []
    for a in range(lo, hi + 1):
        bound = half_width * ww
        bmin = -((bound + a * c) // ww)
        bmax = (bound - a * c) // ww
        for b in range(bmin, bmax + 1):
            cells.append((a * vs[0] + b * w[0], a * vs[1] + b * w[1]))
    return cells


def dual_step(v: Sequence[int]) -> Vec:
    """A primitive v* with v.v* = 1 (so H_v + v* = H_v together with v-perp)."""
    a, b = v
    g, x, y = _ext_gcd(a, b)
    if g != 1:
        raise ValueError(f"{tuple(v)} is not primitive")
    return (x, y)


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return (abs(a), (1 if a >= 0 else -1), 0)
    g, x, y = _ext_gcd(b, a % b)
    return g, y, x - (a // b) * y


def region_strip(v: Sequence[int], depth: int, length: int) -> Region:
    """{n : -depth <= v.n < 0, |n.w| <= length*|w|^2}, the truncated half-space below v-perp."""
    v = _normalize(v)
    if depth < 1 or length < 0:
        raise ValueError("strip needs depth >= 1 and length >= 0")
    return Region(tuple(_slab_cells(v, -depth, -1, length)), f"strip{v}")


def region_line(v: Sequence[int], length: int) -> Region:
    """{n : v.n = 0, |n.w| <= length*|w|^2}: 2*length+1 consecutive lattice sites of v-perp."""
    v = _normalize(v)
    if length < 0:
        raise ValueError("line length must be nonnegative")
    return Region(tuple(_slab_cells(v, 0, 0, length)), f"line{v}")


def region_slab(v: Sequence[int], lo: int, hi: int, half_width: int) -> Region:
    v = _normalize(v)
    return Region(tuple(_slab_cells(v, lo, hi, half_width)), f"slab{v}")


def _lex_positive(c: Sequence[int]) -> bool:
    for x in c:
        if x:
            return x > 0
    return False


def region_lex(ell: int, width: int, height: int, dim: int = 3) -> Region:
    """Truncation of S_ell + R e_d to block indices in [-width, width]^(d-1) and |t| <= height.

    Columns are c = ell*b + u with u in [0, ell-1]^(d-1); a column belongs to
    S_ell when its block index b is lexicographically positive.
    """
    if ell < 1 or width < 0 or height < 0:
        raise ValueError("invalid lexicographic region parameters")
    cells = []
    for b in itertools.product(range(-width, width + 1), repeat=dim - 1):
        if not _lex_positive(b):
            continue
        for u in itertools.product(range(ell), repeat=dim - 1):
            col = tuple(ell * bi + ui for bi, ui in zip(b, u))
            cells.extend(col + (t,) for t in range(-height, height + 1))
    return Region(tuple(cells), f"lex{ell}")


def region_lex_target(ell: int, height: int, dim: int = 3) -> Region:
    """U_ell + segment of R e_d: the columns [0, ell-1]^(d-1) for |t| <= height."""
    cells = [u + (t,) for u in itertools.product(range(ell), repeat=dim - 1) for t in range(-height, height + 1)]
    return Region(tuple(cells), f"axis{ell}")


def region_band(n: Sequence[int], width: int, steps: int) -> Region:
    """Union of translates F + j*n (0 <= j < steps) of a slab F transverse to n (d=2).

    F = {m : 0 <= m.n < |n|^2, |m.n_perp| <= width*|n|^2}.
    """
    n = tuple(n)
    nn = dot(n, n)
    w = rotate_ccw(n)
    cells = []
    bound = width * nn
    lo_b = -bound
    for x in range(-bound - steps * abs(n[0]) - 1, bound + steps * abs(n[0]) + 2):
        for y in range(-bound - steps * abs(n[1]) - 1, bound + steps * abs(n[1]) + 2):
            a = x * n[0] + y * n[1]
            if 0 <= a < steps * nn and lo_b <= x * w[0] + y * w[1] <= bound:
                cells.append((x, y))
    return Region(tuple(cells), f"band{n}")
