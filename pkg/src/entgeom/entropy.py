"""Haar-measure half-space, directional and lexicographic entropies.

Exact values come from the Newton polygon (edge normal v carries lattice length
times log p; every other direction carries 0) and the directional formula
``h(alpha^n) = sum over v with v.n > 0 of (v.n) h(v)``.  Window estimators
compute the same quantities from counting alone: for Haar measure the conditional
entropy of a block of coordinates given another block is log p times the
difference of two projection dimensions of the window solution space.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .fpsolve import build_system, conditional_dim, kernel_dim, projection_dim, CountReport
from .laurent import LaurentPoly
from .polytope import (
    GeometryError,
    Vec,
    dot,
    edge_entropy_weights,
    newton_polytope,
    primitive,
)
from .shiftsys import (
    Presentation,
    PresentationError,
    Region,
    is_prime,
    perp,
    principal_factors,
    product,
    region_band,
    region_lex,
    region_lex_target,
    region_line,
    region_slab,
    region_strip,
)
from .values import EntropyValue, zero

Window = tuple[int, int]

DEFAULT_SCHEDULE_2D: tuple[Window, ...] = ((4, 4), (6, 6), (8, 8), (10, 10))
DEFAULT_SCHEDULE_LEX: tuple[Window, ...] = ((3, 3), (4, 4), (5, 5))
STABLE_RUN = 3


class EntropyError(ValueError):
    pass


@dataclass(frozen=True)
class EstimateSeries:
    windows: tuple[Window, ...]
    estimates: tuple[Fraction, ...]  # units of log p
    p: int
    run: int = STABLE_RUN

    @property
    def stabilized(self) -> bool:
        tail = self.estimates[-self.run:]
        return len(self.estimates) >= self.run and len(set(tail)) == 1

    @property
    def final(self) -> EntropyValue:
        return EntropyValue(self.estimates[-1], self.p)

    def value_at(self, window: Window) -> Fraction:
        return self.estimates[self.windows.index(tuple(window))]


def _map(fn: Callable, items: Sequence, workers: int) -> list:
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))


def _prime_modulus(pres: Presentation) -> int:
    if not is_prime(pres.modulus):
        raise EntropyError(f"entropy needs a prime modulus (got {pres.modulus})")
    return pres.modulus


def _check_schedule(schedule: Sequence[Window]) -> tuple[Window, ...]:
    sched = tuple(tuple(int(x) for x in w) for w in schedule)
    if not sched:
        raise EntropyError("empty window schedule")
    return sched


# -- exact values ----------------------------------------------------------------

def _polygon_weights(p: int, f: LaurentPoly) -> dict[Vec, EntropyValue]:
    if f.dim != 2:
        raise EntropyError("half-space entropies are computed for d=2")
    return edge_entropy_weights(newton_polytope(f), p)


def haar_halfspace_entropy(pres: Presentation, v: Sequence[int]) -> EntropyValue:
    """h_lambda(v): lattice length * log p on outward edge normals, 0 elsewhere.

    Products add their factors' values.
    """
    p = _prime_modulus(pres)
    if pres.dim != 2:
        raise EntropyError("half-space entropies are computed for d=2")
    v = primitive(v)
    try:
        factors = principal_factors(pres)
    except PresentationError as exc:
        raise EntropyError(str(exc)) from exc
    total = zero(p)
    for fp, f in factors:
        total = total + _polygon_weights(fp, f).get(v, zero(fp))
    return total


def haar_directional_entropy(pres: Presentation, n: Sequence[int]) -> EntropyValue:
    """h_lambda(alpha^n) = sum_{v.n > 0} (v.n) h_lambda(v) over primitive v."""
    if not any(n):
        raise EntropyError("the zero vector has no directional entropy")
    p = _prime_modulus(pres)
    if pres.dim != 2:
        raise EntropyError("directional entropies are computed for d=2")
    try:
        factors = principal_factors(pres)
    except PresentationError as exc:
        raise EntropyError(str(exc)) from exc
    total = zero(p)
    for fp, f in factors:
        for v, h in _polygon_weights(fp, f).items():
            k = dot(v, n)
            if k > 0:
                total = total + h.scaled(k)
    return total


# -- window geometry -------------------------------------------------------------

def spread_along(pres: Presentation, w: Vec) -> int:
    """Width of the relation supports measured in lattice steps along w (rounded up)."""
    ww = dot(w, w)
    vals = [Fraction(dot(e, w), ww) for rel in pres.relations for g in rel for e, _ in g]
    # single-term relations of one vector still couple only one cell
    if not vals:
        return 0
    return math.ceil(max(vals) - min(vals))


def reach_along(pres: Presentation, v: Vec) -> int:
    """Extent of the relation supports in the v direction (max - min of v.e)."""
    vals = [dot(e, v) for rel in pres.relations for g in rel for e, _ in g]
    return (max(vals) - min(vals)) if vals else 0


@dataclass(frozen=True)
class HalfspaceWindow:
    """Ambient window for a half-space estimate.

    ``line`` is the target segment of v-perp, ``strip`` the truncated half-space
    below it, and ``cap`` the remaining cells with 0 <= v.n <= lines-1+reach at
    full strip width.  Cap cells are summed out: they belong to neither the
    target nor the conditioning block, but their relations still constrain the
    line, so symbols that refer to cells beyond the line are not left free.
    """

    v: Vec
    length: int
    depth: int
    lines: int
    line: Region
    strip: Region
    cap: Region

    @property
    def ambient(self) -> Region:
        return self.line | self.strip | self.cap


def halfspace_window(pres: Presentation, v: Sequence[int], length: int, depth: int, lines: int = 1) -> HalfspaceWindow:
    """Line block of ``lines`` translates of v-perp (2*length+1 sites each) over a strip ``depth`` relations deep.

    Depth is counted in relation layers: the strip has depth*max(1, reach)
    lattice lines, where reach is the extent of the relations along v.  It is
    widened by (layers+lines)*spread sites on each side so that every line site
    sees the full dependency cone below it.
    """
    v = primitive(v)
    s = spread_along(pres, perp(v))
    reach = reach_along(pres, v)
    layers = depth * max(1, reach)
    half = length + (layers + lines) * s
    line = region_slab(v, 0, lines - 1, length)
    strip = region_strip(v, layers, half)
    cap = region_slab(v, 0, lines - 1 + reach, half) - line
    return HalfspaceWindow(v, length, depth, lines, line, strip, cap)


def window_halfspace_dim(pres: Presentation, v: Sequence[int], length: int, depth: int, lines: int = 1) -> int:
    win = halfspace_window(pres, v, length, depth, lines)
    sys = build_system(pres, win.ambient)
    return conditional_dim(sys, sys.vars_in(win.line), sys.vars_in(win.strip))


def estimate_halfspace_entropy(
    pres: Presentation,
    v: Sequence[int],
    schedule: Sequence[Window] = DEFAULT_SCHEDULE_2D,
    lines: int = 1,
    workers: int = 1,
) -> EstimateSeries:
    """Window estimates of H(line | strip) in units of log p, averaged over ``lines`` translates."""
    p = _prime_modulus(pres)
    if pres.dim != 2:
        raise EntropyError("half-space estimates are computed for d=2")
    sched = _check_schedule(schedule)
    v = primitive(v)
    dims = _map(lambda w: window_halfspace_dim(pres, v, w[0], w[1], lines), sched, workers)
    return EstimateSeries(sched, tuple(Fraction(x, lines) for x in dims), p)


def pi_Y0_dim(pres: Presentation, v: Sequence[int], length: int, depth: int) -> int:
    """Dimension of the line projection of window solutions that vanish on the strip below."""
    _prime_modulus(pres)
    if pres.dim != 2:
        raise EntropyError("pi(Y0) is computed for d=2")
    win = halfspace_window(pres, v, length, depth)
    sys = build_system(pres, win.ambient)
    pinned = sys.with_pins({i: 0 for i in sys.vars_in(win.strip)})
    return projection_dim(pinned, pinned.vars_in(win.line))


# -- Abramov-Rokhlin -------------------------------------------------------------

@dataclass(frozen=True)
class ARRow:
    window: Window
    total: int
    factor: int
    conditional: int

    @property
    def residual(self) -> int:
        return self.total - self.factor - self.conditional


@dataclass(frozen=True)
class ARReport:
    v: Vec
    p: int
    rows: tuple[ARRow, ...]

    @property
    def ok(self) -> bool:
        return all(r.residual == 0 for r in self.rows)


def trivial_system(dim: int, p: int) -> Presentation:
    """The one-point system: no alphabet components at all."""
    return Presentation(dim, p, 0, ())


def verify_abramov_rokhlin(
    y: Presentation,
    z: Presentation,
    v: Sequence[int],
    schedule: Sequence[Window] = DEFAULT_SCHEDULE_2D,
    workers: int = 1,
) -> ARReport:
    """Check h_{YxZ}(v) = h_Y(v) + h_{YxZ}(v | Y-coordinates) window by window, exactly."""
    if y.dim != z.dim:
        raise EntropyError("dimension mismatch")
    if y.dim != 2:
        raise EntropyError("Abramov-Rokhlin check is for d=2")
    _prime_modulus(y)
    _prime_modulus(z)
    sched = _check_schedule(schedule)
    v = primitive(v)
    x = product([y, z]) if z.rank else y
    y_comps = list(range(y.rank))

    def one(w: Window) -> ARRow:
        win = halfspace_window(x, v, w[0], w[1])
        sx = build_system(x, win.ambient)
        total = conditional_dim(sx, sx.vars_in(win.line), sx.vars_in(win.strip))
        sy = build_system(y, win.ambient)
        factor = conditional_dim(sy, sy.vars_in(win.line), sy.vars_in(win.strip))
        given = set(sx.vars_in(win.strip)) | set(sx.vars_in(win.ambient, y_comps))
        cond = conditional_dim(sx, sx.vars_in(win.line), given)
        return ARRow(w, total, factor, cond)

    return ARReport(v, x.modulus, tuple(_map(one, sched, workers)))


# -- directional entropy from box growth -------------------------------------------

def estimate_directional_entropy(
    pres: Presentation, n: Sequence[int], width: int, steps: Sequence[int]
) -> EstimateSeries:
    """Growth of log_p counts on bands F + [0, k) n: increments between consecutive k."""
    p = _prime_modulus(pres)
    steps = sorted(steps)
    counts = []
    for k in steps:
        rep = kernel_dim(build_system(pres, region_band(n, width, k)))
        assert isinstance(rep, CountReport)
        counts.append(rep.log_p_count)
    incs = tuple(Fraction(b - a, k2 - k1) for a, b, k1, k2 in zip(counts, counts[1:], steps, steps[1:]))
    wins = tuple((width, k) for k in steps[1:])
    return EstimateSeries(wins, incs, p)


# -- lexicographic half-space entropy (d = 3) -----------------------------------------

def lex_margin(pres: Presentation) -> int:
    vals = [e[-1] for rel in pres.relations for g in rel for e, _ in g]
    return (max(vals) - min(vals)) if vals else 0


def window_lex_dim(pres: Presentation, width: int, height: int, ell: int = 1) -> int:
    """Conditional dimension of the target columns (|t| <= height) given the lexicographic region.

    Both the conditioning columns and the unconditioned continuation of the
    target columns reach ``ell*(d-1)*margin`` beyond the target height, so that
    chains of relations through the target block stay inside the window.
    """
    d = pres.dim
    ext = lex_margin(pres) * ell * (d - 1)
    given = region_lex(ell, width, height + ext, d)
    target = region_lex_target(ell, height, d)
    sys = build_system(pres, given | region_lex_target(ell, height + ext, d))
    return conditional_dim(sys, sys.vars_in(target), sys.vars_in(given))


def lex_halfspace_entropy_estimate(
    pres: Presentation,
    schedule: Sequence[Window] = DEFAULT_SCHEDULE_LEX,
    ell: int = 1,
    workers: int = 1,
) -> EstimateSeries:
    """Window estimates of H(axis | S_ell + R e_d) / ell^(d-1), in units of log p."""
    p = _prime_modulus(pres)
    if pres.dim != 3:
        raise EntropyError("the lexicographic estimate is implemented for d=3")
    sched = _check_schedule(schedule)
    dims = _map(lambda w: window_lex_dim(pres, w[0], w[1], ell), sched, workers)
    norm = ell ** (pres.dim - 1)
    return EstimateSeries(sched, tuple(Fraction(x, norm) for x in dims), p)
