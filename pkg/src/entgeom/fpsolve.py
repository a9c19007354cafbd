"""Exact counting on finite windows: the F_p linear systems a presentation induces on a region.

Every quantity here is an integer: dimensions of solution spaces and of their
coordinate projections.  Counts are p ** dimension, and Haar-measure
conditional entropies on a window are differences of projection dimensions
(in units of log p).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _kernels
from .polytope import Vec
from .shiftsys import Presentation, Region, is_prime

Var = tuple[Vec, int]  # (cell, alphabet component)


class WindowError(ValueError):
    pass


class InfeasibleError(WindowError):
    """The pinned system has no solutions."""


@dataclass(frozen=True)
class FpWindowSystem:
    p: int
    variables: tuple[Var, ...]
    rows: tuple[tuple[tuple[int, int], ...], ...]  # sparse rows: (variable index, coefficient)
    shifts: tuple[tuple[int, Vec], ...]  # (relation index, shift) per row
    pins: Mapping[int, int] = field(default_factory=dict)

    @property
    def index(self) -> dict[Var, int]:
        idx = self.__dict__.get("_index")
        if idx is None:
            idx = {v: i for i, v in enumerate(self.variables)}
            object.__setattr__(self, "_index", idx)
        return idx

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def vars_in(self, region: Iterable[Vec], components: Iterable[int] | None = None) -> list[int]:
        idx = self.index
        comps = self._components if components is None else list(components)
        out = []
        for cell in region:
            for c in comps:
                i = idx.get((tuple(cell), c))
                if i is not None:
                    out.append(i)
        return out

    @property
    def _components(self) -> list[int]:
        return sorted({c for _, c in self.variables})

    def with_pins(self, pins: Mapping[int, int]) -> FpWindowSystem:
        merged = dict(self.pins)
        merged.update({int(k): int(v) % self.p for k, v in pins.items()})
        return FpWindowSystem(self.p, self.variables, self.rows, self.shifts, merged)

    def dense(self, columns: Sequence[int] | None = None) -> np.ndarray:
        cols = range(self.nvars) if columns is None else columns
        colpos = {c: j for j, c in enumerate(cols)}
        M = np.zeros((len(self.rows), len(colpos)), dtype=np.int64)
        for r, row in enumerate(self.rows):
            for i, c in row:
                j = colpos.get(i)
                if j is not None:
                    M[r, j] = c
        return M

    def dump(self) -> str:
        """Plain-text triplet format: header line, then ``row col value`` per nonzero."""
        lines = [f"# p={self.p} rows={len(self.rows)} cols={self.nvars}"]
        for r, row in enumerate(self.rows):
            lines.extend(f"{r} {i} {c}" for i, c in row)
        lines.extend(f"pin {i} {v}" for i, v in sorted(self.pins.items()))
        return "\n".join(lines)


@dataclass(frozen=True)
class CountReport:
    log_p_count: int
    rank: int
    nvars: int
    npins: int
    stabilized: bool = False


@dataclass(frozen=True)
class Infeasible:
    reason: str


def build_system(pres: Presentation, region: Region, pins: Mapping[int, int] | None = None) -> FpWindowSystem:
    """One row per (relation, shift) whose every term lands inside the region."""
    p = pres.modulus
    if not is_prime(p):
        raise WindowError(f"window systems need a prime modulus (got {p})")
    cells = region.cells
    variables = tuple((cell, c) for cell in cells for c in range(pres.rank))
    index = {v: i for i, v in enumerate(variables)}
    cellset = set(cells)
    entries: list[tuple[Vec, int, list[tuple[Vec, int, int]]]] = []
    for ri, rel in enumerate(pres.relations):
        terms = [(e, c, coef) for c, g in enumerate(rel) for e, coef in g]
        if not terms:
            continue
        e0 = terms[0][0]
        for cell in cells:
            n = tuple(a - b for a, b in zip(cell, e0))
            if all(tuple(a + b for a, b in zip(n, e)) in cellset for e, _, _ in terms):
                entries.append((n, ri, terms))
    entries.sort(key=lambda t: (t[0], t[1]))
    rows = []
    shifts = []
    for n, ri, terms in entries:
        acc: dict[int, int] = {}
        for e, c, coef in terms:
            i = index[(tuple(a + b for a, b in zip(n, e)), c)]
            acc[i] = (acc.get(i, 0) + coef) % p
        row = tuple(sorted((i, v) for i, v in acc.items() if v))
        if row:
            rows.append(row)
            shifts.append((ri, n))
    return FpWindowSystem(p, variables, tuple(rows), tuple(shifts), dict(pins or {}))


def _rank_on(sys: FpWindowSystem, columns: Sequence[int]) -> int:
    if not columns or not sys.rows:
        return 0
    return _kernels.rank_mod_p(sys.dense(columns), sys.p)


def _free(sys: FpWindowSystem) -> list[int]:
    return [i for i in range(sys.nvars) if i not in sys.pins]


def _check_feasible(sys: FpWindowSystem, free: list[int], rank_free: int) -> bool:
    if not sys.pins or not any(sys.pins.values()):
        return True
    p = sys.p
    A = sys.dense(free)
    rhs = np.zeros((len(sys.rows), 1), dtype=np.int64)
    for r, row in enumerate(sys.rows):
        rhs[r, 0] = -sum(c * sys.pins.get(i, 0) for i, c in row) % p
    aug = np.hstack([A, rhs]) % p
    return _kernels.rank_mod_p(aug, p) == rank_free


def kernel_dim(sys: FpWindowSystem) -> CountReport | Infeasible:
    """Dimension of the (affine) solution space, honouring pins."""
    free = _free(sys)
    r = _rank_on(sys, free)
    if not _check_feasible(sys, free, r):
        return Infeasible("pinned values are inconsistent with the relations")
    return CountReport(len(free) - r, r, sys.nvars, len(sys.pins))


def projection_dim(sys: FpWindowSystem, target: Iterable[int]) -> int:
    """Dimension of the image of the solution space under projection to ``target`` variables.

    With free variables split as T (target) and C (rest): dim = |T| - rank(A_free) + rank(A_C).
    """
    free = _free(sys)
    freeset = set(free)
    tgt = sorted(set(target) & freeset)
    if not tgt:
        r = _rank_on(sys, free)
        if not _check_feasible(sys, free, r):
            raise InfeasibleError("pinned values are inconsistent with the relations")
        return 0
    tset = set(tgt)
    rest = [i for i in free if i not in tset]
    r = _rank_on(sys, free)
    if not _check_feasible(sys, free, r):
        raise InfeasibleError("pinned values are inconsistent with the relations")
    return len(tgt) - r + _rank_on(sys, rest)


def conditional_dim(sys: FpWindowSystem, target: Iterable[int], given: Iterable[int]) -> int:
    """projection_dim(target | given) - projection_dim(given): the window conditional count exponent."""
    free = _free(sys)
    gset = set(given) & set(free)
    tset = (set(target) & set(free)) - gset
    if not tset:
        return 0
    c1 = [i for i in free if i not in gset and i not in tset]
    c2 = [i for i in free if i not in gset]
    if any(sys.pins.values()) and not _check_feasible(sys, free, _rank_on(sys, free)):
        raise InfeasibleError("pinned values are inconsistent with the relations")
    return len(tset) + _rank_on(sys, c1) - _rank_on(sys, c2)


def codes(pres: Presentation, a: Region, m: Vec, w: Region) -> bool:
    """Within window w, do the coordinates on a linearly determine the coordinate at m?"""
    m = tuple(m)
    if m not in w:
        raise WindowError(f"cell {m} is outside the window")
    if any(c not in w for c in a):
        raise WindowError("coding set is not contained in the window")
    sys = build_system(pres, w)
    return conditional_dim(sys, sys.vars_in([m]), sys.vars_in(a)) == 0


DEFAULT_BRUTE_CAP = 22


def brute_force_count(sys: FpWindowSystem, cap: int = DEFAULT_BRUTE_CAP, chunk: int = 1 << 16) -> int:
    """Exhaustive count of solutions (independent of any elimination)."""
    p = sys.p
    free = _free(sys)
    n = len(free)
    if n > cap or p ** n > 2 ** cap:
        raise WindowError(f"brute force over {p}^{n} assignments exceeds the cap")
    A = sys.dense(free)
    base = np.zeros(len(sys.rows), dtype=np.int64)
    for r, row in enumerate(sys.rows):
        base[r] = sum(c * sys.pins.get(i, 0) for i, c in row)
    if A.shape[0] == 0:
        return p ** n
    total = p ** n
    powers = p ** np.arange(n, dtype=np.int64)
    count = 0
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        X = (idx[:, None] // powers[None, :]) % p
        R = (X @ A.T + base[None, :]) % p
        count += int(np.count_nonzero(~R.any(axis=1)))
    return count
