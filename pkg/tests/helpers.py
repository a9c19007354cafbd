"""Random systems and regions shared by the oracle and property suites."""

import random

from entgeom.laurent import LaurentPoly, is_monomial
from entgeom.shiftsys import Region, principal, product


def random_system(rng: random.Random):
    p = rng.choice([2, 3, 5])
    d = rng.choice([1, 2, 2, 3])
    while True:
        terms = {tuple(rng.randint(-1, 1) for _ in range(d)): rng.randint(1, p - 1) for _ in range(rng.randint(2, 4))}
        f = LaurentPoly.from_terms(d, p, terms)
        if f and not is_monomial(f):
            break
    pres = principal(p, f)
    if rng.random() < 0.25:
        g = LaurentPoly.from_terms(d, p, {tuple(rng.randint(0, 1) for _ in range(d)): 1 for _ in range(2)})
        if g and not is_monomial(g):
            pres = product([pres, principal(p, g)])
    return pres


def random_region(rng: random.Random, d: int, maxcells: int) -> Region:
    cells = {tuple(rng.randint(0, 3) for _ in range(d)) for _ in range(rng.randint(1, maxcells))}
    return Region(tuple(cells))
