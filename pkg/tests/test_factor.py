import itertools
import random

import pytest

from entgeom.factor import FactorError, Irreducible, Reducible, Unknown, irreducible_mod_p
from entgeom.laurent import LaurentPoly, is_monomial, mul, parse_poly


@pytest.mark.parametrize(
    "text,dim",
    [("1 + u1 + u2", 2), ("1 + u1 + u2 + u3", 3), ("1 + u1^-1 + u2 + u3", 3), ("1 + u1 + u1^3u2", 2)],
)
def test_irreducible_examples(text, dim):
    assert isinstance(irreducible_mod_p(parse_poly(text, dim, 2), 2), Irreducible)


def test_product_is_reducible_with_dividing_factor():
    f = parse_poly("u2^-1 + u1u2^-1 + u1^2 + u2 + u1u2", 2, 2)
    res = irreducible_mod_p(f, 2)
    assert isinstance(res, Reducible)
    assert mul(res.factor, res.cofactor) == f
    assert not is_monomial(res.factor) and not is_monomial(res.cofactor)
    # the factor is one of the two three-term polynomials up to a unit
    shapes = {frozenset(e for e, _ in g) for g in (res.factor, res.cofactor)}
    x1 = frozenset({(0, 0), (1, 0), (0, 1)})
    assert any(s == x1 or frozenset((a - min(s)[0], b - min(s)[1]) for a, b in s) == x1 for s in shapes)


def test_characteristic_matters():
    assert isinstance(irreducible_mod_p(parse_poly("1 + u1^2", 2, 2), 2), Reducible)
    assert isinstance(irreducible_mod_p(parse_poly("1 + u1^2", 2, 3), 3), Irreducible)
    assert isinstance(irreducible_mod_p(parse_poly("1 + u1^2 + u2^2", 2, 2), 2), Reducible)
    assert isinstance(irreducible_mod_p(parse_poly("1 + u1^2 + u2^2", 2, 3), 3), Irreducible)


def test_errors():
    with pytest.raises(FactorError):
        irreducible_mod_p(parse_poly("1 + u1", 2, 4), 4)
    with pytest.raises(FactorError):
        irreducible_mod_p(LaurentPoly.zero(2, 2), 2)
    with pytest.raises(FactorError):
        irreducible_mod_p(parse_poly("u1u2", 2, 2), 2)


def test_effort_bound_gives_unknown():
    f = parse_poly("1 + u1^3 + u2^3 + u1u2", 2, 2)
    assert isinstance(irreducible_mod_p(f, 2, effort_bound=3), Unknown)


def test_random_products_are_found_reducible():
    rng = random.Random(7)
    for _ in range(30):
        p = rng.choice([2, 3])
        g, h = (
            LaurentPoly.from_terms(2, p, {(rng.randint(0, 1), rng.randint(0, 1)): rng.randint(1, p - 1) for _ in range(3)})
            for _ in range(2)
        )
        if is_monomial(g) or is_monomial(h):
            continue
        res = irreducible_mod_p(mul(g, h), p)
        assert isinstance(res, Reducible)
        assert mul(res.factor, res.cofactor) == mul(g, h)


def _brute_reducible(f: LaurentPoly, p: int) -> bool:
    """Exhaustive search for g*h = f with both supported in small boxes."""
    cells = list(itertools.product(range(0, 3), range(0, 3)))
    fs = {e: c for e, c in f}
    for gsz in range(2, 4):
        for gs in itertools.combinations(cells, gsz):
            if (0, 0) not in gs:
                continue
            for gc in itertools.product(range(1, p), repeat=gsz):
                g = LaurentPoly.from_terms(2, p, dict(zip(gs, gc)))
                for hsz in range(2, 4):
                    for hs in itertools.combinations(cells, hsz):
                        for hc in itertools.product(range(1, p), repeat=hsz):
                            h = LaurentPoly.from_terms(2, p, dict(zip(hs, hc)))
                            if mul(g, h).terms == fs:
                                return True
    return False


def test_against_brute_force_mod_2():
    rng = random.Random(3)
    for _ in range(12):
        f = LaurentPoly.from_terms(2, 2, {(rng.randint(0, 2), rng.randint(0, 2)): 1 for _ in range(4)})
        if is_monomial(f):
            continue
        res = irreducible_mod_p(f, 2)
        if isinstance(res, Reducible):
            assert mul(res.factor, res.cofactor) == f
        else:
            assert not _brute_reducible(f, 2)
