import random

import pytest

from entgeom.fpsolve import (
    CountReport,
    Infeasible,
    InfeasibleError,
    WindowError,
    brute_force_count,
    build_system,
    codes,
    conditional_dim,
    kernel_dim,
    projection_dim,
)
from entgeom.laurent import parse_poly
from entgeom.shiftsys import Region, region_box, region_line, region_strip
from helpers import random_region as _random_region, random_system as _random_system


def test_box_system_shape(x1):
    s = build_system(x1, region_box([2, 2]))
    assert s.nvars == 4 and len(s.rows) == 1
    for n in range(2, 6):
        s = build_system(x1, region_box([n, n]))
        assert s.nvars == n * n and len(s.rows) == (n - 1) ** 2


def test_x1_box_counts(x1):
    for n in range(2, 5):
        s = build_system(x1, region_box([n, n]))
        assert kernel_dim(s).log_p_count == 2 * n - 1
        if n <= 4:
            assert brute_force_count(s) == 2 ** (2 * n - 1)


def test_product_box(x12, x1, x2):
    s = build_system(x12, region_box([2, 2]))
    assert brute_force_count(s) == 64
    for n in (2, 3, 5):
        box = region_box([n, n])
        k = kernel_dim(build_system(x12, box)).log_p_count
        assert k == kernel_dim(build_system(x1, box)).log_p_count + kernel_dim(build_system(x2, box)).log_p_count


def test_empty_and_free_regions(x1):
    s = build_system(x1, Region(()))
    assert kernel_dim(s).log_p_count == 0
    line = region_box([3, 1])
    s = build_system(x1, line)
    assert brute_force_count(s) == 8


def test_composite_modulus_rejected():
    from entgeom.shiftsys import Presentation

    pres = Presentation(2, 4, 1, ((parse_poly("1 + u1", 2, 4),),))
    with pytest.raises(WindowError):
        build_system(pres, region_box([2, 2]))


def test_projection_examples(x1):
    box = region_box([3, 3])
    s = build_system(x1, box)
    bottom = s.vars_in([(i, 0) for i in range(3)])
    assert projection_dim(s, bottom) == 3
    assert projection_dim(s, []) == 0


def test_pinned_strip_projection(x1):
    line = region_line((1, 1), 3)
    strip = region_strip((1, 1), 3, 6)
    s = build_system(x1, line | strip)
    pinned = s.with_pins({i: 0 for i in s.vars_in(strip)})
    assert projection_dim(pinned, pinned.vars_in(line)) == 1


def test_infeasible_pins(x1):
    s = build_system(x1, region_box([2, 2]))
    pins = {s.index[((0, 0), 0)]: 1, s.index[((1, 0), 0)]: 0, s.index[((0, 1), 0)]: 0}
    assert isinstance(kernel_dim(s.with_pins(pins)), Infeasible)
    with pytest.raises(InfeasibleError):
        projection_dim(s.with_pins(pins), [0])
    ok = s.with_pins({s.index[((0, 0), 0)]: 1, s.index[((1, 0), 0)]: 1})
    rep = kernel_dim(ok)
    assert isinstance(rep, CountReport) and rep.log_p_count == 1
    assert brute_force_count(ok) == 2


def test_codes(x1):
    box = region_box([2, 2])
    assert codes(x1, Region(((0, 0), (1, 0))), (0, 1), box)
    assert codes(x1, Region(((1, 1),)), (1, 1), box)
    assert not codes(x1, Region(((0, 0),)), (0, 1), box)
    with pytest.raises(WindowError):
        codes(x1, Region(((0, 0),)), (5, 5), box)


def test_brute_force_cap(x1):
    with pytest.raises(WindowError):
        brute_force_count(build_system(x1, region_box([5, 5])))


def test_dump_is_triplets(x1):
    text = build_system(x1, region_box([2, 2])).dump()
    lines = text.splitlines()
    assert lines[0] == "# p=2 rows=1 cols=4"
    assert len(lines) == 4 and all(len(ln.split()) == 3 for ln in lines[1:])


def test_oracle_equivalence_random():
    """p^kernel_dim equals the brute-force count on >= 200 random systems and regions."""
    rng = random.Random(2024)
    done = 0
    while done < 220:
        pres = _random_system(rng)
        reg = _random_region(rng, pres.dim, 12)
        s = build_system(pres, reg)
        if s.nvars > 20 or pres.modulus ** s.nvars > 2 ** 22:
            continue
        if rng.random() < 0.3 and s.nvars:
            pins = {rng.randrange(s.nvars): rng.randrange(pres.modulus) for _ in range(2)}
            s = s.with_pins(pins)
        rep = kernel_dim(s)
        bf = brute_force_count(s)
        if isinstance(rep, Infeasible):
            assert bf == 0
        else:
            assert bf == pres.modulus ** rep.log_p_count
        done += 1


def test_submodularity_random():
    rng = random.Random(99)
    for _ in range(100):
        pres = _random_system(rng)
        amb = _random_region(rng, pres.dim, 30)
        s = build_system(pres, amb)
        cells = list(amb)
        A = rng.sample(cells, rng.randint(1, len(cells)))
        Bp = rng.sample(cells, rng.randint(0, len(cells)))
        B = rng.sample(Bp, rng.randint(0, len(Bp)))
        va, vb, vbp = s.vars_in(A), s.vars_in(B), s.vars_in(Bp)
        lhs = conditional_dim(s, va, vb)
        rhs = conditional_dim(s, va, vbp)
        assert lhs >= rhs
        # the conditional count is the difference of two projection dimensions
        assert lhs == projection_dim(s, set(va) | set(vb)) - projection_dim(s, vb)


def test_determinism_across_workers(x1):
    from entgeom.entropy import estimate_halfspace_entropy

    a = estimate_halfspace_entropy(x1, (1, 1), [(3, 3), (4, 4)], workers=1)
    b = estimate_halfspace_entropy(x1, (1, 1), [(3, 3), (4, 4)], workers=4)
    assert a == b
