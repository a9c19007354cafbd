"""Acceptance criteria, one check per criterion, each under its time limit.

Run under pytest (one test per criterion, lines collected into the terminal
summary) or directly as a script:

    python3 tests/test_acceptance.py
"""

from __future__ import annotations

import io
import os
import random
import sys
import time
from contextlib import redirect_stdout
from dataclasses import dataclass
from typing import Callable

import pytest

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from helpers import random_region, random_system  # noqa: E402

from entgeom.cli import main as cli_main  # noqa: E402
from entgeom.disjoint import (  # noqa: E402
    Disjoint,
    certificate_text,
    disjoint_auto,
    parse_certificate,
    recheck_certificate,
)
from entgeom.entropy import (  # noqa: E402
    DEFAULT_SCHEDULE_2D,
    DEFAULT_SCHEDULE_LEX,
    estimate_halfspace_entropy,
    haar_directional_entropy,
    lex_halfspace_entropy_estimate,
)
from entgeom.fpsolve import Infeasible, brute_force_count, build_system, conditional_dim, kernel_dim  # noqa: E402
from entgeom.polytope import nonexpansive_set  # noqa: E402
from entgeom.report import parse_structured  # noqa: E402
from entgeom.shiftsys import higher_block, region_box  # noqa: E402
from entgeom.sysfile import load_system  # noqa: E402

SYSTEMS = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "systems")


def _sys(name: str):
    return load_system(os.path.join(SYSTEMS, name + ".sys"))


def _cli(*args) -> tuple[int, str]:
    buf = io.StringIO()
    with redirect_stdout(buf):
        rc = cli_main([str(a) for a in args])
    return rc, buf.getvalue()


@dataclass
class Outcome:
    ok: bool
    detail: str


# -- criteria -------------------------------------------------------------------

def c1_newton_pentagon() -> Outcome:
    rc, out = _cli("--format", "structured", "newton", os.path.join(SYSTEMS, "X1xX2.sys"))
    rep = parse_structured(out)
    verts = set(rep.get("vertex"))
    poly = rep.first("polynomial")
    want_v = {"(0,-1)", "(1,-1)", "(2,0)", "(1,1)", "(0,1)"}
    want_p = "u2^-1 + u1u2^-1 + u1^2 + u2 + u1u2"
    ok = rc == 0 and verts == want_v and poly == want_p
    return Outcome(ok, f"vertices {sorted(verts)}; expansion {poly}")


def c2_ledrappier_geometry() -> Outcome:
    n1 = set(nonexpansive_set(_sys("X1")).vectors)
    n2 = set(nonexpansive_set(_sys("X2")).vectors)
    ok = n1 == {(0, -1), (-1, 0), (1, 1)} and n2 == {(0, 1), (-1, 0), (1, -1)}
    return Outcome(ok, f"N(X1)={sorted(n1)} N(X2)={sorted(n2)}")


def c3_entropy_values() -> Outcome:
    a = haar_directional_entropy(_sys("X2"), (0, 1))
    b = haar_directional_entropy(_sys("X1xX2"), (1, 1))
    # stated targets in units of log 2: 1 and 2 (log 4)
    ok = a.base_prime == 2 and a.coefficient == 1 and b.base_prime == 2 and b.coefficient == 2
    return Outcome(ok, f"h(X2, e2) = {a.exact()} (want 1 · log 2); h(X1xX2, e1+e2) = {b.exact()} (want 2 · log 2)")


def c4_estimator_convergence() -> Outcome:
    x1 = _sys("X1")
    sched = tuple(w for w in DEFAULT_SCHEDULE_2D if w <= (8, 8))
    a = estimate_halfspace_entropy(x1, (1, 1), sched)
    b = estimate_halfspace_entropy(x1, (0, 1), sched)
    ok = a.stabilized and a.estimates[-1] == 1 and b.stabilized and b.estimates[-1] == 0
    return Outcome(ok, f"(1,1): {[str(x) for x in a.estimates]}; (0,1): {[str(x) for x in b.estimates]}")


def c5_abramov_rokhlin() -> Outcome:
    rc, out = _cli("--format", "structured", "verify", os.path.join(SYSTEMS, "X1.sys"),
                   os.path.join(SYSTEMS, "X2.sys"), "--suite", "ar")
    rep = parse_structured(out)
    rows = rep.get("residual")
    nonzero = [r for r in rows if not r.endswith("residual 0")]
    want_rows = 3 * len(DEFAULT_SCHEDULE_2D)
    ok = rc == 0 and len(rows) == want_rows and not nonzero
    return Outcome(ok, f"{len(rows)} windows checked, {len(nonzero)} nonzero residuals")


def c6_oracle_equivalence() -> Outcome:
    rng = random.Random(20240601)
    checked = bad = 0
    while checked < 200:
        pres = random_system(rng)
        s = build_system(pres, random_region(rng, pres.dim, 12))
        if s.nvars > 20 or pres.modulus ** s.nvars > 2 ** 22:
            continue
        if rng.random() < 0.3 and s.nvars:
            s = s.with_pins({rng.randrange(s.nvars): rng.randrange(pres.modulus) for _ in range(2)})
        rep = kernel_dim(s)
        want = 0 if isinstance(rep, Infeasible) else pres.modulus ** rep.log_p_count
        bad += brute_force_count(s) != want
        checked += 1
    x1 = _sys("X1")
    boxes = [brute_force_count(build_system(x1, region_box([n, n]))) for n in (2, 3, 4)]
    ok = bad == 0 and boxes == [2 ** (2 * n - 1) for n in (2, 3, 4)]
    return Outcome(ok, f"{checked} random systems, {bad} mismatches; X1 boxes {boxes}")


def c7_presentation_invariance() -> Outcome:
    x1 = _sys("X1")
    rec = higher_block(x1, 1)
    dirs = [(1, 1), (-1, 0), (0, -1), (0, 1), (1, 0), (1, -1), (2, 1)]
    diffs = []
    for v in dirs:
        a = estimate_halfspace_entropy(x1, v, DEFAULT_SCHEDULE_2D)
        b = estimate_halfspace_entropy(rec, v, DEFAULT_SCHEDULE_2D)
        if not (a.stabilized and b.stabilized and a.estimates[-1] == b.estimates[-1]):
            diffs.append(v)
    same_n = nonexpansive_set(x1) == nonexpansive_set(rec)
    return Outcome(not diffs and same_n, f"{len(dirs)} directions, differing: {diffs or 'none'}; N equal: {same_n}")


def c8_certificates() -> Outcome:
    details = []
    ok = True
    for pair, want in ((("X1", "X2"), (1, 1)), (("f1", "f2"), (1, 0, 0))):
        res = disjoint_auto([_sys(n) for n in pair])
        if not isinstance(res, Disjoint):
            ok = False
            details.append(f"{pair}: {res.verdict}")
            continue
        back = parse_certificate(certificate_text(res.certificate))
        rechecked = recheck_certificate(back).ok
        good = res.certificate.witnesses[0] == want and rechecked
        ok &= good
        details.append(f"{'/'.join(pair)}: witness {res.certificate.witnesses[0]}, recheck {'ok' if rechecked else 'FAIL'}")
    return Outcome(ok, "; ".join(details))


def c9_lex_signs() -> Outcome:
    a = lex_halfspace_entropy_estimate(_sys("f1"), DEFAULT_SCHEDULE_LEX)
    b = lex_halfspace_entropy_estimate(_sys("f2"), DEFAULT_SCHEDULE_LEX)
    ok = a.estimates[-1] > 0 and b.estimates[-1] == 0
    return Outcome(ok, f"f1: {[str(x) for x in a.estimates]}; f2: {[str(x) for x in b.estimates]}")


def c10_submodularity() -> Outcome:
    rng = random.Random(777)
    bad = 0
    for _ in range(100):
        pres = random_system(rng)
        amb = random_region(rng, pres.dim, 30)
        s = build_system(pres, amb)
        cells = list(amb)
        A = rng.sample(cells, rng.randint(1, len(cells)))
        Bp = rng.sample(cells, rng.randint(0, len(cells)))
        B = rng.sample(Bp, rng.randint(0, len(Bp)))
        lhs = conditional_dim(s, s.vars_in(A), s.vars_in(B))
        rhs = conditional_dim(s, s.vars_in(A), s.vars_in(Bp))
        bad += lhs < rhs
    return Outcome(bad == 0, f"100 nested triples, {bad} violations")


@dataclass
class Criterion:
    number: int
    title: str
    limit: float
    check: Callable[[], Outcome]


CRITERIA = [
    Criterion(1, "Newton pentagon of the product system", 1, c1_newton_pentagon),
    Criterion(2, "Ledrappier non-expansive sets", 1, c2_ledrappier_geometry),
    Criterion(3, "directional entropy values", 1, c3_entropy_values),
    Criterion(4, "half-space estimator convergence", 60, c4_estimator_convergence),
    Criterion(5, "Abramov-Rokhlin residuals", 60, c5_abramov_rokhlin),
    Criterion(6, "rank count vs brute force", 120, c6_oracle_equivalence),
    Criterion(7, "higher-block invariance", 120, c7_presentation_invariance),
    Criterion(8, "disjointness certificates", 10, c8_certificates),
    Criterion(9, "lexicographic entropy signs", 300, c9_lex_signs),
    Criterion(10, "conditional-count submodularity", 60, c10_submodularity),
]

RESULTS: list[str] = []


def run_criterion(c: Criterion) -> tuple[bool, str]:
    t = time.perf_counter()
    try:
        out = c.check()
    except Exception as exc:  # a crash is a failure of that criterion only
        out = Outcome(False, f"error: {type(exc).__name__}: {exc}")
    dt = time.perf_counter() - t
    ok = out.ok and dt < c.limit
    timing = f"{dt:.2f}s/{c.limit:g}s"
    line = f"{'PASS' if ok else 'FAIL'} criterion {c.number:>2} {c.title} [{timing}]: {out.detail}"
    return ok, line


@pytest.mark.parametrize("crit", CRITERIA, ids=[f"c{c.number}" for c in CRITERIA])
def test_acceptance(crit):
    ok, line = run_criterion(crit)
    RESULTS.append(line)
    print(line)
    assert ok, line


if __name__ == "__main__":
    failed = 0
    for c in CRITERIA:
        ok, line = run_criterion(c)
        failed += not ok
        print(line, flush=True)
    print(f"{len(CRITERIA) - failed}/{len(CRITERIA)} criteria passed")
    sys.exit(1 if failed else 0)
