import itertools
import random

import pytest

from entgeom.disjoint import (
    MAX_PERMUTATION_SEARCH,
    Disjoint,
    DisjointnessCertificate,
    DisjointnessError,
    Inconclusive,
    certificate_text,
    certify_family,
    certify_ordering,
    classify,
    corollary_family,
    disjoint_auto,
    disjoint_corank_one,
    disjoint_rank_one,
    face_is_nontrivial,
    parse_certificate,
    recheck_certificate,
)
from entgeom.entropy import haar_directional_entropy
from entgeom.laurent import LaurentPoly, parse_poly
from entgeom.polytope import dot
from entgeom.shiftsys import higher_block, principal, product


@pytest.fixture(scope="module")
def x3():
    return principal(2, parse_poly("1 + u1 + u1u2", 2, 2), "X3")


def test_classify_examples(x1, x12, f1):
    c = classify(x1)
    assert c.entropy_rank_class == "RankOne" and c.irreducible.yes and c.prime_action.yes
    assert c.corank_one
    c = classify(x12)
    assert c.entropy_rank_class == "Other" and c.prime_action.value == "No"
    c = classify(f1)
    assert c.entropy_rank_class == "CoRankOne" and c.prime_action.yes
    assert c.irreducible.value == "Unknown"


def test_classify_degenerate_and_reducible():
    mono = principal(2, parse_poly("u1u2^2", 2, 2))
    c = classify(mono)
    assert c.entropy_rank_class == "Other" and c.reason == "finite/zero-entropy"
    red = principal(2, parse_poly("1 + u1 + u2 + u1u2", 2, 2))
    c = classify(red)
    assert c.entropy_rank_class == "RankOne" and c.irreducible.value == "No" and c.prime_action.value == "No"
    one_d = principal(2, parse_poly("1 + u1", 1, 2))
    assert classify(one_d).entropy_rank_class == "Other"


def test_classify_recoded(x1):
    c = classify(higher_block(x1, 1))
    assert c.rank_one and c.irreducible.yes
    assert any("recoding" in e for e in c.evidence)


def test_rank_one_ledrappier_pair(x1, x2):
    res = disjoint_rank_one([x1, x2])
    assert isinstance(res, Disjoint)
    cert = res.certificate
    assert cert.theorem == "PermTheorem" and cert.ordering == (1, 2)
    assert cert.witnesses[0] == (1, 1)
    assert cert.witnesses[1] in {(0, 1), (-1, 0), (1, -1)}


def test_rank_one_identical_is_inconclusive(x1):
    res = disjoint_rank_one([x1, x1])
    assert isinstance(res, Inconclusive)
    assert "no ordering" in res.reason


def test_rank_one_triple(x1, x2, x3):
    res = disjoint_rank_one([x1, x2, x3])
    assert isinstance(res, Disjoint)
    assert recheck_certificate(res.certificate).ok


def test_rank_one_errors(x1):
    with pytest.raises(DisjointnessError):
        disjoint_rank_one([x1])
    fam = corollary_family(2, MAX_PERMUTATION_SEARCH + 1)
    with pytest.raises(DisjointnessError):
        disjoint_rank_one(fam)


def test_corank_one_example_pair(f1, f2):
    res = disjoint_corank_one(f1, f2)
    assert isinstance(res, Disjoint)
    assert res.certificate.theorem == "MainTheorem"
    assert res.certificate.witnesses == ((1, 0, 0),)
    assert recheck_certificate(res.certificate).ok


def test_corank_one_equal_and_d2(f1, x1, x2):
    assert isinstance(disjoint_corank_one(f1, f1), Inconclusive)
    res = disjoint_corank_one(x1, x2)
    assert isinstance(res, Disjoint) and res.certificate.witnesses == ((1, 1),)
    with pytest.raises(DisjointnessError):
        disjoint_corank_one(f1, x1)


def test_auto_dispatch(x1, x2, f1, f2):
    assert disjoint_auto([x1, x2]).certificate.theorem == "PermTheorem"
    assert disjoint_auto([f1, f2]).certificate.theorem == "MainTheorem"


def test_order_insensitivity(x1, x2, x3):
    for fam in ([x1, x2, x3], [x1, x1, x2], [x2, x3]):
        verdicts = {type(disjoint_rank_one(list(p))) for p in itertools.permutations(fam)}
        assert len(verdicts) == 1


def test_soundness_gate(x1, x12):
    red = principal(2, parse_poly("1 + u1 + u2 + u1u2", 2, 2))
    for fam in ([x1, red], [x1, x12], [x1, principal(2, parse_poly("u1", 2, 2))]):
        res = disjoint_rank_one(fam)
        assert isinstance(res, Inconclusive)
    # an effort bound too small to decide irreducibility leaves Unknown, never Disjoint
    res = disjoint_rank_one([x1, principal(2, parse_poly("1 + u1 + u1^3u2", 2, 2))], effort_bound=1)
    assert isinstance(res, Inconclusive)


def test_soundness_gate_random():
    rng = random.Random(5)
    for _ in range(30):
        fam = []
        for _ in range(2):
            pts = {(rng.randint(0, 2), rng.randint(0, 2)) for _ in range(rng.randint(2, 4))}
            fam.append(principal(2, LaurentPoly.from_terms(2, 2, {e: 1 for e in pts})))
        res = disjoint_rank_one(fam)
        if isinstance(res, Disjoint):
            for sc in res.certificate.hypothesis_log:
                assert sc.rank_one and sc.irreducible.yes and sc.prime_action.yes
            assert recheck_certificate(res.certificate).ok


def test_certificate_round_trip(x1, x2, f1, f2):
    for res in (disjoint_rank_one([x1, x2]), disjoint_corank_one(f1, f2)):
        text = certificate_text(res.certificate)
        back = parse_certificate(text)
        assert back.theorem == res.certificate.theorem
        assert back.ordering == res.certificate.ordering
        assert back.witnesses == res.certificate.witnesses
        assert back.hypothesis_log == res.certificate.hypothesis_log
        assert certificate_text(back) == text
        assert recheck_certificate(back).ok


def test_tampered_certificate_fails(x1, x2):
    cert = disjoint_rank_one([x1, x2]).certificate
    bad = DisjointnessCertificate(cert.theorem, cert.ordering, ((0, 1), cert.witnesses[1]), cert.hypothesis_log)
    assert not recheck_certificate(bad).ok
    bad = DisjointnessCertificate(cert.theorem, (1, 1), cert.witnesses, cert.hypothesis_log)
    assert not recheck_certificate(bad).ok
    text = certificate_text(cert).replace("relation: u2^-1 + 1 + u1", "relation: 1 + u1 + u2")
    assert not recheck_certificate(parse_certificate(text)).ok


def test_face_test():
    f = parse_poly("1 + u1 + u2", 2, 2)
    assert face_is_nontrivial(f, (1, 1)) and face_is_nontrivial(f, (-1, 0))
    assert not face_is_nontrivial(f, (0, 1)) and not face_is_nontrivial(f, (1, 2))


def test_corollary_family():
    for m in (2, 5, 8):
        fam = corollary_family(2, m)
        res = certify_family(fam)
        assert isinstance(res, Disjoint) and recheck_certificate(res.certificate).ok
    fam = corollary_family(3, 10)
    res = certify_family(fam)
    assert isinstance(res, Disjoint) and res.certificate.ordering == tuple(range(1, 11))
    assert recheck_certificate(res.certificate).ok
    with pytest.raises(DisjointnessError):
        corollary_family(4, 3)


def test_certify_ordering(x1, x2):
    assert isinstance(certify_ordering([x1, x2], [1, 2]), Disjoint)
    with pytest.raises(DisjointnessError):
        certify_ordering([x1, x2], [1, 1])


def test_entropy_cross_check(x1, x2, x3):
    """For each certified pair the product's directional entropy is the sum of the factors'."""
    pairs = [(x1, x2), (x1, x3), (x2, x3)] + [tuple(corollary_family(2, 3)[i] for i in ij) for ij in ((0, 1), (1, 2))]
    for y, z in pairs:
        res = disjoint_rank_one([y, z])
        assert isinstance(res, Disjoint)
        w = res.certificate.witnesses[0]
        for n in [(1, 0), (0, 1), (1, 1), (2, 1), (1, -1), (-1, 2)]:
            if dot(w, n) <= 0:
                continue
            total = haar_directional_entropy(product([y, z]), n)
            assert total == haar_directional_entropy(y, n) + haar_directional_entropy(z, n)
            assert total.coefficient > 0
