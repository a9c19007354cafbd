"""Checkable hypotheses and certificates for disjointness of principal systems.

Two certificate shapes are produced:

* ``PermTheorem``: every system is an irreducible principal Z^2-action of
  entropy rank one, and some ordering X_1, ..., X_n has
  N(X_j) minus the union of N(X_k), k > j, nonempty for every j.
* ``MainTheorem``: two prime actions of entropy co-rank one whose
  non-expansive geometries differ; the certificate carries a witness direction.

Only sufficient conditions are checked, so the verdicts are Disjoint or
Inconclusive, never "not disjoint".
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from .factor import DEFAULT_EFFORT, Irreducible, Reducible, irreducible_mod_p
from .laurent import LaurentPoly, is_monomial, parse_poly, render
from .polytope import (
    ConeComplex,
    DirectionGeometry,
    FiniteDirections,
    GeometryError,
    Vec,
    dot,
    geometry_contains,
    geometry_difference_witness,
    nonexpansive_from_poly,
    primitive,
)
from .shiftsys import (
    Presentation,
    PresentationError,
    Product,
    Recoded,
    base_principal,
    is_prime,
    principal,
)

MAX_PERMUTATION_SEARCH = 8


class DisjointnessError(ValueError):
    pass


@dataclass(frozen=True)
class Tri:
    """Yes / No / Unknown with the reason behind the answer."""

    value: str
    reason: str = ""

    def __post_init__(self):
        if self.value not in ("Yes", "No", "Unknown"):
            raise ValueError(f"bad tri-state value {self.value!r}")

    @property
    def yes(self) -> bool:
        return self.value == "Yes"

    def __str__(self) -> str:
        return f"{self.value} ({self.reason})" if self.reason else self.value


@dataclass(frozen=True)
class SystemClass:
    entropy_rank_class: str  # RankOne | CoRankOne | Other
    irreducible: Tri
    prime_action: Tri
    reason: str = ""
    dim: int = 0
    p: int | None = None
    f: LaurentPoly | None = None
    name: str = ""
    evidence: tuple[str, ...] = field(default=(), compare=False)

    @property
    def rank_one(self) -> bool:
        return self.entropy_rank_class == "RankOne"

    @property
    def corank_one(self) -> bool:
        # on Z^2 entropy rank one and co-rank one are the same condition
        return self.entropy_rank_class == "CoRankOne" or (self.rank_one and self.dim == 2)


@dataclass(frozen=True)
class DisjointnessCertificate:
    theorem: str  # PermTheorem | MainTheorem
    ordering: tuple[int, ...]  # 1-based positions in the input list
    witnesses: tuple[Vec, ...]
    hypothesis_log: tuple[SystemClass, ...]
    alternatives: tuple[tuple[str, Vec | None], ...] = ()


@dataclass(frozen=True)
class Disjoint:
    certificate: DisjointnessCertificate

    verdict = "Disjoint"


@dataclass(frozen=True)
class Inconclusive:
    reason: str
    hypothesis_log: tuple[SystemClass, ...] = ()

    verdict = "Inconclusive"


Verdict = Disjoint | Inconclusive


# -- classification -------------------------------------------------------------

def _factor_tri(f: LaurentPoly, p: int, effort_bound: int) -> tuple[Tri, tuple[str, ...]]:
    res = irreducible_mod_p(f, p, effort_bound)
    if isinstance(res, Irreducible):
        return Tri("Yes", f"{render(f)} irreducible mod {p}"), res.transcript
    if isinstance(res, Reducible):
        return Tri("No", f"{render(f)} = ({res.factor}) * ({res.cofactor}) mod {p}"), res.transcript
    return Tri("Unknown", res.reason), res.transcript


def classify(pres: Presentation, effort_bound: int = DEFAULT_EFFORT) -> SystemClass:
    """Entropy-rank class, irreducibility and primality of the action, each with its reason."""
    prov = pres.provenance
    if isinstance(prov, Product):
        nontrivial = 0
        for fac in prov.factors:
            try:
                _, g = base_principal(fac)
                nontrivial += not is_monomial(g)
            except PresentationError:
                nontrivial = -1
                break
        if nontrivial >= 2:
            prime = Tri("No", "direct sum of two nonzero modules is not of the form R_d/P")
        else:
            prime = Tri("Unknown", "product with trivial or non-principal factors")
        return SystemClass(
            "Other", Tri("Unknown", "not a principal system"), prime,
            reason="product: not principal", dim=pres.dim, name=pres.name,
        )
    try:
        p, f = base_principal(pres)
    except PresentationError:
        unk = Tri("Unknown", "not a principal system")
        return SystemClass("Other", unk, unk, reason="not principal", dim=pres.dim, name=pres.name)
    evidence: list[str] = []
    if isinstance(prov, Recoded):
        evidence.append(f"higher-block recoding (r={prov.radius}) of a principal system; classified through its base")
    if is_monomial(f):
        unk = Tri("Unknown", "monomial relation")
        return SystemClass("Other", unk, Tri("No", "R_d/(p, unit) is the zero module"),
                           reason="finite/zero-entropy", dim=pres.dim, p=p, f=f, name=pres.name,
                           evidence=tuple(evidence))
    prime, transcript = _factor_tri(f, p, effort_bound)
    evidence.extend(transcript)
    d = pres.dim
    if d == 1:
        return SystemClass("Other", Tri("Unknown", "d=1: finite system"), prime,
                           reason="finite/zero-entropy", dim=d, p=p, f=f, name=pres.name,
                           evidence=tuple(evidence))
    if d == 2:
        if prime.value == "Yes":
            irr = Tri("Yes", "d=2 principal, f irreducible and not a monomial: proper quotients are finite")
        elif prime.value == "No":
            irr = Tri("No", "f factors, so a proper factor module gives an infinite invariant subgroup")
        else:
            irr = Tri("Unknown", prime.reason)
        return SystemClass("RankOne", irr, prime, dim=d, p=p, f=f, name=pres.name, evidence=tuple(evidence))
    irr = Tri("Unknown", f"irreducibility is only decided for d=2 (d={d})")
    return SystemClass("CoRankOne", irr, prime, dim=d, p=p, f=f, name=pres.name, evidence=tuple(evidence))


def classify_all(systems: Sequence[Presentation], effort_bound: int = DEFAULT_EFFORT, workers: int = 1) -> list[SystemClass]:
    if workers <= 1:
        return [classify(s, effort_bound) for s in systems]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(lambda s: classify(s, effort_bound), systems))


def _label(i: int, sc: SystemClass) -> str:
    return f"system {i + 1}" + (f" ({sc.name})" if sc.name else "")


# -- Theorem for rank-one families -----------------------------------------------------

def _geometry(sc: SystemClass) -> DirectionGeometry:
    assert sc.f is not None
    return nonexpansive_from_poly(sc.f)


def _geometries(classes: Sequence[SystemClass]) -> list[DirectionGeometry] | str:
    out = []
    for i, sc in enumerate(classes):
        try:
            out.append(_geometry(sc))
        except GeometryError as exc:
            return f"{_label(i, sc)}: {exc}"
    return out


def chain_witnesses(geoms: Sequence[DirectionGeometry], ordering: Sequence[int]) -> list[Vec] | None:
    """Witness per step for the given 0-based ordering, or None if some step difference is empty."""
    out = []
    for j, a in enumerate(ordering):
        later = [geoms[k] for k in ordering[j + 1:]]
        ga = geoms[a]
        if isinstance(ga, FiniteDirections):
            cand = [v for v in ga.vectors if not any(geometry_contains(g, v) for g in later)]
            w = max(cand) if cand else None
        else:
            w = _cone_witness(ga, later)
        if w is None:
            return None
        out.append(w)
    return out


def _cone_witness(a, later) -> Vec | None:
    if not later:
        return max(a.rays()) if a.cones else None
    if len(later) == 1:
        return geometry_difference_witness(a, later[0])
    return geometry_difference_witness(a, ConeComplex(frozenset().union(*(g.cones for g in later))))


def _gate(classes: Sequence[SystemClass], need: str) -> str | None:
    for i, sc in enumerate(classes):
        if need == "rank1":
            if not sc.rank_one:
                return f"{_label(i, sc)} is not of entropy rank one on Z^2 ({sc.entropy_rank_class}: {sc.reason})"
            if not sc.irreducible.yes:
                return f"{_label(i, sc)}: irreducibility is {sc.irreducible}"
        else:
            if not sc.corank_one:
                return f"{_label(i, sc)} is not of entropy co-rank one ({sc.entropy_rank_class}: {sc.reason})"
            if not sc.prime_action.yes:
                return f"{_label(i, sc)}: prime action is {sc.prime_action}"
    return None


def disjoint_rank_one(systems: Sequence[Presentation], effort_bound: int = DEFAULT_EFFORT, workers: int = 1) -> Verdict:
    """Search all orderings for a witness chain; Disjoint with a certificate or Inconclusive."""
    n = len(systems)
    if n < 2:
        raise DisjointnessError("need at least two systems")
    if n > MAX_PERMUTATION_SEARCH:
        raise DisjointnessError(f"permutation search is limited to {MAX_PERMUTATION_SEARCH} systems (got {n})")
    classes = tuple(classify_all(systems, effort_bound, workers))
    bad = _gate(classes, "rank1")
    if bad:
        return Inconclusive(bad, classes)
    geoms = _geometries(classes)
    if isinstance(geoms, str):
        return Inconclusive(geoms, classes)
    for perm in itertools.permutations(range(n)):
        w = chain_witnesses(geoms, perm)
        if w is not None:
            cert = DisjointnessCertificate("PermTheorem", tuple(i + 1 for i in perm), tuple(w), classes)
            return Disjoint(cert)
    return Inconclusive("no ordering has all step differences nonempty", classes)


def certify_ordering(systems: Sequence[Presentation], ordering: Sequence[int], effort_bound: int = DEFAULT_EFFORT) -> Verdict:
    """Check one given (1-based) ordering without searching; usable for any family size."""
    if sorted(ordering) != list(range(1, len(systems) + 1)):
        raise DisjointnessError("ordering is not a permutation of the inputs")
    classes = tuple(classify_all(systems, effort_bound))
    bad = _gate(classes, "rank1")
    if bad:
        return Inconclusive(bad, classes)
    geoms = _geometries(classes)
    if isinstance(geoms, str):
        return Inconclusive(geoms, classes)
    w = chain_witnesses(geoms, [i - 1 for i in ordering])
    if w is None:
        return Inconclusive("the given ordering has an empty step difference", classes)
    return Disjoint(DisjointnessCertificate("PermTheorem", tuple(ordering), tuple(w), classes))


def disjoint_corank_one(y: Presentation, z: Presentation, effort_bound: int = DEFAULT_EFFORT) -> Verdict:
    """Two prime co-rank-one actions with different non-expansive geometry are disjoint."""
    if y.dim != z.dim:
        raise DisjointnessError(f"dimension mismatch ({y.dim} vs {z.dim})")
    classes = tuple(classify_all([y, z], effort_bound))
    bad = _gate(classes, "corank1")
    if bad:
        return Inconclusive(bad, classes)
    geoms = _geometries(classes)
    if isinstance(geoms, str):
        return Inconclusive(geoms, classes)
    gy, gz = geoms
    w_yz = geometry_difference_witness(gy, gz)
    w_zy = geometry_difference_witness(gz, gy)
    alts = (("N(Y) - N(Z)", w_yz), ("N(Z) - N(Y)", w_zy))
    found = [(w, order) for w, order in ((w_yz, (1, 2)), (w_zy, (2, 1))) if w is not None]
    if not found:
        return Inconclusive("non-expansive geometries agree on every candidate direction", classes)
    w, order = max(found)
    return Disjoint(DisjointnessCertificate("MainTheorem", order, (w,), classes, alts))


def disjoint_auto(systems: Sequence[Presentation], effort_bound: int = DEFAULT_EFFORT, workers: int = 1) -> Verdict:
    """rank1 on Z^2 families, otherwise the co-rank-one pair test."""
    if len(systems) < 2:
        raise DisjointnessError("need at least two systems")
    if all(s.dim == 2 for s in systems):
        return disjoint_rank_one(systems, effort_bound, workers)
    if len(systems) != 2:
        raise DisjointnessError("the co-rank-one test compares exactly two systems")
    return disjoint_corank_one(systems[0], systems[1], effort_bound)


# -- independent recheck ------------------------------------------------------------

def face_is_nontrivial(f: LaurentPoly, w: Sequence[int]) -> bool:
    """True when the support points maximising w.x are not a single point.

    This is the face-of-the-support test for w in N(f): edge normals in d=2,
    edge and facet normal cones in d=3.  It touches neither hulls nor cones.
    """
    vals = [dot(e, w) for e, _ in f]
    top = max(vals)
    return vals.count(top) >= 2


@dataclass(frozen=True)
class RecheckReport:
    ok: bool
    lines: tuple[str, ...]


def recheck_certificate(cert: DisjointnessCertificate) -> RecheckReport:
    """Re-validate a certificate from its recorded polynomials only."""
    lines: list[str] = []
    ok = True
    n = len(cert.hypothesis_log)
    if sorted(cert.ordering) != list(range(1, n + 1)):
        return RecheckReport(False, ("ordering is not a permutation of the systems",))
    for i, sc in enumerate(cert.hypothesis_log):
        if sc.f is None or sc.p is None:
            return RecheckReport(False, (f"{_label(i, sc)} has no recorded polynomial",))
        if cert.theorem == "PermTheorem":
            good = sc.rank_one and sc.irreducible.yes and sc.dim == 2
        else:
            good = sc.corank_one and sc.prime_action.yes
        lines.append(f"{_label(i, sc)}: hypotheses {'ok' if good else 'FAIL'}")
        ok &= good
        # irreducibility claims are re-derived, not trusted
        if sc.prime_action.yes:
            again = irreducible_mod_p(sc.f, sc.p)
            same = isinstance(again, Irreducible)
            lines.append(f"{_label(i, sc)}: irreducible mod {sc.p} re-derived: {'ok' if same else 'FAIL'}")
            ok &= same
    if cert.theorem == "PermTheorem":
        steps = list(zip(cert.ordering, cert.witnesses))
        if len(cert.witnesses) != n:
            return RecheckReport(False, tuple(lines) + ("witness count does not match the ordering",))
    else:
        steps = [(cert.ordering[0], cert.witnesses[0])]
    for j, (pos, w) in enumerate(steps):
        if primitive(w) != tuple(w):
            lines.append(f"witness {w} is not primitive: FAIL")
            ok = False
            continue
        own = face_is_nontrivial(cert.hypothesis_log[pos - 1].f, w)
        later = cert.ordering[j + 1:]
        hits = [k for k in later if face_is_nontrivial(cert.hypothesis_log[k - 1].f, w)]
        good = own and not hits
        lines.append(
            f"step {j + 1}: w={w} in N(system {pos}): {own}; in later systems {list(later)}: {hits or 'none'}: "
            + ("ok" if good else "FAIL")
        )
        ok &= good
    return RecheckReport(ok, tuple(lines))


# -- families realising distinct Newton triangles -----------------------------------------

def corollary_family(p: int, m: int) -> list[Presentation]:
    """m principal Z^2 systems f_k = 1 + u1 + u1^k u2 (k = 0..m-1) over F_p.

    Each triangle (0,0), (1,0), (k,1) has primitive edges, so f_k is
    irreducible, and its normal (1, 1-k) belongs to no other member.
    """
    if not is_prime(p):
        raise DisjointnessError(f"{p} is not prime")
    if m < 1:
        raise DisjointnessError("family size must be positive")
    out = []
    for k in range(m):
        f = LaurentPoly.from_terms(2, p, {(0, 0): 1, (1, 0): 1, (k, 1): 1})
        out.append(principal(p, f, name=f"f{k}"))
    return out


def certify_family(systems: Sequence[Presentation], effort_bound: int = DEFAULT_EFFORT) -> Verdict:
    """Certificate for a family: exhaustive search up to the limit, input order beyond it."""
    if len(systems) <= MAX_PERMUTATION_SEARCH:
        return disjoint_rank_one(systems, effort_bound)
    return certify_ordering(systems, list(range(1, len(systems) + 1)), effort_bound)


# -- text form ----------------------------------------------------------------------

def _vec(v) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


def _parse_vec(s: str) -> Vec:
    s = s.strip()
    if not (s.startswith("(") and s.endswith(")")):
        raise ValueError(f"bad vector {s!r}")
    return tuple(int(x) for x in s[1:-1].split(","))


def _tri_text(t: Tri) -> str:
    return f"{t.value}|{t.reason}"


def _tri_parse(s: str) -> Tri:
    v, _, r = s.partition("|")
    return Tri(v.strip(), r.strip())


def certificate_text(cert: DisjointnessCertificate) -> str:
    """Line-based ``key: value`` form; parse_certificate reads it back."""
    out = [
        "certificate: disjointness",
        f"theorem: {cert.theorem}",
        "ordering: " + " ".join(str(i) for i in cert.ordering),
        "witnesses: " + " ".join(_vec(w) for w in cert.witnesses),
    ]
    for label, w in cert.alternatives:
        out.append(f"difference: {label} = {_vec(w) if w is not None else 'empty'}")
    for i, sc in enumerate(cert.hypothesis_log, 1):
        out.append(f"system: {i}")
        out.append(f"  name: {sc.name}")
        out.append(f"  dim: {sc.dim}")
        out.append(f"  modulus: {sc.p}")
        out.append(f"  relation: {render(sc.f) if sc.f is not None else ''}")
        out.append(f"  class: {sc.entropy_rank_class}")
        out.append(f"  irreducible: {_tri_text(sc.irreducible)}")
        out.append(f"  prime: {_tri_text(sc.prime_action)}")
        for e in sc.evidence:
            out.append(f"  evidence: {e}")
    return "\n".join(out) + "\n"


def parse_certificate(text: str) -> DisjointnessCertificate:
    head: dict[str, str] = {}
    alts: list[tuple[str, Vec | None]] = []
    systems: list[dict] = []
    for raw in text.splitlines():
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        key, sep, val = raw.strip().partition(":")
        if not sep:
            raise ValueError(f"malformed certificate line {raw!r}")
        val = val.strip()
        if raw.startswith("  "):
            if not systems:
                raise ValueError("system field before any system block")
            if key == "evidence":
                systems[-1].setdefault("evidence", []).append(val)
            else:
                systems[-1][key] = val
        elif key == "system":
            systems.append({})
        elif key == "difference":
            label, _, w = val.rpartition("=")
            alts.append((label.strip(), None if w.strip() == "empty" else _parse_vec(w)))
        else:
            head[key] = val
    if head.get("certificate") != "disjointness":
        raise ValueError("not a disjointness certificate")
    classes = []
    for s in systems:
        dim, p = int(s["dim"]), int(s["modulus"])
        f = parse_poly(s["relation"], dim, p) if s.get("relation") else None
        classes.append(SystemClass(
            s["class"], _tri_parse(s["irreducible"]), _tri_parse(s["prime"]),
            dim=dim, p=p, f=f, name=s.get("name", ""), evidence=tuple(s.get("evidence", ())),
        ))
    wit = tuple(_parse_vec(w) for w in head.get("witnesses", "").split())
    return DisjointnessCertificate(
        head["theorem"],
        tuple(int(x) for x in head.get("ordering", "").split()),
        wit,
        tuple(classes),
        tuple(alts),
    )
