"""Geometry, entropy and disjointness of algebraic Z^d-actions defined over F_p."""

from .disjoint import (
    Disjoint,
    DisjointnessCertificate,
    Inconclusive,
    SystemClass,
    Tri,
    certificate_text,
    classify,
    corollary_family,
    disjoint_corank_one,
    disjoint_rank_one,
    parse_certificate,
    recheck_certificate,
)
from .entropy import (
    EstimateSeries,
    estimate_directional_entropy,
    estimate_halfspace_entropy,
    haar_directional_entropy,
    haar_halfspace_entropy,
    lex_halfspace_entropy_estimate,
    pi_Y0_dim,
    verify_abramov_rokhlin,
)
from .factor import Irreducible, Reducible, Unknown, irreducible_mod_p
from .fpsolve import brute_force_count, build_system, codes, conditional_dim, kernel_dim, projection_dim
from .laurent import LaurentPoly, is_monomial, mul, parse_poly, render, support
from .polytope import (
    geometry_contains,
    geometry_difference_witness,
    minkowski_sum,
    newton_polytope,
    nonexpansive_set,
)
from .shiftsys import (
    Presentation,
    Region,
    higher_block,
    principal,
    product,
    region_box,
    region_lex,
    region_line,
    region_strip,
)
from .sysfile import format_system, load_system, parse_system
from .values import EntropyValue

__version__ = "0.1.0"
