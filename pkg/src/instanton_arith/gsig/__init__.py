"""Equivariant G-signature arithmetic for cyclic actions bounded by Sigma(2,3,5)."""
from .congruences import (CongruenceReport, TwistedReport, congruence_residues, expected_constants,
                          lefschetz_route_agreement, twisted_congruence_residue, twisted_rhs)
from .data import (E8_LAMBDA, E8_POINTS, E8_SPHERE, ExtensionData, FixedPointDatum, FixedSphereDatum,
                   canonical_classes, canonical_pair, e8_plumbing, example_p7, load_points)
from .search import search_extensions, search_space_size
from .terms import (IdentityVerdict, eta_plumbing, gsig_identity_check, lefschetz_point_term,
                    lefschetz_sphere_term, lefschetz_sum, series_expand_term)
from .theorem_b import ProofTrace, prove_theorem_b, theorem_a_filter

__all__ = [
    "CongruenceReport", "TwistedReport", "congruence_residues", "expected_constants",
    "lefschetz_route_agreement", "twisted_congruence_residue", "twisted_rhs",
    "E8_LAMBDA", "E8_POINTS", "E8_SPHERE", "ExtensionData", "FixedPointDatum", "FixedSphereDatum",
    "canonical_classes", "canonical_pair", "e8_plumbing", "example_p7", "load_points",
    "search_extensions", "search_space_size",
    "IdentityVerdict", "eta_plumbing", "gsig_identity_check", "lefschetz_point_term",
    "lefschetz_sphere_term", "lefschetz_sum", "series_expand_term",
    "ProofTrace", "prove_theorem_b", "theorem_a_filter",
]
