"""Congruences mod p extracted from the (t-1)-adic expansion of the G-signature identity.

Multiplying the identity L(X) = L(X~) by (t-1)^2 and comparing Taylor
coefficients at orders 0, 2 and 4 gives three congruences on the rotation data
of X.  The constants on the right are computed from the reference extension
X~ with the series engine, never typed in.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from ..errors import ArithDataError
from ..exactnum import (CyclotomicElement, ResidueModP, TruncatedSeries, format_rational,
                        residue_of_rational)
from .data import ExtensionData, FixedPointDatum, e8_plumbing
from .terms import lefschetz_sum, series_expand_term

__all__ = [
    "ORDERS",
    "NORMALIZERS",
    "point_numerators",
    "expected_constants",
    "CongruenceReport",
    "congruence_residues",
    "TwistedReport",
    "twisted_rhs",
    "twisted_congruence_residue",
    "field_route_coefficients",
    "series_route_coefficients",
    "lefschetz_route_agreement",
]

# Taylor orders used, and the factor multiplying the rotation-number sum at
# each order in the expansion of a point term.
ORDERS = (0, 2, 4)
NORMALIZERS = (Fraction(4), Fraction(1, 3), Fraction(-1, 180))


def point_numerators(a: int, b: int) -> tuple[Fraction, Fraction, Fraction]:
    """1/(ab), (a^2+b^2+1)/(ab), (a^4+b^4-5a^2b^2+3)/(ab)."""
    ab = Fraction(a * b)
    return (1 / ab, (a * a + b * b + 1) / ab, (a ** 4 + b ** 4 - 5 * a * a * b * b + 3) / ab)


def _ref_side_coefficients(ext: ExtensionData, reference: ExtensionData) -> list[Fraction]:
    """Coefficients of (t-1)^2 [L(X~) - sphere terms of X] at ORDERS."""
    K = max(ORDERS)
    total = TruncatedSeries.constant(0, K)
    for d in reference.points:
        total = total + series_expand_term(FixedPointDatum(d.a, d.b), K)
    for s in reference.spheres:
        total = total + series_expand_term(s, K)
    for s in ext.spheres:
        total = total - series_expand_term(s, K)
    return [total.coefficient(k) for k in ORDERS]


def expected_constants(ext: ExtensionData, reference: Optional[ExtensionData] = None) -> tuple[Fraction, ...]:
    """Exact rationals E_k that the point sums of ``ext`` must match mod p."""
    reference = reference or e8_plumbing(ext.p)
    coeffs = _ref_side_coefficients(ext, reference)
    return tuple(c / n for c, n in zip(coeffs, NORMALIZERS))


@dataclass(frozen=True)
class CongruenceReport:
    p: int
    sums: tuple[Fraction, Fraction, Fraction]
    expected: tuple[Fraction, Fraction, Fraction]
    residues: tuple[ResidueModP, ResidueModP, ResidueModP]
    expected_residues: tuple[ResidueModP, ResidueModP, ResidueModP]
    twisted: Optional["TwistedReport"] = None
    trace: tuple = field(default=())

    @property
    def verdicts(self) -> tuple[bool, bool, bool]:
        return tuple(r == e for r, e in zip(self.residues, self.expected_residues))

    @property
    def all_hold(self) -> bool:
        ok = all(self.verdicts)
        if self.twisted is not None:
            ok = ok and self.twisted.holds
        return ok

    def to_json(self) -> dict:
        out = {
            "p": self.p,
            "congruences": [
                {"sum": format_rational(s), "residue": r.value, "expected": format_rational(e),
                 "expected_residue": er.value, "holds": v}
                for s, e, r, er, v in zip(self.sums, self.expected, self.residues, self.expected_residues,
                                          self.verdicts)
            ],
        }
        if self.twisted is not None:
            out["twisted"] = self.twisted.to_json()
        return out


def congruence_residues(ext: ExtensionData, reference: Optional[ExtensionData] = None,
                        twisted: bool = False) -> CongruenceReport:
    p = ext.p
    reference = reference or e8_plumbing(p)
    if reference.p != p:
        raise ArithDataError("extension and reference live at different primes", code="modulus-mismatch",
                             data=[p, reference.p])
    sums = [Fraction(0)] * 3
    for d in ext.points:
        for i, v in enumerate(point_numerators(d.a, d.b)):
            sums[i] += v
    expected = expected_constants(ext, reference)
    residues = tuple(residue_of_rational(s, p) for s in sums)
    exp_res = tuple(residue_of_rational(e, p) for e in expected)
    tw = twisted_congruence_residue(ext, reference) if twisted else None
    return CongruenceReport(p, tuple(sums), expected, residues, exp_res, tw)


# ---------------------------------------------------------------------------
# twisted relation


@dataclass(frozen=True)
class TwistedReport:
    p: int
    lhs: Fraction
    rhs: Fraction
    lhs_residue: ResidueModP
    rhs_residue: ResidueModP

    @property
    def holds(self) -> bool:
        return self.lhs_residue == self.rhs_residue

    def to_json(self) -> dict:
        return {"lhs": format_rational(self.lhs), "rhs": format_rational(self.rhs),
                "lhs_residue": self.lhs_residue.value, "rhs_residue": self.rhs_residue.value,
                "holds": self.holds}


def _lambda_part(datum, K: int = 2) -> Fraction:
    """Order-2 coefficient of the twisted term minus twice the untwisted one."""
    tw = series_expand_term(datum, K, twisted=True).coefficient(2)
    un = series_expand_term(datum, K).coefficient(2)
    return tw - 2 * un


def twisted_rhs(ext: ExtensionData, reference: Optional[ExtensionData] = None) -> Fraction:
    """4 sum lam~^2/(a~b~) plus the sphere contributions, both sides' spheres moved right."""
    reference = reference or e8_plumbing(ext.p)
    total = Fraction(0)
    for d in reference.points:
        total += _lambda_part(d)
    for s in reference.spheres:
        total += _lambda_part(s)
    for s in ext.spheres:
        total -= _lambda_part(s)
    return total


def twisted_congruence_residue(ext: ExtensionData, reference: Optional[ExtensionData] = None) -> TwistedReport:
    """4 sum lam_i^2/(a_i b_i) against the reference side, mod p."""
    p = ext.p
    reference = reference or e8_plumbing(p)
    missing = [d.to_json() for d in ext.points if d.lam is None]
    missing += [d.to_json() for d in reference.points if d.lam is None]
    missing += [s.to_json() for s in list(reference.spheres) + list(ext.spheres) if s.lam is None]
    if missing:
        raise ArithDataError("lift weights required", code="missing-lift-weight", data=missing)
    lhs = sum((4 * d.lam ** 2 / (d.a * d.b) for d in ext.points), Fraction(0))
    rhs = twisted_rhs(ext, reference)
    return TwistedReport(p, lhs, rhs, residue_of_rational(lhs, p), residue_of_rational(rhs, p))


# ---------------------------------------------------------------------------
# the second route: expand the exact field element itself


def field_route_coefficients(element: CyclotomicElement, K: int) -> list[ResidueModP]:
    """Taylor coefficients mod p of (t-1)^2 * element, lifted to Z[t] from Q(zeta_p).

    The lift is ambiguous by multiples of 1 + t + ... + t^{p-1}, which only
    moves coefficients of order >= p - 1; ``K`` must stay below that.
    """
    p = element.order
    if K > p - 2:
        raise ArithDataError(f"order {K} is beyond the lift-independent range for p={p}",
                             code="beyond-precision", data=K)
    u = CyclotomicElement.zeta_power(p, 1) - 1
    lifted = (element * u * u).lift()
    shifted = lifted.taylor_shift()
    coeffs = list(shifted.coeffs) + [Fraction(0)] * (K + 1)
    return [residue_of_rational(c, p) for c in coeffs[:K + 1]]


def series_route_coefficients(ext: ExtensionData, K: int, twisted: bool = False) -> list[ResidueModP]:
    """Same coefficients, summed from the per-term series."""
    total = TruncatedSeries.constant(0, K)
    for d in ext.points:
        total = total + series_expand_term(d, K, twisted)
    for s in ext.spheres:
        total = total + series_expand_term(s, K, twisted)
    return [residue_of_rational(total.coefficient(k), ext.p) for k in range(K + 1)]


def lefschetz_route_agreement(ext: ExtensionData, K: int = 4, twisted: bool = False) -> bool:
    return field_route_coefficients(lefschetz_sum(ext, twisted), K) == series_route_coefficients(ext, K, twisted)
