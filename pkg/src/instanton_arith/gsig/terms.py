"""Lefschetz fixed-point contributions, exactly in Q(zeta_p) and as (t-1)-series."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

from ..errors import ArithDataError
from ..exactnum import CyclotomicElement, QPolynomial, TruncatedSeries, series_of_rational_function
from .data import (E8_POINTS, E8_SPHERE, ExtensionData, FixedPointDatum, FixedSphereDatum,
                   check_gsig_prime)

__all__ = [
    "lefschetz_point_term",
    "lefschetz_sphere_term",
    "eta_plumbing",
    "lefschetz_sum",
    "gsig_identity_check",
    "IdentityVerdict",
    "series_expand_term",
]


@lru_cache(maxsize=None)
def _inv_zeta_minus_one(p: int, j: int) -> CyclotomicElement:
    # For y of order p: p/(y - 1) = sum_k k y^k.
    j %= p
    if j == 0:
        raise ArithDataError("division by zero in cyclotomic field", code="division-by-zero", data=[p, j])
    return CyclotomicElement.from_group_ring(p, {j * k: Fraction(k, p) for k in range(1, p)})


@lru_cache(maxsize=None)
def _coth_factor(p: int, a: int) -> CyclotomicElement:
    """(t^a + 1)/(t^a - 1) at t = zeta_p."""
    return (CyclotomicElement.zeta_power(p, a) + 1) * _inv_zeta_minus_one(p, a)


@lru_cache(maxsize=None)
def _twist_factor(p: int, lam_res: int) -> CyclotomicElement:
    return CyclotomicElement.zeta_power(p, lam_res) + CyclotomicElement.zeta_power(p, -lam_res)


def lefschetz_point_term(d: FixedPointDatum, p: int, twisted: bool = False) -> CyclotomicElement:
    if d.a % p == 0 or d.b % p == 0:
        raise ArithDataError(f"degenerate rotation pair ({d.a}, {d.b}) mod {p}",
                             code="degenerate-rotation-pair", data=[d.a, d.b])
    term = _coth_factor(p, d.a % p) * _coth_factor(p, d.b % p)
    if twisted:
        term = term * _twist_factor(p, d.lam_residue(p).value)
    return term


def lefschetz_sphere_term(s: FixedSphereDatum, p: int, twisted: bool = False) -> CyclotomicElement:
    """-4 alpha t^c / (t^c - 1)^2, times t^lam + t^-lam when twisted."""
    if s.c % p == 0:
        raise ArithDataError("sphere fixed fiberwise (c = 0) is not supported", code="degenerate-sphere",
                             data=s.to_json())
    inv = _inv_zeta_minus_one(p, s.c)
    term = CyclotomicElement.zeta_power(p, s.c) * inv * inv * (-4 * s.alpha)
    if twisted:
        if s.lam is None:
            raise ArithDataError("lift weights required", code="missing-lift-weight", data=s.to_json())
        from ..exactnum import residue_of_rational

        term = term * _twist_factor(p, residue_of_rational(s.lam, p).value)
    return term


def lefschetz_sum(ext: ExtensionData, twisted: bool = False) -> CyclotomicElement:
    total = CyclotomicElement.zero(ext.p)
    for d in ext.points:
        total = total + lefschetz_point_term(d, ext.p, twisted)
    for s in ext.spheres:
        total = total + lefschetz_sphere_term(s, ext.p, twisted)
    return total


@lru_cache(maxsize=None)
def eta_plumbing(p: int) -> CyclotomicElement:
    """Equivariant eta invariant of Sigma(2,3,5) read off the E8 plumbing."""
    check_gsig_prime(p)
    total = CyclotomicElement.scalar(p, 8)
    for a, b in E8_POINTS:
        total = total + lefschetz_point_term(FixedPointDatum(a, b), p)
    alpha, c = E8_SPHERE
    return total + lefschetz_sphere_term(FixedSphereDatum(alpha, c), p)


@dataclass(frozen=True)
class IdentityVerdict:
    holds: bool
    residual: CyclotomicElement  # L - eta - signature; zero exactly when the identity holds
    generators: tuple[int, ...] = (1,)

    def to_json(self) -> dict:
        return {"holds": self.holds, "residual": self.residual.to_json(), "generators": list(self.generators)}


def gsig_identity_check(ext: ExtensionData, conjugates: bool = False) -> IdentityVerdict:
    """Whether sum of Lefschetz terms - eta == signature, exactly at t = zeta_p.

    With ``conjugates`` the residual is also pushed through every Galois
    automorphism; for a residual in Q(zeta_p) this is automatic, so the flag
    only serves as a self-check.
    """
    residual = lefschetz_sum(ext) - eta_plumbing(ext.p) - ext.signature
    gens = (1,)
    holds = residual.is_zero()
    if conjugates:
        gens = tuple(range(1, ext.p))
        holds = all(residual.galois(g).is_zero() for g in gens)
    return IdentityVerdict(holds, residual, gens)


# ---------------------------------------------------------------------------
# series about t = 1, with the double pole cleared

_U2 = QPolynomial([1, -2, 1])  # (t - 1)^2


def _coth_poly(a: int) -> tuple[QPolynomial, QPolynomial, int]:
    """Numerator, denominator and sign with (t^a + 1)/(t^a - 1) = sign * num/den."""
    m = abs(a)
    num = QPolynomial.monomial(m) + 1
    den = QPolynomial.monomial(m) - 1
    return num, den, (1 if a > 0 else -1)


def _twist_series(lam: Fraction, K: int) -> TruncatedSeries:
    return TruncatedSeries.t_power(lam, K) + TruncatedSeries.t_power(-lam, K)


@lru_cache(maxsize=4096)
def series_expand_term(datum: Union[FixedPointDatum, FixedSphereDatum], K: int,
                       twisted: bool = False) -> TruncatedSeries:
    """(t-1)^2 times the Lefschetz term, expanded about t = 1 to order K.

    Integer representatives are used as given; coefficients read mod p depend
    only on their residues.
    """
    if K < 0:
        raise ArithDataError("expansion order must be non-negative", code="invalid-order", data=K)
    if isinstance(datum, FixedPointDatum):
        if datum.a == 0 or datum.b == 0:
            raise ArithDataError("degenerate rotation pair", code="degenerate-rotation-pair",
                                 data=[datum.a, datum.b])
        na, da, sa = _coth_poly(datum.a)
        nb, db, sb = _coth_poly(datum.b)
        s = series_of_rational_function(na * nb * _U2, da * db, K) * (sa * sb)
        lam = datum.lam
    elif isinstance(datum, FixedSphereDatum):
        if datum.c == 0:
            raise ArithDataError("sphere fixed fiberwise (c = 0) is not supported", code="degenerate-sphere")
        m = abs(datum.c)
        den = (QPolynomial.monomial(m) - 1) ** 2
        s = series_of_rational_function(QPolynomial.monomial(m) * _U2, den, K) * (-4 * datum.alpha)
        lam = datum.lam
    else:
        raise TypeError(f"not a fixed-point datum: {datum!r}")
    if s.pole_order:
        raise ArithDataError("pole of order > 2 in a Lefschetz term", code="internal-pole")
    if twisted:
        if lam is None:
            raise ArithDataError("lift weights required", code="missing-lift-weight")
        s = s * _twist_series(lam, K)
    return s
