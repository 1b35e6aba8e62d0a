"""APS rho invariants of flat connections on cyclic quotients of Brieskorn spheres.

Reducible connections use the Kwasik-Lawson trigonometric sum.  It is
evaluated exactly in Q(zeta_M), M = lcm(p, a1, a2, a3): every sin^2, csc^2 and
cot*cot factor is a rational function of roots of unity, with no factor of i
left over once the two cotangents are paired.  A high-precision floating
evaluation followed by rational reconstruction serves as an independent check.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from math import gcd, lcm
from typing import Optional, Union

from .errors import ArithDataError
from .exactnum import CyclotomicElement, format_rational
from .flatconn import FlatConnection, RHO_TABLE
from .seifert import QuotientSpace, SeifertManifold

__all__ = [
    "DEFAULT_PRECISION_BITS",
    "RhoEvaluation",
    "rho_reducible",
    "rho_reducible_exact",
    "rho_reducible_numeric",
    "rho_reducible_report",
    "rho_table",
    "rho_irreducible",
    "quotient_cylinder_dim",
    "solve_rho_alpha",
]

DEFAULT_PRECISION_BITS = 300

# How the ambiguous pieces of the sum are read; echoed into every report.
SUM_CONVENTIONS = {
    "inner_bound": "m2 = 1 .. a_i - 1",
    "m1_zero_column": "included, vanishes identically",
    "l_range": "0 <= l < p",
}


def _precision_bits() -> int:
    raw = os.environ.get("INSTANTON_ARITH_PRECISION_BITS", "")
    try:
        bits = int(raw) if raw else DEFAULT_PRECISION_BITS
    except ValueError as exc:
        raise ArithDataError(f"bad INSTANTON_ARITH_PRECISION_BITS={raw!r}", code="bad-config", data=raw) from exc
    if bits < 64:
        raise ArithDataError("precision below 64 bits cannot support reconstruction", code="bad-config", data=bits)
    return bits


def _seifert_b(Q: QuotientSpace, seifert_b: str) -> tuple[int, int, int]:
    if seifert_b == "sphere":
        return Q.base.b
    if seifert_b == "quotient":
        return Q.b
    raise ArithDataError(f"seifert_b must be 'sphere' or 'quotient', got {seifert_b!r}",
                         code="invalid-option", data=seifert_b)


def _check_l(Q: QuotientSpace, l: int) -> int:
    if not isinstance(l, int) or not 0 <= l < Q.p:
        raise ArithDataError(f"holonomy l must satisfy 0 <= l < {Q.p}, got {l!r}", code="invalid-holonomy", data=l)
    if any(gcd(ai, Q.p) != 1 for ai in Q.a):
        raise ArithDataError("level not coprime to the multiplicities", code="level-not-coprime", data=Q.p)
    return l


# ---------------------------------------------------------------------------
# exact evaluation in the group ring Q[x]/(x^M - 1), reduced mod Phi_M at the end

GroupRing = dict  # exponent mod M -> Fraction


def _gr_mul(f: GroupRing, g: GroupRing, M: int) -> GroupRing:
    out: GroupRing = {}
    for i, a in f.items():
        for j, b in g.items():
            k = (i + j) % M
            out[k] = out.get(k, 0) + a * b
    return {k: v for k, v in out.items() if v}


def _gr_add_into(acc: GroupRing, f: GroupRing, scale: Fraction) -> None:
    for k, v in f.items():
        acc[k] = acc.get(k, 0) + scale * v


def _inv_x_minus_one(j: int, M: int) -> GroupRing:
    """1/(y - 1) for y = x^j, valid wherever y is a primitive d-th root, d = M/gcd(j, M).

    Uses d/(y - 1) = sum_{k<d} k y^k.  At a primitive M-th root y has order
    exactly d, so the identity holds after reducing mod Phi_M.
    """
    d = M // gcd(j, M)
    if d == 1:
        raise ArithDataError("singular term: cotangent pole at an angle that is a multiple of pi",
                             code="singular-term", data={"exponent": j, "M": M})
    return {(j * k) % M: Fraction(k, d) for k in range(1, d)}


def _sin2(j: int, M: int) -> GroupRing:
    # sin^2(pi x) = -(w - 2 + 1/w)/4, w = e^{2 pi i x} = x^j
    if j % M == 0:
        return {}
    return {j % M: Fraction(-1, 4), 0: Fraction(1, 2), (-j) % M: Fraction(-1, 4)}


def _csc2(j: int, M: int) -> GroupRing:
    # csc^2(pi x) = -4w/(w - 1)^2
    inv = _inv_x_minus_one(j, M)
    return _gr_mul(_gr_mul({j % M: Fraction(-4)}, inv, M), inv, M)


def _cotcot(j1: int, j2: int, M: int) -> GroupRing:
    # cot(pi x) cot(pi y) = -(u + 1)(v + 1) / ((u - 1)(v - 1))
    num = _gr_mul({j1 % M: Fraction(1), 0: Fraction(1)}, {j2 % M: Fraction(1), 0: Fraction(1)}, M)
    den = _gr_mul(_inv_x_minus_one(j1, M), _inv_x_minus_one(j2, M), M)
    return {k: -v for k, v in _gr_mul(num, den, M).items()}


@lru_cache(maxsize=1024)
def rho_reducible_exact(Q: QuotientSpace, l: int, seifert_b: str = "sphere") -> Fraction:
    l = _check_l(Q, l)
    p, a = Q.p, Q.a
    b = _seifert_b(Q, seifert_b)
    A = Q.product
    M = lcm(p, *a)
    step_p = M // p
    acc: GroupRing = {}
    for k in range(1, p):
        s2 = _sin2(k * l * step_p, M)
        if not s2:
            continue
        _gr_add_into(acc, s2, Fraction(-2, p))
        _gr_add_into(acc, _gr_mul(_csc2(k * step_p, M), s2, M), Fraction(2, A * p))
    for ai, bi in zip(a, b):
        step_a = M // ai
        for m1 in range(0, p):
            s2 = _sin2(m1 * l * step_p, M)
            if not s2:
                continue  # the m1 = 0 column and l = 0 vanish here
            for m2 in range(1, ai):
                j2 = m1 * step_p - m2 * bi * step_a
                cc = _cotcot(m2 * step_a, j2, M)
                _gr_add_into(acc, _gr_mul(cc, s2, M), Fraction(2, p * ai))
    value = CyclotomicElement.from_group_ring(M, acc)
    if not value.is_rational():
        raise ArithDataError("rho sum is not rational; indexing error", code="irrational-rho",
                             data=value.to_json())
    return value.rational_value()


# ---------------------------------------------------------------------------
# numeric oracle


def _mpf_to_fraction(x) -> Fraction:
    import mpmath

    man, exp = x.man_exp
    man = int(man) * int(mpmath.sign(x))
    exp = int(exp)
    return Fraction(man * 2 ** exp) if exp >= 0 else Fraction(man, 2 ** -exp)


def rho_reducible_numeric(Q: QuotientSpace, l: int, seifert_b: str = "sphere",
                          bits: Optional[int] = None):
    """Floating evaluation of the same sum; returns an mpmath mpf."""
    import mpmath

    l = _check_l(Q, l)
    p, a = Q.p, Q.a
    b = _seifert_b(Q, seifert_b)
    A = Q.product
    with mpmath.workprec(bits or _precision_bits()):
        pi = mpmath.pi
        s1 = -mpmath.mpf(2) / p * mpmath.fsum(mpmath.sin(pi * k * l / p) ** 2 for k in range(1, p))
        s2 = mpmath.mpf(2) / (A * p) * mpmath.fsum(
            mpmath.csc(pi * k / p) ** 2 * mpmath.sin(pi * k * l / p) ** 2 for k in range(1, p))
        s3 = mpmath.mpf(0)
        for ai, bi in zip(a, b):
            terms = []
            for m1 in range(1, p):
                w = mpmath.sin(pi * m1 * l / p) ** 2
                for m2 in range(1, ai):
                    terms.append(mpmath.cot(pi * m2 / ai) * mpmath.cot(pi * m1 / p - pi * m2 * bi / ai) * w)
            s3 += mpmath.mpf(2) / (p * ai) * mpmath.fsum(terms)
        return +(s1 + s2 + s3)


def reconstruct(x, bound: int) -> Fraction:
    """Nearest rational with denominator <= bound (continued fractions)."""
    return _mpf_to_fraction(x).limit_denominator(bound)


@dataclass(frozen=True)
class RhoEvaluation:
    space: str
    l: int
    exact: Optional[Fraction]
    numeric: Optional[str] = None
    reconstructed: Optional[Fraction] = None
    conventions: dict = field(default_factory=lambda: dict(SUM_CONVENTIONS))

    @property
    def agree(self) -> Optional[bool]:
        if self.exact is None or self.reconstructed is None:
            return None
        return self.exact == self.reconstructed

    @property
    def value(self) -> Fraction:
        return self.exact if self.exact is not None else self.reconstructed

    def to_json(self) -> dict:
        out = {"space": self.space, "l": self.l, "conventions": self.conventions}
        if self.exact is not None:
            out["exact"] = format_rational(self.exact)
        if self.reconstructed is not None:
            out["numeric"] = {"approximate": self.numeric, "reconstructed": format_rational(self.reconstructed)}
        if self.agree is not None:
            out["agree"] = self.agree
        return out


def rho_reducible_report(Q: QuotientSpace, l: int, mode: str = "exact", seifert_b: str = "sphere",
                         bits: Optional[int] = None) -> RhoEvaluation:
    if mode not in ("exact", "numeric", "both"):
        raise ArithDataError(f"unknown mode {mode!r}", code="invalid-option", data=mode)
    exact = rho_reducible_exact(Q, l, seifert_b) if mode in ("exact", "both") else None
    numeric = reconstructed = None
    if mode in ("numeric", "both"):
        import mpmath

        x = rho_reducible_numeric(Q, l, seifert_b, bits)
        numeric = mpmath.nstr(x, 40)
        reconstructed = reconstruct(x, 4 * Q.p * Q.product ** 2)
    conv = dict(SUM_CONVENTIONS, seifert_b=seifert_b)
    return RhoEvaluation(Q.label(), l, exact, numeric, reconstructed, conv)


def rho_reducible(Q: QuotientSpace, l: int, mode: str = "exact", seifert_b: str = "sphere") -> Fraction:
    """Exact rational rho of the reducible connection with holonomy ``l``."""
    rep = rho_reducible_report(Q, l, "exact" if mode == "exact" else mode, seifert_b)
    if mode == "both" and not rep.agree:
        raise ArithDataError("exact and numeric rho disagree", code="oracle-disagreement", data=rep.to_json())
    return rep.value


def _report_job(args):
    Q, l, mode, seifert_b = args
    return rho_reducible_report(Q, l, mode, seifert_b)


def rho_table(Q: QuotientSpace, mode: str = "exact", seifert_b: str = "sphere", jobs: int = 1) -> list[RhoEvaluation]:
    """Reports for every l in [0, p); ordering is independent of ``jobs``."""
    work = [(Q, l, mode, seifert_b) for l in range(Q.p)]
    if jobs <= 1:
        return [_report_job(w) for w in work]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_report_job, work))


# ---------------------------------------------------------------------------
# irreducibles and the quotient cylinder


def rho_irreducible(sigma: SeifertManifold, ells) -> Fraction:
    """Tabulated rho for irreducibles; there is no first-principles route here."""
    table = RHO_TABLE.get(sigma.a)
    ells = tuple(ells)
    if table is None or ells not in table:
        raise ArithDataError(f"rho table incomplete for this manifold: {sigma.label()} {list(ells)}",
                             code="rho-table-incomplete", data={"a": list(sigma.a), "triple": list(ells)})
    return table[ells]


def _h(conn: Optional[FlatConnection], default: int) -> int:
    return default if conn is None else conn.h


def quotient_cylinder_dim(Q: QuotientSpace, ell, beta_l: int, rho_alpha: Union[Fraction, int, str],
                          dim: Optional[int] = None, alpha: Optional[FlatConnection] = None,
                          rho_beta: Optional[Fraction] = None) -> Union[int, Fraction]:
    """Dimension of the moduli space on Q x R at energy 4l/p from irreducible alpha to beta(l).

    8l/p - (h_alpha + h_beta)/2 + (rho_beta - rho_alpha)/2, with h_alpha = 0
    and h_beta = 1.  Passing ``rho_alpha="solve"`` together with ``dim``
    returns instead the rho_alpha that produces that dimension.
    """
    ell = Fraction(ell)
    if not 0 < ell <= 1:
        raise ArithDataError("energy must lie in (0, 1]", code="invalid-energy", data=format_rational(ell))
    rb = rho_reducible(Q, beta_l) if rho_beta is None else Fraction(rho_beta)
    h = _h(alpha, 0) + 1
    base = 8 * ell / Q.p - Fraction(h, 2) + rb / 2
    if rho_alpha == "solve":
        if dim is None:
            raise ArithDataError("inverse mode needs a prescribed dimension", code="missing-dimension")
        return 2 * (base - dim)
    d = base - Fraction(rho_alpha) / 2
    if d.denominator != 1:
        raise ArithDataError(f"inconsistent rho input: dimension {format_rational(d)} is not an integer",
                             code="inconsistent-rho", data=format_rational(d))
    return d.numerator


def solve_rho_alpha(Q: QuotientSpace, ell, beta_l: int, dim: int = 1, **kw) -> Fraction:
    return quotient_cylinder_dim(Q, ell, beta_l, "solve", dim=dim, **kw)
