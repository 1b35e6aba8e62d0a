"""Exact arithmetic substrate.

Rationals are :class:`fractions.Fraction`.  On top of them this module provides
residues modulo a prime, dense polynomials over Q, elements of cyclotomic
fields Q(zeta_n) stored in the power basis, and truncated Laurent expansions
in ``u = t - 1``.  Nothing here touches floating point except the explicit
``numeric`` image of a cyclotomic element.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Mapping, Sequence, Union

from .errors import ArithDataError, FieldDivisionError, PoleError

Rational = Fraction
RationalLike = Union[int, Fraction, str]

__all__ = [
    "Rational",
    "as_rational",
    "format_rational",
    "parse_rational",
    "is_prime",
    "primes_between",
    "check_level_prime",
    "ResidueModP",
    "residue_of_rational",
    "QPolynomial",
    "cyclotomic_polynomial",
    "euler_phi",
    "CyclotomicElement",
    "field_invert",
    "TruncatedSeries",
    "series_of_rational_function",
]


# ---------------------------------------------------------------------------
# rationals


def as_rational(x: RationalLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def format_rational(q: RationalLike) -> str:
    """Serialize as ``"num/den"`` in lowest terms; the sign sits on the numerator."""
    q = as_rational(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(s: str) -> Fraction:
    s = s.strip()
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ArithDataError(f"not an exact rational: {s!r}", code="bad-rational", data=s) from exc


# ---------------------------------------------------------------------------
# primes and residues


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def primes_between(lo: int, hi: int) -> list[int]:
    return [n for n in range(lo, hi + 1) if is_prime(n)]


def check_level_prime(p: int) -> int:
    # 2 and 3 are excluded everywhere: the congruences divide by 2, 3 and 5.
    if not isinstance(p, int) or not is_prime(p) or p < 5:
        raise ArithDataError(f"modulus must be a prime >= 5, got {p!r}", code="invalid-modulus", data=p)
    return p


@dataclass(frozen=True)
class ResidueModP:
    value: int
    p: int

    def __post_init__(self):
        check_level_prime(self.p)
        object.__setattr__(self, "value", self.value % self.p)

    def _coerce(self, other) -> "ResidueModP":
        if isinstance(other, ResidueModP):
            if other.p != self.p:
                raise ArithDataError("residues modulo different primes", code="modulus-mismatch",
                                     data=[self.p, other.p])
            return other
        if isinstance(other, (int, Fraction)):
            return residue_of_rational(Fraction(other), self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ResidueModP(self.value + o.value, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ResidueModP(self.value - o.value, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ResidueModP(self.value * o.value, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return ResidueModP(-self.value, self.p)

    def inverse(self) -> "ResidueModP":
        if self.value == 0:
            raise FieldDivisionError(f"0 has no inverse mod {self.p}", data=self.p)
        return ResidueModP(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return ResidueModP(pow(self.value, k, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, ResidueModP):
            return self.p == other.p and self.value == other.value
        if isinstance(other, (int, Fraction)):
            try:
                return self.value == residue_of_rational(Fraction(other), self.p).value
            except ArithDataError:
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} (mod {self.p})"

    def symmetric(self) -> int:
        """Representative in (-p/2, p/2)."""
        v = self.value
        return v - self.p if v > self.p // 2 else v


def residue_of_rational(q: RationalLike, p: int) -> ResidueModP:
    q = as_rational(q)
    check_level_prime(p)
    if q.denominator % p == 0:
        raise ArithDataError(f"non-invertible denominator: {format_rational(q)} mod {p}",
                             code="non-invertible-denominator", data=[format_rational(q), p])
    return ResidueModP(q.numerator * pow(q.denominator, -1, p), p)


# ---------------------------------------------------------------------------
# polynomials over Q


class QPolynomial:
    """Dense polynomial with rational coefficients, ``coeffs[i]`` multiplies t**i."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[RationalLike] = ()):
        cs = [as_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def monomial(cls, k: int, c: RationalLike = 1) -> "QPolynomial":
        return cls([0] * k + [c])

    @classmethod
    def t(cls) -> "QPolynomial":
        return cls.monomial(1)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QPolynomial([other])
        return isinstance(other, QPolynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"QPolynomial({[format_rational(c) for c in self.coeffs]})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            parts.append(f"{c}{'*' + mono if mono else ''}")
        return " + ".join(parts)

    @staticmethod
    def _lift(x) -> "QPolynomial":
        if isinstance(x, QPolynomial):
            return x
        return QPolynomial([x])

    def __add__(self, other):
        o = self._lift(other)
        n = max(len(self.coeffs), len(o.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = o.coeffs + (Fraction(0),) * (n - len(o.coeffs))
        return QPolynomial(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return QPolynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        if not self.coeffs or not o.coeffs:
            return QPolynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(o.coeffs):
                out[i + j] += a * b
        return QPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = QPolynomial([1])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other):
        g = self._lift(other)
        if g.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dg = g.degree
        if len(rem) - 1 < dg:
            return QPolynomial(), QPolynomial(rem)
        quot = [Fraction(0)] * (len(rem) - dg)
        lead = g.leading
        for k in range(len(rem) - 1 - dg, -1, -1):
            c = rem[k + dg] / lead
            quot[k] = c
            if c:
                for j, gc in enumerate(g.coeffs):
                    rem[k + j] -= c * gc
        return QPolynomial(quot), QPolynomial(rem[:dg])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def taylor_shift(self) -> "QPolynomial":
        """Coefficients of f(1 + u) as a polynomial in u."""
        out = [Fraction(0)] * len(self.coeffs)
        # Horner in u: f(1+u) = (...(c_n (1+u) + c_{n-1})(1+u) ...)
        for c in reversed(self.coeffs):
            # multiply current by (1 + u)
            for i in range(len(out) - 1, 0, -1):
                out[i] += out[i - 1]
            out[0] += c
        return QPolynomial(out)

    def valuation_at_one(self) -> int:
        """Order of vanishing at t = 1 (infinite for zero is reported as -1)."""
        if self.is_zero():
            return -1
        shifted = self.taylor_shift().coeffs
        return next(i for i, c in enumerate(shifted) if c != 0)


def _poly_egcd(f: QPolynomial, g: QPolynomial) -> tuple[QPolynomial, QPolynomial, QPolynomial]:
    """Return (d, s, t) with s*f + t*g = d = gcd(f, g)."""
    r0, r1 = f, g
    s0, s1 = QPolynomial([1]), QPolynomial()
    t0, t1 = QPolynomial(), QPolynomial([1])
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    return r0, s0, t0


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    result, m, f = n, n, 2
    while f * f <= m:
        if m % f == 0:
            while m % f == 0:
                m //= f
            result -= result // f
        f += 1
    if m > 1:
        result -= result // m
    return result


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> QPolynomial:
    if not isinstance(n, int) or n < 1:
        raise ArithDataError(f"cyclotomic order must be a positive integer, got {n!r}",
                             code="invalid-order", data=n)
    f = QPolynomial.monomial(n) - 1
    for d in range(1, n):
        if n % d == 0:
            q, r = divmod(f, cyclotomic_polynomial(d))
            assert r.is_zero()
            f = q
    return f


# ---------------------------------------------------------------------------
# cyclotomic fields


class _CycloContext:
    """Reduction table: row j is t**j reduced modulo Phi_n, for 0 <= j < size."""

    def __init__(self, n: int):
        self.n = n
        self.phi = euler_phi(n)
        self.modulus = cyclotomic_polynomial(n)
        phi = self.phi
        size = max(n, 2 * phi)
        tail = [-c for c in self.modulus.coeffs[:phi]]  # t^phi = -sum c_i t^i
        rows: list[tuple[Fraction, ...]] = []
        for j in range(min(phi, size)):
            row = [Fraction(0)] * phi
            row[j] = Fraction(1)
            rows.append(tuple(row))
        cur = tuple(tail)
        for j in range(phi, size):
            rows.append(cur)
            # multiply by t and reduce
            top = cur[-1]
            nxt = [Fraction(0)] + list(cur[:-1])
            if top:
                nxt = [a + top * b for a, b in zip(nxt, tail)]
            cur = tuple(nxt)
        self.rows = rows

    def reduce(self, vec: Sequence[Fraction]) -> tuple[Fraction, ...]:
        phi = self.phi
        out = list(vec[:phi]) + [Fraction(0)] * max(0, phi - len(vec))
        for j in range(phi, len(vec)):
            c = vec[j]
            if c:
                row = self.rows[j] if j < len(self.rows) else self.power_row(j)
                for i, r in enumerate(row):
                    if r:
                        out[i] += c * r
        return tuple(out)

    def power_row(self, k: int) -> tuple[Fraction, ...]:
        return self.rows[k % self.n]


@lru_cache(maxsize=None)
def _context(n: int) -> _CycloContext:
    return _CycloContext(n)


class CyclotomicElement:
    """Element of Q(zeta_n) as a coefficient vector of length phi(n) in the power basis.

    Every constructor reduces modulo Phi_n, so equality is coefficientwise.
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Iterable[RationalLike] = ()):
        ctx = _context(order)
        vec = [as_rational(c) for c in coeffs]
        self.order = order
        self.coeffs: tuple[Fraction, ...] = ctx.reduce(vec)

    # constructors -----------------------------------------------------------

    @classmethod
    def _raw(cls, order: int, coeffs: tuple[Fraction, ...]) -> "CyclotomicElement":
        obj = object.__new__(cls)
        obj.order = order
        obj.coeffs = coeffs
        return obj

    @classmethod
    def scalar(cls, order: int, c: RationalLike) -> "CyclotomicElement":
        phi = euler_phi(order)
        return cls._raw(order, (as_rational(c),) + (Fraction(0),) * (phi - 1))

    @classmethod
    def zero(cls, order: int) -> "CyclotomicElement":
        return cls.scalar(order, 0)

    @classmethod
    def one(cls, order: int) -> "CyclotomicElement":
        return cls.scalar(order, 1)

    @classmethod
    def zeta_power(cls, order: int, k: int) -> "CyclotomicElement":
        """zeta_n ** k for any integer k."""
        return cls._raw(order, _context(order).power_row(k))

    @classmethod
    def from_group_ring(cls, order: int, terms: Mapping[int, RationalLike] | Sequence[RationalLike]
                        ) -> "CyclotomicElement":
        """Image of sum c_k t^k (exponents taken mod n) under t -> zeta_n."""
        ctx = _context(order)
        items = terms.items() if isinstance(terms, Mapping) else enumerate(terms)
        acc = [Fraction(0)] * ctx.phi
        for k, c in items:
            c = as_rational(c)
            if c:
                row = ctx.power_row(k)
                for i, r in enumerate(row):
                    if r:
                        acc[i] += c * r
        return cls._raw(order, tuple(acc))

    # arithmetic -------------------------------------------------------------

    def _coerce(self, other) -> "CyclotomicElement":
        if isinstance(other, CyclotomicElement):
            if other.order != self.order:
                raise ArithDataError("elements of different cyclotomic fields",
                                     code="order-mismatch", data=[self.order, other.order])
            return other
        if isinstance(other, (int, Fraction)):
            return CyclotomicElement.scalar(self.order, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return CyclotomicElement._raw(self.order, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicElement._raw(self.order, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return CyclotomicElement._raw(self.order, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return CyclotomicElement._raw(self.order, tuple(a * c for a in self.coeffs))
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b = self.coeffs, o.coeffs
        out = [Fraction(0)] * (2 * len(a) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] += x * y
        return CyclotomicElement._raw(self.order, _context(self.order).reduce(out))

    __rmul__ = __mul__

    def inverse(self) -> "CyclotomicElement":
        if self.is_zero():
            raise FieldDivisionError("division by zero in cyclotomic field", data=self.order)
        if self.is_rational():
            return CyclotomicElement.scalar(self.order, 1 / self.coeffs[0])
        d, s, _ = _poly_egcd(QPolynomial(self.coeffs), _context(self.order).modulus)
        # Phi_n is irreducible, so the gcd with a nonzero element is a constant.
        assert d.degree == 0
        return CyclotomicElement(self.order, (c / d.coeffs[0] for c in s.coeffs))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise FieldDivisionError("division by zero in cyclotomic field", data=self.order)
            return self * (1 / Fraction(other))
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = CyclotomicElement.one(self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # predicates and views ---------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ArithDataError("cyclotomic element is not rational", code="not-rational",
                                 data=self.to_json())
        return self.coeffs[0]

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if isinstance(other, CyclotomicElement):
            return self.order == other.order and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def __repr__(self):
        return f"CyclotomicElement({self.order}, {[format_rational(c) for c in self.coeffs]})"

    def lift(self) -> QPolynomial:
        """The power-basis representative as a polynomial in t."""
        return QPolynomial(self.coeffs)

    def galois(self, g: int) -> "CyclotomicElement":
        """Apply the automorphism zeta -> zeta**g."""
        if gcd(g, self.order) != 1:
            raise ArithDataError(f"{g} is not a unit mod {self.order}", code="not-a-unit", data=g)
        return CyclotomicElement.from_group_ring(self.order, {g * i: c for i, c in enumerate(self.coeffs)})

    def numeric(self, dps: int = 60):
        """Complex value at zeta_n = exp(2 pi i / n), via mpmath at ``dps`` digits."""
        import mpmath

        with mpmath.workdps(dps):
            z = mpmath.exp(2j * mpmath.pi / self.order)
            acc = mpmath.mpc(0)
            for c in reversed(self.coeffs):
                acc = acc * z + mpmath.mpf(c.numerator) / c.denominator
            return acc

    def to_json(self) -> dict:
        return {"order": self.order, "coeffs": [format_rational(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj: Mapping) -> "CyclotomicElement":
        return cls(int(obj["order"]), (parse_rational(c) for c in obj["coeffs"]))


def field_invert(x: CyclotomicElement) -> CyclotomicElement:
    return x.inverse()


# ---------------------------------------------------------------------------
# truncated (t - 1)-adic series


class TruncatedSeries:
    """Finite Laurent expansion sum_{k = valuation}^{order} c_k (t - 1)^k.

    ``order`` is the precision: coefficients above it are unknown and dropped.
    Negative exponents form the principal part of a pole at t = 1.
    """

    __slots__ = ("valuation", "coeffs", "order")

    def __init__(self, coeffs: Iterable[RationalLike], order: int, valuation: int = 0):
        cs = [as_rational(c) for c in coeffs]
        keep = max(0, order - valuation + 1)
        cs = cs[:keep]
        lead = 0
        while lead < len(cs) and cs[lead] == 0:
            lead += 1
        cs = cs[lead:]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)
        self.valuation = valuation + lead if cs else order + 1
        self.order = order

    # constructors -----------------------------------------------------------

    @classmethod
    def constant(cls, c: RationalLike, order: int) -> "TruncatedSeries":
        return cls([c], order)

    @classmethod
    def u_power(cls, k: int, order: int, c: RationalLike = 1) -> "TruncatedSeries":
        """c * (t - 1)**k."""
        return cls([c], order, valuation=k)

    @classmethod
    def t_power(cls, exponent: RationalLike, order: int) -> "TruncatedSeries":
        """(1 + u)**e by the binomial series; e may be any rational."""
        e = as_rational(exponent)
        cs = [Fraction(1)]
        for k in range(1, order + 1):
            cs.append(cs[-1] * (e - (k - 1)) / k)
        return cls(cs, order)

    @classmethod
    def from_polynomial(cls, poly: QPolynomial, order: int) -> "TruncatedSeries":
        """Expansion of a polynomial in t about t = 1."""
        return cls(poly.taylor_shift().coeffs, order)

    # views ------------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, k: int) -> Fraction:
        if k > self.order:
            raise ArithDataError(f"coefficient of (t-1)^{k} is beyond the precision {self.order}",
                                 code="beyond-precision", data=k)
        i = k - self.valuation
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def coefficients(self, upto: int | None = None) -> list[Fraction]:
        """c_0 .. c_upto (the regular part)."""
        hi = self.order if upto is None else upto
        return [self.coefficient(k) for k in range(0, hi + 1)]

    @property
    def pole_order(self) -> int:
        return max(0, -self.valuation) if self.coeffs else 0

    @property
    def principal_part(self) -> dict[int, Fraction]:
        """Map exponent (negative) -> coefficient."""
        return {k: self.coefficient(k) for k in range(self.valuation, 0) if self.coefficient(k)}

    def residues(self, p: int, upto: int | None = None) -> list[ResidueModP]:
        return [residue_of_rational(c, p) for c in self.coefficients(upto)]

    def __eq__(self, other):
        return (isinstance(other, TruncatedSeries) and self.order == other.order
                and self.valuation == other.valuation and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.valuation, self.coeffs, self.order))

    def __repr__(self):
        terms = [f"{c}*u^{self.valuation + i}" for i, c in enumerate(self.coeffs) if c]
        return f"TruncatedSeries({' + '.join(terms) or '0'} + O(u^{self.order + 1}))"

    # arithmetic -------------------------------------------------------------

    def _dense(self, lo: int, hi: int) -> list[Fraction]:
        return [self.coefficient(k) if k <= self.order else Fraction(0) for k in range(lo, hi + 1)]

    def _coerce(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            return other
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries.constant(other, self.order)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        order = min(self.order, o.order)
        lo = min(self.valuation, o.valuation, order + 1)
        a, b = self._dense(lo, order), o._dense(lo, order)
        return TruncatedSeries((x + y for x, y in zip(a, b)), order, lo)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries((-c for c in self.coeffs), self.order, self.valuation)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return TruncatedSeries((x * c for x in self.coeffs), self.order, self.valuation)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.is_zero() or o.is_zero():
            order = min(self.order + max(o.valuation, 0), o.order + max(self.valuation, 0))
            return TruncatedSeries([], order)
        order = min(self.order + o.valuation, o.order + self.valuation)
        val = self.valuation + o.valuation
        n = order - val + 1
        out = [Fraction(0)] * max(n, 0)
        for i, x in enumerate(self.coeffs):
            if i >= n:
                break
            for j, y in enumerate(o.coeffs):
                if i + j >= n:
                    break
                out[i + j] += x * y
        return TruncatedSeries(out, order, val)

    __rmul__ = __mul__

    def inverse(self) -> "TruncatedSeries":
        if self.is_zero():
            raise FieldDivisionError("series with no nonzero coefficient is not invertible")
        v = self.valuation
        rel = self.order - v  # relative precision
        c = list(self.coeffs) + [Fraction(0)] * (rel + 1 - len(self.coeffs))
        inv = [1 / c[0]]
        for k in range(1, rel + 1):
            s = sum(c[j] * inv[k - j] for j in range(1, k + 1))
            inv.append(-s / c[0])
        return TruncatedSeries(inv, -v + rel, -v)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def truncate(self, order: int) -> "TruncatedSeries":
        return TruncatedSeries(self.coeffs, min(order, self.order), self.valuation)

    def evaluate_at(self, zeta_order: int) -> CyclotomicElement:
        """Substitute t = zeta_n into the regular polynomial part sum c_k (t-1)^k."""
        if self.pole_order:
            raise PoleError("cannot evaluate a series with a pole", self.pole_order)
        u = CyclotomicElement.zeta_power(zeta_order, 1) - 1
        acc = CyclotomicElement.zero(zeta_order)
        for c in reversed(self.coefficients()):
            acc = acc * u + c
        return acc


def series_of_rational_function(numer: QPolynomial, denom: QPolynomial, order: int,
                                laurent: bool = False) -> TruncatedSeries:
    """Expansion of numer/denom about t = 1 up to (t-1)**order.

    A pole at t = 1 raises :class:`PoleError` unless ``laurent`` is set, in
    which case the principal part is kept in the result.
    """
    if denom.is_zero():
        raise FieldDivisionError("denominator is identically zero")
    m = denom.valuation_at_one()
    n = numer.valuation_at_one() if not numer.is_zero() else None
    if n is not None and n < m and not laurent:
        raise PoleError(f"pole at expansion point of order {m - n}", m - n, data={"pole_order": m - n})
    # Dividing by u^m costs m orders of precision twice over.
    depth = order + 2 * m + 1
    num = TruncatedSeries.from_polynomial(numer, depth)
    den = TruncatedSeries.from_polynomial(denom, depth)
    return (num / den).truncate(order)
