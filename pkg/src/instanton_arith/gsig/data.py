"""Fixed-point data of cyclic actions on four-manifolds bounded by Sigma(2,3,5)."""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from ..errors import ArithDataError
from ..exactnum import ResidueModP, as_rational, format_rational, is_prime, parse_rational, residue_of_rational

__all__ = [
    "FixedPointDatum",
    "FixedSphereDatum",
    "ExtensionData",
    "E8_POINTS",
    "E8_SPHERE",
    "E8_LAMBDA",
    "e8_plumbing",
    "example_p7",
    "canonical_pair",
    "canonical_classes",
    "check_gsig_prime",
    "load_points",
]


def check_gsig_prime(p) -> int:
    if not isinstance(p, int) or isinstance(p, bool) or not is_prime(p) or p < 7:
        raise ArithDataError(f"p must be a prime >= 7, got {p!r}", code="invalid-modulus", data=p)
    return p


def _half_integer(lam) -> Optional[Fraction]:
    if lam is None:
        return None
    lam = as_rational(lam)
    if (2 * lam).denominator != 1:
        raise ArithDataError(f"lift weight must be a half-integer, got {format_rational(lam)}",
                             code="invalid-lift-weight", data=format_rational(lam))
    return lam


def canonical_pair(a: int, b: int, p: int) -> tuple[int, int]:
    """Lexicographically least of (a,b), (b,a), (-a,-b), (-b,-a) with entries in [1, p-1]."""
    a, b = a % p, b % p
    if a == 0 or b == 0:
        raise ArithDataError(f"degenerate rotation pair ({a}, {b}) mod {p}", code="degenerate-rotation-pair",
                             data=[a, b])
    return min((a, b), (b, a), ((-a) % p, (-b) % p), ((-b) % p, (-a) % p))


def canonical_classes(p: int) -> list[tuple[int, int]]:
    return sorted({canonical_pair(a, b, p) for a in range(1, p) for b in range(1, p)})


@dataclass(frozen=True)
class FixedPointDatum:
    """Rotation pair (a, b) at an isolated fixed point, with an optional lift weight."""

    a: int
    b: int
    lam: Optional[Fraction] = None

    def __post_init__(self):
        object.__setattr__(self, "lam", _half_integer(self.lam))

    def validate(self, p: int) -> "FixedPointDatum":
        if self.a % p == 0 or self.b % p == 0:
            raise ArithDataError(f"degenerate rotation pair ({self.a}, {self.b}) mod {p}",
                                 code="degenerate-rotation-pair", data=[self.a, self.b])
        return self

    def canonical(self, p: int) -> "FixedPointDatum":
        a, b = canonical_pair(self.a, self.b, p)
        return FixedPointDatum(a, b, self.lam)

    def lam_residue(self, p: int) -> ResidueModP:
        if self.lam is None:
            raise ArithDataError("lift weights required", code="missing-lift-weight", data=self.to_json())
        return residue_of_rational(self.lam, p)

    def to_json(self) -> dict:
        out = {"a": self.a, "b": self.b}
        if self.lam is not None:
            out["lambda"] = format_rational(self.lam)
        return out

    @classmethod
    def from_json(cls, obj) -> "FixedPointDatum":
        if isinstance(obj, (list, tuple)):
            return cls(int(obj[0]), int(obj[1]), parse_rational(str(obj[2])) if len(obj) > 2 else None)
        lam = obj.get("lambda")
        return cls(int(obj["a"]), int(obj["b"]), parse_rational(str(lam)) if lam is not None else None)


@dataclass(frozen=True)
class FixedSphereDatum:
    """Fixed 2-sphere with self-intersection ``alpha`` and normal rotation ``c``."""

    alpha: int
    c: int
    lam: Optional[Fraction] = None

    def __post_init__(self):
        object.__setattr__(self, "lam", _half_integer(self.lam))

    def validate(self, p: int) -> "FixedSphereDatum":
        if self.c % p == 0:
            raise ArithDataError("sphere fixed fiberwise (c = 0) is not supported", code="degenerate-sphere",
                                 data=self.to_json())
        return self

    def to_json(self) -> dict:
        out = {"alpha": self.alpha, "c": self.c}
        if self.lam is not None:
            out["lambda"] = format_rational(self.lam)
        return out

    @classmethod
    def from_json(cls, obj) -> "FixedSphereDatum":
        lam = obj.get("lambda")
        return cls(int(obj["alpha"]), int(obj["c"]), parse_rational(str(lam)) if lam is not None else None)


@dataclass(frozen=True)
class ExtensionData:
    p: int
    points: tuple[FixedPointDatum, ...] = ()
    spheres: tuple[FixedSphereDatum, ...] = ()
    signature: int = -8
    chi: int = 9
    homologically_trivial: bool = True

    def __post_init__(self):
        check_gsig_prime(self.p)
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "spheres", tuple(self.spheres))
        for d in self.points:
            d.validate(self.p)
        for s in self.spheres:
            s.validate(self.p)

    @property
    def euler_count(self) -> int:
        return len(self.points) + 2 * len(self.spheres)

    def euler_count_ok(self) -> bool:
        return self.euler_count == self.chi

    def with_points(self, points: Iterable[FixedPointDatum]) -> "ExtensionData":
        return ExtensionData(self.p, tuple(points), self.spheres, self.signature, self.chi,
                             self.homologically_trivial)

    def canonical_multiset(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(canonical_pair(d.a, d.b, self.p) for d in self.points))

    def to_json(self) -> dict:
        return {"p": self.p, "points": [d.to_json() for d in self.points],
                "spheres": [s.to_json() for s in self.spheres], "signature": self.signature, "chi": self.chi}


E8_POINTS = ((-4, 5), (-3, 4), (-2, 3), (-2, 3), (-1, 2), (-1, 2), (-1, 2))
E8_SPHERE = (-2, 1)
E8_LAMBDA = Fraction(1, 2)


def e8_plumbing(p: int, lifted: bool = True) -> ExtensionData:
    """The linear action on the E8 plumbing, with lift weights 1/2 throughout."""
    lam = E8_LAMBDA if lifted else None
    pts = tuple(FixedPointDatum(a, b, lam) for a, b in E8_POINTS)
    sph = (FixedSphereDatum(E8_SPHERE[0], E8_SPHERE[1], lam),)
    return ExtensionData(p, pts, sph)


EXAMPLE_P7 = ((1, 1),) * 3 + ((1, -3),) + ((1, -1),) * 2 + ((2, 2),) * 2 + ((3, 3),)


def example_p7() -> ExtensionData:
    """Nine isolated fixed points at p = 7 that balance the G-signature identity."""
    return ExtensionData(7, tuple(FixedPointDatum(a, b) for a, b in EXAMPLE_P7))


def load_points(text: str) -> list[FixedPointDatum]:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ArithDataError(f"points file is not valid JSON: {exc}", code="bad-points-file") from exc
    if not isinstance(raw, list):
        raise ArithDataError("points file must hold a JSON array", code="bad-points-file")
    try:
        return [FixedPointDatum.from_json(o) for o in raw]
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ArithDataError):
            raise
        raise ArithDataError(f"malformed point entry: {exc}", code="bad-points-file") from exc
