"""Seifert invariants of Brieskorn spheres and their free cyclic quotients."""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, prod

from .errors import ArithDataError

__all__ = ["SeifertManifold", "QuotientSpace", "normalize", "quotient", "parse_sigma"]


@dataclass(frozen=True)
class SeifertManifold:
    """Sigma(a1,a2,a3) presented with b = 0 and pairs (a_i, b_i).

    ``p`` is the level: 1 for the sphere itself, otherwise the b_i solve
    sum b_i/a_i = p/(a1 a2 a3).
    """

    a: tuple[int, int, int]
    b: tuple[int, int, int]
    p: int = 1
    obstruction: int = 0

    def __post_init__(self):
        _check_multiplicities(self.a)
        if len(self.b) != 3:
            raise ArithDataError("need three Seifert invariants b_i", code="invalid-brieskorn", data=list(self.b))
        if self.obstruction != 0:
            raise ArithDataError("only the b = 0 presentation is supported", code="invalid-brieskorn",
                                 data=self.obstruction)
        if self.relation_lhs() != self.p:
            raise ArithDataError(
                f"Seifert relation fails: sum of a_j a_k b_i is {self.relation_lhs()}, expected {self.p}",
                code="invalid-brieskorn", data=self.to_json())

    @property
    def product(self) -> int:
        return prod(self.a)

    def relation_lhs(self) -> int:
        a1, a2, a3 = self.a
        b1, b2, b3 = self.b
        return a2 * a3 * b1 + a1 * a3 * b2 + a1 * a2 * b3

    @property
    def euler(self) -> Fraction:
        return sum((Fraction(bi, ai) for ai, bi in zip(self.a, self.b)), Fraction(0))

    @property
    def pairs(self) -> tuple[tuple[int, int], ...]:
        return tuple(zip(self.a, self.b))

    def shifted(self, shifts: tuple[int, int, int]) -> "SeifertManifold":
        """Another representative with b_i -> b_i + n_i a_i, requiring sum n_i = 0."""
        if sum(shifts) != 0:
            raise ArithDataError("representative shifts must sum to zero when b stays 0",
                                 code="invalid-brieskorn", data=list(shifts))
        b = tuple(bi + ni * ai for ai, bi, ni in zip(self.a, self.b, shifts))
        return SeifertManifold(self.a, b, self.p)

    def label(self) -> str:
        s = "sigma({},{},{})".format(*self.a)
        return s if self.p == 1 else f"{s}@p={self.p}"

    def to_json(self) -> dict:
        return {"a": list(self.a), "b": list(self.b), "p": self.p}

    def __str__(self):
        return self.label()


@dataclass(frozen=True)
class QuotientSpace:
    """Sigma / (Z/p), with Seifert pairs (a_i, p*b_i) over the level-1 sphere."""

    base: SeifertManifold
    p: int

    @property
    def a(self) -> tuple[int, int, int]:
        return self.base.a

    @property
    def product(self) -> int:
        return self.base.product

    @property
    def pairs(self) -> tuple[tuple[int, int], ...]:
        return tuple((ai, self.p * bi) for ai, bi in zip(self.base.a, self.base.b))

    @property
    def b(self) -> tuple[int, int, int]:
        return tuple(pb for _, pb in self.pairs)

    @property
    def euler(self) -> Fraction:
        return sum((Fraction(pb, ai) for ai, pb in self.pairs), Fraction(0))

    def label(self) -> str:
        return "sigma({},{},{})/Z{}".format(*self.a, self.p)

    def to_json(self) -> dict:
        return {"a": list(self.a), "b": list(self.base.b), "p": self.p,
                "pairs": [list(pr) for pr in self.pairs]}


def _check_multiplicities(a) -> None:
    if len(a) != 3 or any(not isinstance(x, int) or x < 2 for x in a):
        raise ArithDataError("invalid Brieskorn data: need three integers >= 2", code="invalid-brieskorn",
                             data=list(a))
    a1, a2, a3 = a
    if gcd(a1, a2) != 1 or gcd(a1, a3) != 1 or gcd(a2, a3) != 1:
        raise ArithDataError("invalid Brieskorn data: multiplicities are not pairwise coprime",
                             code="invalid-brieskorn", data=list(a))


def normalize(a, p: int = 1) -> SeifertManifold:
    """Canonical b with 0 < b_i < a_i for i = 1, 2 and b_3 forced by the relation."""
    a = tuple(int(x) for x in a)
    _check_multiplicities(a)
    if not isinstance(p, int) or p < 1:
        raise ArithDataError(f"level must be a positive integer, got {p!r}", code="invalid-level", data=p)
    if any(gcd(ai, p) != 1 for ai in a):
        raise ArithDataError(f"non-free action data: p={p} shares a factor with {list(a)}",
                             code="non-free-action", data={"a": list(a), "p": p})
    a1, a2, a3 = a
    # a2 a3 b1 == p (mod a1), and similarly for b2
    b1 = p * pow(a2 * a3, -1, a1) % a1
    b2 = p * pow(a1 * a3, -1, a2) % a2
    rest = p - a2 * a3 * b1 - a1 * a3 * b2
    b3, r = divmod(rest, a1 * a2)
    assert r == 0
    return SeifertManifold(a, (b1, b2, b3), p)


def quotient(sigma: SeifertManifold, p: int) -> QuotientSpace:
    if sigma.p != 1:
        raise ArithDataError("quotients are taken of the level-1 sphere", code="invalid-level", data=sigma.p)
    if not isinstance(p, int) or p < 2:
        raise ArithDataError(f"invalid group order {p!r}", code="invalid-level", data=p)
    if any(ai % p == 0 for ai in sigma.a) or any(gcd(ai, p) != 1 for ai in sigma.a):
        raise ArithDataError(f"action not free on {sigma.label()}: p={p} divides a multiplicity",
                             code="non-free-action", data={"a": list(sigma.a), "p": p})
    return QuotientSpace(sigma, p)


_TEXT = re.compile(r"^\s*(?:sigma)?\(?\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)?\s*(?:@\s*p\s*=\s*(\d+))?\s*$",
                   re.IGNORECASE)


def parse_sigma(text: str) -> SeifertManifold:
    """Accepts ``2,3,5``, ``sigma(2,3,5)@p=7`` or the JSON form."""
    text = text.strip()
    if text.startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ArithDataError(f"bad JSON Seifert data: {exc}", code="invalid-brieskorn", data=text) from exc
        sig = normalize(obj["a"], int(obj.get("p", 1)))
        if "b" in obj and tuple(obj["b"]) != sig.b:
            sig = SeifertManifold(tuple(obj["a"]), tuple(obj["b"]), int(obj.get("p", 1)))
        return sig
    m = _TEXT.match(text)
    if not m:
        raise ArithDataError(f"cannot parse Brieskorn data {text!r}", code="invalid-brieskorn", data=text)
    a = tuple(int(g) for g in m.groups()[:3])
    p = int(m.group(4)) if m.group(4) else 1
    return normalize(a, p)
