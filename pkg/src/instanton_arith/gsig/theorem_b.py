"""Admissibility of rotation data and the contradiction ruling out isolated fixed points."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from ..errors import ArithDataError
from ..exactnum import format_rational, is_prime, residue_of_rational
from .congruences import expected_constants, twisted_rhs
from .data import ExtensionData, FixedPointDatum, e8_plumbing

__all__ = ["U_CLASS", "V_CLASS", "INADMISSIBLE", "AdmissibleClass", "theorem_a_filter",
           "ProofStep", "ProofTrace", "prove_theorem_b", "distinguished_point_difference"]

U_CLASS = "U"
V_CLASS = "V"
INADMISSIBLE = "inadmissible"

# Energy numerators of the two irreducible flat connections on Sigma(2,3,5).
U_NUMERATOR = 1
V_NUMERATOR = 7


@dataclass(frozen=True)
class AdmissibleClass:
    admissible: bool
    cls: str
    sum_residue: int
    note: str = ""

    def to_json(self) -> dict:
        out = {"admissible": self.admissible, "class": self.cls, "sum": self.sum_residue}
        if self.note:
            out["note"] = self.note
        return out


def theorem_a_filter(d, p: int) -> AdmissibleClass:
    """Classify a + b mod p as +-1 (U), +-7 (V) or neither."""
    if not isinstance(p, int) or not is_prime(p) or p <= 5:
        raise ArithDataError(f"p must be a prime > 5, got {p!r}", code="invalid-modulus", data=p)
    a, b = (d.a, d.b) if isinstance(d, FixedPointDatum) else d
    if a % p == 0 or b % p == 0:
        raise ArithDataError(f"degenerate rotation pair ({a}, {b}) mod {p}", code="degenerate-rotation-pair",
                             data=[a, b])
    s = (a + b) % p
    if s in (U_NUMERATOR % p, (-U_NUMERATOR) % p):
        return AdmissibleClass(True, U_CLASS, s)
    if s in (V_NUMERATOR % p, (-V_NUMERATOR) % p):
        note = "p = 7: +-7 is 0 mod p" if p == 7 else ""
        return AdmissibleClass(True, V_CLASS, s, note)
    return AdmissibleClass(False, INADMISSIBLE, s)


def distinguished_point_difference() -> Fraction:
    """((a + b)^2 - (b - a)^2)/(ab), shown constant by exact evaluation.

    The numerator has degree at most 2 in each of a and b, so agreeing with
    4ab on a 3 x 3 grid of distinct values proves the identity.
    """
    values = set()
    for a in (1, 2, 3):
        for b in (1, 2, 3):
            values.add(Fraction((a + b) ** 2 - (b - a) ** 2, a * b))
    if len(values) != 1:
        raise AssertionError("distinguished-point identity failed")
    return values.pop()


@dataclass(frozen=True)
class ProofStep:
    name: str
    statement: str
    value: Optional[Fraction] = None
    residue: Optional[int] = None
    holds: Optional[bool] = None

    def to_json(self) -> dict:
        out = {"step": self.name, "statement": self.statement}
        if self.value is not None:
            out["value"] = format_rational(self.value)
        if self.residue is not None:
            out["residue"] = self.residue
        if self.holds is not None:
            out["holds"] = self.holds
        return out


@dataclass(frozen=True)
class ProofTrace:
    p: int
    steps: tuple[ProofStep, ...]
    contradiction: bool
    flags: dict = field(default_factory=dict)

    @property
    def complete(self) -> bool:
        return self.contradiction and [s.name for s in self.steps] == list(_STEP_NAMES)

    def step(self, name: str) -> ProofStep:
        for s in self.steps:
            if s.name == name:
                return s
        raise KeyError(name)

    def to_json(self) -> dict:
        return {"p": self.p, "contradiction": self.contradiction, "complete": self.complete,
                "flags": self.flags, "steps": [s.to_json() for s in self.steps]}


_STEP_NAMES = ("constants", "squares", "split", "v-vanishes", "u-nonzero", "twisted", "subtract", "verdict")


def prove_theorem_b(p: int, num_points: int = 9, reference: Optional[ExtensionData] = None) -> ProofTrace:
    """Run the residue argument at p and return its trace.

    A trace ending in ``contradiction=True`` means no configuration of
    ``num_points`` isolated fixed points with admissible rotation data can
    satisfy the congruences.
    """
    if not isinstance(p, int) or not is_prime(p) or p < 7 or 48 % p == 0:
        raise ArithDataError(f"theorem hypotheses violated: need a prime p >= 7 with p not dividing 48, got {p!r}",
                             code="hypotheses-violated", data=p)
    reference = reference or e8_plumbing(p)
    isolated = ExtensionData(p, (), (), reference.signature, reference.chi)
    e1, e2, e3 = expected_constants(isolated, reference)
    r = lambda q: residue_of_rational(q, p).value  # noqa: E731
    steps = [ProofStep("constants", f"sum 1/ab == E1 = {format_rational(e1)}, "
                       f"sum (a^2+b^2+1)/ab == E2 = {format_rational(e2)}", e1, r(e1))]
    # (a+b)^2/ab = (a^2+b^2+1)/ab + 2 - 1/ab, summed over the points
    s_sq = e2 + 2 * num_points - e1
    steps.append(ProofStep("squares", f"sum (a+b)^2/ab == E2 + {2 * num_points} - E1", s_sq, r(s_sq)))
    # admissible points have (a+b)^2 == 1 (U) or 49 (V)
    steps.append(ProofStep("split", "U + 49V == sum (a+b)^2/ab and U + V == E1",
                           s_sq - e1, r(s_sq - e1)))
    v48 = residue_of_rational(s_sq - e1, p)
    v_ok = v48.value == 0
    steps.append(ProofStep("v-vanishes", "48V == 0, and 48 is a unit mod p, so V == 0",
                           Fraction(0) if v_ok else None, (v48 / 48).value, v_ok))
    u_nonzero = r(e1) != 0
    steps.append(ProofStep("u-nonzero", "U == E1 is nonzero, so some point has a+b == +-1",
                           e1, r(e1), u_nonzero))
    rhs = twisted_rhs(isolated, reference)
    steps.append(ProofStep("twisted", "lift from a U-point (a,b): (b-a)^2/ab + sum over the rest == twisted RHS",
                           rhs, r(rhs)))
    diff = distinguished_point_difference()
    gap = s_sq - rhs
    steps.append(ProofStep("subtract", "squares minus twisted: ((a+b)^2 - (b-a)^2)/ab = "
                           f"{format_rational(diff)} == sum (a+b)^2/ab - RHS", diff, r(diff),
                           r(diff) == r(gap)))
    contradiction = v_ok and u_nonzero and r(diff) != r(gap)
    steps.append(ProofStep("verdict", f"{format_rational(diff)} == {format_rational(gap)} (mod {p}) fails; "
                           "no admissible isolated fixed-point data", None, None, not contradiction))
    flags = {"num_points": num_points, "E1": format_rational(e1), "E2": format_rational(e2),
             "E3": format_rational(e3)}
    if p == 7:
        flags["homologically_trivial_required"] = True
    return ProofTrace(p, tuple(steps), contradiction, flags)
