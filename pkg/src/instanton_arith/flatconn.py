"""Flat SU(2) connections on Brieskorn spheres and their cyclic quotients.

Irreducibles are found from the angle-space criterion: holonomies around the
three exceptional fibres are rotations by angles pi*l_i/a_i, and a product of
three such SU(2) elements equal to +-1 exists exactly when the angles satisfy
the strict spherical triangle inequalities.  Chern-Simons values come from
Auckly's formulas.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct
from typing import Optional, Union

from .errors import ArithDataError
from .seifert import QuotientSpace, SeifertManifold, normalize

__all__ = [
    "ORIENTATION_SIGN",
    "FlatConnection",
    "trivial",
    "reducible",
    "irreducible",
    "enumerate_irreducible",
    "auckly_cs",
    "choose_representative",
    "cs_irreducible",
    "cs_reducible",
    "energy_class",
    "energy_numerator",
    "label_numerator",
    "sigma_235_connections",
    "MU_TABLE",
    "RHO_TABLE",
]

# Auckly's formula is written for the opposite orientation from the tabulated
# -CS values; one global sign reconciles them.
ORIENTATION_SIGN = -1

# Floer grading mod 8 and APS rho (not rho/2) for tabulated irreducibles.
MU_TABLE: dict[tuple[int, int, int], dict[tuple[int, int, int], int]] = {
    (2, 3, 5): {(1, 2, 2): 5, (1, 2, 4): 1},
}
RHO_TABLE: dict[tuple[int, int, int], dict[tuple[int, int, int], Fraction]] = {
    (2, 3, 5): {(1, 2, 2): Fraction(-97, 15), (1, 2, 4): Fraction(-73, 15)},
}

MU_TRIVIAL = -3


@dataclass(frozen=True)
class FlatConnection:
    kind: str  # "trivial" | "reducible" | "irreducible"
    cs: Fraction
    h0: int
    h1: int
    ells: Optional[tuple[int, int, int]] = None
    k: Optional[int] = None
    mu: Optional[int] = None
    rho: Optional[Fraction] = None
    name: str = ""
    representative: Optional[tuple[int, int, int]] = field(default=None, compare=False)
    # False when no representative reproduced the energy numerator.
    verified: bool = field(default=True, compare=False)

    def __post_init__(self):
        if not 0 <= self.cs < 1:
            raise ArithDataError("cs must be stored in [0, 1)", code="invalid-connection", data=str(self.cs))

    @property
    def minus_cs(self) -> Fraction:
        """-CS as a value in (0, 1]."""
        v = (-self.cs) % 1
        return v if v else Fraction(1)

    @property
    def is_trivial(self) -> bool:
        return self.kind == "trivial"

    @property
    def is_irreducible(self) -> bool:
        return self.kind == "irreducible"

    @property
    def stab_dim(self) -> int:
        return {"trivial": 3, "reducible": 1, "irreducible": 0}[self.kind]

    @property
    def h(self) -> int:
        return self.h0 + self.h1

    def to_json(self) -> dict:
        from .exactnum import format_rational

        out = {"kind": self.kind, "name": self.name, "cs": format_rational(self.cs),
               "minus_cs": format_rational(self.minus_cs), "h0": self.h0, "h1": self.h1}
        if self.ells is not None:
            out["triple"] = list(self.ells)
        if self.representative is not None:
            out["representative"] = list(self.representative)
            out["route_agreement"] = self.verified
        if self.k is not None:
            out["k"] = self.k
        if self.mu is not None:
            out["mu"] = self.mu
        if self.rho is not None:
            out["rho"] = format_rational(self.rho)
        return out


def trivial(rho: Fraction = Fraction(0)) -> FlatConnection:
    return FlatConnection("trivial", Fraction(0), 3, 0, mu=MU_TRIVIAL, rho=Fraction(rho), name="theta")


# ---------------------------------------------------------------------------
# enumeration


def _parity_ok(ell: int, bi: int, eps: int) -> bool:
    # x_i^{a_i} = h^{-b_i} with h -> eps forces (-1)^ell = eps^{b_i}
    return (-1) ** (ell % 2) == eps ** (bi % 2)


def _triangle(r: tuple[Fraction, Fraction, Fraction]) -> bool:
    r1, r2, r3 = r
    return abs(r1 - r2) < r3 < min(r1 + r2, 2 - r1 - r2)


def _canonical_label(a, ells) -> tuple[int, int, int]:
    """Pick a label from the orbit of flipping l_i -> a_i - l_i at two indices."""
    orbit = []
    for flips in ((), (0, 1), (0, 2), (1, 2)):
        t = tuple(a[i] - ells[i] if i in flips else ells[i] for i in range(3))
        score = sum(1 for ai, li in zip(a, t) if ai % 2 == 1 and li % 2 == 0)
        orbit.append((-score, t))
    return min(orbit)[1]


def _irreducible_labels(sigma: SeifertManifold) -> list[tuple[int, int, int]]:
    a, b = sigma.a, sigma.b
    labels = set()
    for eps in (1, -1):
        ranges = [[l for l in range(1, ai) if _parity_ok(l, bi, eps)] for ai, bi in zip(a, b)]
        for ells in iproduct(*ranges):
            r = tuple(Fraction(l, ai) for l, ai in zip(ells, a))
            if _triangle(r):
                labels.add(_canonical_label(a, ells))
    return sorted(labels)


def enumerate_irreducible(sigma: SeifertManifold) -> list[FlatConnection]:
    """All conjugacy classes of irreducible flat SU(2) connections, sorted by label."""
    if sigma.p != 1:
        raise ArithDataError("enumeration is defined on the level-1 sphere", code="invalid-level", data=sigma.p)
    out = []
    for i, ells in enumerate(_irreducible_labels(sigma), start=1):
        out.append(irreducible(sigma, ells, name=f"alpha{i}"))
    return out


def irreducible(sigma: SeifertManifold, ells, name: str = "") -> FlatConnection:
    ells = tuple(int(x) for x in ells)
    rep, agreed = choose_representative(sigma, ells, strict=False)
    cs = _signed_cs(sigma.a, sigma.pairs, 0, rep)
    mu = MU_TABLE.get(sigma.a, {}).get(ells)
    rho = RHO_TABLE.get(sigma.a, {}).get(ells)
    return FlatConnection("irreducible", cs, 0, 0, ells=ells, mu=mu, rho=rho, name=name,
                          representative=rep, verified=agreed)


def reducible(Q: QuotientSpace, k: int, rho: Optional[Fraction] = None) -> FlatConnection:
    return FlatConnection("reducible", cs_reducible(Q, k), 1, 0, k=k % Q.p, rho=rho, name=f"beta{k % Q.p}")


# ---------------------------------------------------------------------------
# Chern-Simons


def label_numerator(a, ells) -> int:
    """e = sum l_i * (a1 a2 a3 / a_i) for a rotation-number label."""
    n = a[0] * a[1] * a[2]
    return sum(l * (n // ai) for l, ai in zip(ells, a))


def _rho_i(ai: int, pbi: int) -> int:
    # a_i sigma_i - pb_i rho_i = 1
    try:
        return (-pow(pbi, -1, ai)) % ai
    except ValueError as exc:
        raise ArithDataError(f"invalid Seifert pair ({ai}, {pbi})", code="invalid-seifert-pair",
                             data=[ai, pbi]) from exc


def auckly_cs(multiplicities, pairs, b: int, ells, rhos=None) -> Fraction:
    """Auckly's irreducible formula reduced to [0, 1), in its native orientation.

    ``pairs`` are the (a_i, b_i) of the space itself (already multiplied by p
    on a quotient).  ``rhos`` overrides the solved rho_i, which lets callers
    check that any solution of a_i s_i - b_i r_i = 1 gives the same class.
    """
    a = tuple(multiplicities)
    if rhos is None:
        rhos = [_rho_i(ai, bi) for ai, bi in pairs]
    else:
        for (ai, bi), r in zip(pairs, rhos):
            if (1 + bi * r) % ai:
                raise ArithDataError(f"rho={r} does not solve a s - b rho = 1 for ({ai}, {bi})",
                                     code="invalid-seifert-pair", data=[ai, bi, r])
    total = Fraction(0)
    for (ai, bi), r, l in zip(pairs, rhos, ells):
        total -= Fraction(r * l * l + l, ai)
    total += Fraction(1, 4) * (b + sum(Fraction(bi, ai) for ai, bi in pairs))
    assert a == tuple(ai for ai, _ in pairs)
    return total % 1


def _signed_cs(a, pairs, b, ells) -> Fraction:
    return (ORIENTATION_SIGN * auckly_cs(a, pairs, b, ells)) % 1


def _half_angle(a, pairs, ells) -> list[list[int]]:
    """Solutions m of 2m = b_i -+ l_i (mod a_i), per fibre, from the space's own pairs.

    The formula only sees l_i mod a_i; completing the square in it shows that a
    rotation number enters as a half angle.  Fibres with no solution keep l_i.
    """
    out = []
    for ai, (_, bi), l in zip(a, pairs, ells):
        ms = sorted({m for m in range(ai) for s in (1, -1) if (2 * m - bi + s * l) % ai == 0})
        out.append(ms or [l])
    return out


def _candidates(a, pairs, ells, level: int):
    masks = [tuple(2 * ai - l if mask >> i & 1 else l for i, (l, ai) in enumerate(zip(ells, a)))
             for mask in range(8)]
    halves = list(iproduct(*_half_angle(a, pairs, ells)))
    # On the sphere the l_i / 2a_i - l_i choice is tried first; on a quotient the
    # half-angle representative is the one that descends from the sphere.
    return masks + halves if level == 1 else halves + masks


def _space_data(space):
    return space.a, space.pairs, space.p


def choose_representative(space: Union[QuotientSpace, SeifertManifold], ells,
                          strict: bool = True) -> tuple[tuple[int, int, int], bool]:
    """Pick Auckly representatives for the label ``ells``.

    A candidate is accepted when p * (-CS) on the space equals e^2/(4 a1 a2 a3)
    mod 1, with e the label numerator: on the sphere this is the energy
    characterisation, on a quotient it is multiplicativity under the p-fold
    cover.  Returns ``(rep, agreed)``.  With ``strict`` a failure to agree
    raises; otherwise the first half-angle candidate comes back unagreed.
    """
    a, pairs, p = _space_data(space)
    if any(not 0 < l < 2 * ai for l, ai in zip(ells, a)):
        raise ArithDataError(f"rotation numbers must satisfy 0 < l_i < 2a_i, got {list(ells)}",
                             code="invalid-triple", data=list(ells))
    e = label_numerator(a, ells)
    target = Fraction(e * e, 4 * a[0] * a[1] * a[2]) % 1
    for rep in _candidates(a, pairs, ells, p):
        if (-p * _signed_cs(a, pairs, 0, rep)) % 1 == target:
            return rep, True
    if strict:
        raise ArithDataError(f"no representative of {list(ells)} is consistent with its energy numerator",
                             code="no-consistent-representative", data=list(ells))
    return tuple(c[0] for c in _half_angle(a, pairs, ells)), False


def cs_irreducible(space: Union[QuotientSpace, SeifertManifold], ells) -> Fraction:
    """CS mod 1 in [0, 1) of the irreducible labelled by ``ells``."""
    ells = tuple(int(x) for x in ells)
    a = space.a
    if all(l % (2 * ai) == 0 for l, ai in zip(ells, a)):
        return Fraction(0)
    rep, _ = choose_representative(space, ells)
    return _signed_cs(a, space.pairs, 0, rep)


def cs_reducible(Q: QuotientSpace, k: int) -> Fraction:
    """n0*k/p mod 1 where n0 * a1 a2 a3 == k (mod p)."""
    p = Q.p
    k %= p
    n0 = k * pow(Q.product, -1, p) % p
    return Fraction(n0 * k, p) % 1


def energy_class(alpha: FlatConnection, beta: FlatConnection) -> Fraction:
    """Least positive representative of CS(beta) - CS(alpha) mod 1."""
    d = (beta.cs - alpha.cs) % 1
    return d if d else Fraction(1)


def energy_numerator(ell, sigma: SeifertManifold) -> int:
    """Least e > 0 with e^2 / (4 a1 a2 a3) == ell (mod 1)."""
    ell = Fraction(ell)
    if not 0 < ell <= 1:
        raise ArithDataError("energy must lie in (0, 1]", code="invalid-energy", data=str(ell))
    four_a = 4 * sigma.product
    target = ell % 1
    for e in range(1, 2 * sigma.product + 1):
        if Fraction(e * e, four_a) % 1 == target:
            return e
    raise ArithDataError(f"energy class {ell} not of instanton type", code="not-instanton-type",
                         data=str(ell))


def sigma_235_connections() -> tuple[FlatConnection, FlatConnection, FlatConnection]:
    """(theta, alpha1, alpha2) on Sigma(2,3,5)."""
    sigma = normalize((2, 3, 5), 1)
    a1, a2 = enumerate_irreducible(sigma)
    return trivial(), a1, a2
