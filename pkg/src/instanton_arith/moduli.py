"""Formal dimensions of instanton moduli spaces and energy-splitting bookkeeping."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

from .errors import ArithDataError
from .exactnum import format_rational, is_prime
from .flatconn import FlatConnection, energy_class
from .seifert import SeifertManifold

__all__ = [
    "E8_CHI",
    "E8_SIGNATURE",
    "ModuliPiece",
    "SplittingChain",
    "Verdict",
    "dim_end",
    "dim_cylinder",
    "floer_dim_mod8",
    "floer_dim_end_mod8",
    "enumerate_splittings",
    "holonomy_filter",
    "invariant_connection_obstruction",
    "isotropy_weights",
    "trivial_splitting_obstruction",
]

# Euler characteristic and signature of the E8 plumbing with its end.
E8_CHI = 9
E8_SIGNATURE = -8


def _require_rho(alpha: FlatConnection) -> Fraction:
    if alpha.rho is None:
        raise ArithDataError(f"rho invariant unknown for {alpha.name or alpha.kind}",
                             code="missing-rho", data=alpha.to_json())
    return alpha.rho


def _integral(x: Fraction, what: str) -> int:
    if x.denominator != 1:
        raise ArithDataError(f"inconsistent invariant inputs: {what} = {format_rational(x)} is not an integer",
                             code="inconsistent-invariants", data=format_rational(x))
    return x.numerator


def dim_end(ell, alpha: FlatConnection, chi: int = E8_CHI, sig: int = E8_SIGNATURE) -> int:
    """8l - 3/2 (chi + sigma) - 1/2 (h0 + h1) + 1/2 rho(alpha)."""
    ell = Fraction(ell)
    d = 8 * ell - Fraction(3, 2) * (chi + sig) - Fraction(alpha.h0 + alpha.h1, 2) + _require_rho(alpha) / 2
    return _integral(d, "dim_end")


def dim_cylinder(ell, alpha: FlatConnection, beta: FlatConnection) -> int:
    """8l - 1/2 (h_alpha + h_beta) + 1/2 (rho(beta) - rho(alpha))."""
    ell = Fraction(ell)
    d = 8 * ell - Fraction(alpha.h + beta.h, 2) + (_require_rho(beta) - _require_rho(alpha)) / 2
    return _integral(d, "dim_cylinder")


def _mu(alpha: FlatConnection) -> int:
    if alpha.mu is None:
        raise ArithDataError(f"Floer index unknown for {alpha.name or alpha.kind}", code="missing-mu",
                             data=alpha.to_json())
    return alpha.mu


def floer_dim_mod8(alpha: FlatConnection, beta: FlatConnection) -> int:
    return (_mu(alpha) - _mu(beta) - beta.stab_dim) % 8


def floer_dim_end_mod8(alpha: FlatConnection) -> int:
    """dim M(X, alpha) mod 8 on the E8 end, -mu(alpha) - 3 - dim Stab(alpha)."""
    return (-_mu(alpha) - 3 - alpha.stab_dim) % 8


# ---------------------------------------------------------------------------
# splittings


@dataclass(frozen=True)
class ModuliPiece:
    kind: str  # "end" or "cylinder"
    source: Optional[FlatConnection]
    target: FlatConnection
    energy: Fraction
    dim: int

    def __post_init__(self):
        if self.kind == "cylinder" and (self.energy <= 0 or self.dim < 1):
            raise ArithDataError("cylinder pieces need positive energy and dimension >= 1",
                                 code="invalid-piece", data=self.to_json())
        if self.kind == "end" and (self.energy < 0 or self.dim < 0):
            raise ArithDataError("end pieces need non-negative energy and dimension",
                                 code="invalid-piece", data=self.to_json())

    def describe(self) -> str:
        if self.kind == "end":
            return f"M(X,{self.target.name})"
        return f"M({self.source.name},{self.target.name})"

    def to_json(self) -> dict:
        return {"kind": self.kind, "source": self.source.name if self.source else None,
                "target": self.target.name, "energy": format_rational(self.energy), "dim": self.dim}


@dataclass(frozen=True)
class SplittingChain:
    pieces: tuple[ModuliPiece, ...]
    label: str = ""
    # Chains absorbed into this one (see ``fold_flat_end``).
    folded: tuple["SplittingChain", ...] = field(default=(), compare=False)

    def __post_init__(self):
        for prev, nxt in zip(self.pieces, self.pieces[1:]):
            if nxt.source is not prev.target and nxt.source != prev.target:
                raise ArithDataError("incompatible boundary values in splitting chain",
                                     code="invalid-chain", data=[prev.to_json(), nxt.to_json()])

    @property
    def total_charge(self) -> Fraction:
        return sum((pc.energy for pc in self.pieces), Fraction(0))

    @property
    def energies(self) -> tuple[Fraction, ...]:
        return tuple(pc.energy for pc in self.pieces)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(pc.dim for pc in self.pieces)

    @property
    def length(self) -> int:
        return len(self.pieces) - 1

    def describe(self) -> str:
        return " x ".join(pc.describe() for pc in self.pieces)

    def to_json(self) -> dict:
        out = {"label": self.label, "splitting": self.describe(),
               "dims": list(self.dims), "energies": [format_rational(e) for e in self.energies],
               "total_charge": format_rational(self.total_charge), "pieces": [pc.to_json() for pc in self.pieces]}
        if self.folded:
            out["folded"] = [c.to_json() for c in self.folded]
        return out


def _conn_key(c: FlatConnection):
    # irreducibles first by label, then reducibles, theta last
    order = {"irreducible": 0, "reducible": 1, "trivial": 2}[c.kind]
    return (order, c.ells or (), c.k if c.k is not None else -1, c.name)


def _end_energies(alpha: FlatConnection, total: Fraction):
    ell = alpha.cs  # minimal non-negative l0 == CS(alpha) mod 1
    while ell <= total:
        yield ell
        ell += 1


def _end_piece(alpha: FlatConnection, ell: Fraction, chi: int, sig: int) -> Optional[ModuliPiece]:
    if alpha.is_trivial and ell == 0:
        # the flat trivial connection on X is a single point
        return ModuliPiece("end", None, alpha, ell, 0)
    try:
        d = dim_end(ell, alpha, chi, sig)
    except ArithDataError:
        return None
    return ModuliPiece("end", None, alpha, ell, d) if d >= 0 else None


def enumerate_splittings(connections: Sequence[FlatConnection], total_charge=1, target_dim: int = 5,
                         chi: int = E8_CHI, sig: int = E8_SIGNATURE,
                         fold_flat_end: bool = True) -> list[SplittingChain]:
    """Every end piece plus k >= 1 cylinder pieces ending at theta with the given totals.

    Intermediate limits are irreducible.  Chains whose end piece is the flat
    trivial connection all degenerate onto the same stratum; with
    ``fold_flat_end`` they are reported once, as the chain with a single
    cylinder piece, carrying the others in ``folded``.
    """
    total = Fraction(total_charge)
    conns = sorted(connections, key=_conn_key)
    thetas = [c for c in conns if c.is_trivial]
    if not thetas:
        raise ArithDataError("connection list must contain the trivial connection", code="missing-theta")
    theta = thetas[0]
    irreducibles = [c for c in conns if c.is_irreducible]
    positive = [energy_class(x, y) for x in conns for y in conns]
    max_len = int(total / min(positive)) if positive else 1

    found: list[tuple[ModuliPiece, ...]] = []

    def extend(pieces, charge, dim):
        last = pieces[-1].target
        if len(pieces) - 1 >= max_len:
            return
        for nxt in irreducibles + [theta]:
            ell = energy_class(last, nxt)
            while charge + ell <= total:
                try:
                    d = dim_cylinder(ell, last, nxt)
                except ArithDataError:
                    d = None
                if d is not None and d >= 1 and dim + d <= target_dim:
                    piece = ModuliPiece("cylinder", last, nxt, ell, d)
                    chain = pieces + (piece,)
                    if nxt.is_trivial:
                        if charge + ell == total and dim + d == target_dim:
                            found.append(chain)
                    else:
                        extend(chain, charge + ell, dim + d)
                ell += 1

    for alpha in conns:
        if not (alpha.is_trivial or alpha.is_irreducible):
            continue
        for ell0 in _end_energies(alpha, total):
            end = _end_piece(alpha, ell0, chi, sig)
            if end is not None and end.dim <= target_dim:
                extend((end,), ell0, end.dim)

    def sort_key(ch):
        return (_conn_key(ch[0].target), len(ch), [(_conn_key(pc.target), pc.energy) for pc in ch[1:]])

    found.sort(key=sort_key)
    chains: list[tuple[tuple[ModuliPiece, ...], list]] = []
    for ch in found:
        flat_end = ch[0].target.is_trivial and ch[0].energy == 0
        if fold_flat_end and flat_end and chains and chains[-1][0][0].target.is_trivial \
                and chains[-1][0][0].energy == 0:
            chains[-1][1].append(ch)
            continue
        chains.append((ch, []))
    out = []
    for i, (ch, folded) in enumerate(chains):
        label = _row_label(i)
        out.append(SplittingChain(ch, label, tuple(SplittingChain(f, f"{label}'") for f in folded)))
    return out


def _row_label(i: int) -> str:
    s = ""
    i += 1
    while i:
        i, r = divmod(i - 1, 26)
        s = chr(ord("A") + r) + s
    return s


# ---------------------------------------------------------------------------
# equivariant filters


@dataclass(frozen=True)
class Verdict:
    obstructed: bool
    reason: str
    data: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"obstructed": self.obstructed, "reason": self.reason, **self.data}


def _check_prime(p: int, least: int = 7) -> None:
    if not isinstance(p, int) or not is_prime(p) or p < least:
        raise ArithDataError(f"p must be a prime >= {least}, got {p!r}", code="invalid-modulus", data=p)


def holonomy_filter(e: int, p: int) -> set[int]:
    """Residues k with k^2 == e^2 (mod p): {e, -e}."""
    _check_prime(p)
    return {e % p, (-e) % p}


def invariant_connection_obstruction(ell, sigma: SeifertManifold, p: int) -> Verdict:
    """Whether 4l/p fails to be congruent mod 4 to any n/(a1 a2 a3)."""
    ell = Fraction(ell)
    if not 0 < ell <= 1:
        raise ArithDataError("energy must lie in (0, 1]", code="invalid-energy", data=format_rational(ell))
    if gcd(p, sigma.product) != 1:
        raise ArithDataError(f"level not coprime: p={p} and a1a2a3={sigma.product}",
                             code="level-not-coprime", data=p)
    _check_prime(p, 5)
    x = 4 * ell / p
    obstructed = sigma.product % x.denominator != 0
    reason = (f"4l/p = {format_rational(x)} has denominator {x.denominator}, "
              f"{'not ' if obstructed else ''}dividing {sigma.product}")
    return Verdict(obstructed, reason, {"four_ell_over_p": format_rational(x)})


def _check_pair(point, p: Optional[int]) -> tuple[int, int]:
    a, b = point
    bad = (a == 0 or b == 0) if p is None else (a % p == 0 or b % p == 0)
    if bad:
        raise ArithDataError(f"not an isolated fixed point: rotation pair {list(point)}",
                             code="degenerate-rotation-pair", data=list(point))
    return a, b


def isotropy_weights(point, location: str = "own", p: Optional[int] = None) -> tuple[int, int]:
    """Weights +-(b - a) over the point's own fibre, +-(a + b) over the other fixed points.

    With ``p`` the weights are reduced mod 2p.
    """
    a, b = _check_pair(point, p)
    if location in ("own", "own-fiber", "own_fiber"):
        w = b - a
    elif location in ("other", "elsewhere", "other-fixed-point"):
        w = a + b
    else:
        raise ArithDataError(f"unknown location {location!r}", code="invalid-location", data=location)
    if p is not None:
        return (w % (2 * p), (-w) % (2 * p))
    return (w, -w)


def trivial_splitting_obstruction(point, p: int) -> Verdict:
    """A flat trivial end can only match a lift if a + b == +-(b - a), i.e. 2a or 2b == 0."""
    if not isinstance(p, int) or p % 2 == 0 or not is_prime(p):
        raise ArithDataError(f"p must be an odd prime, got {p!r}", code="invalid-modulus", data=p)
    a, b = _check_pair(point, p)
    plus, minus = (2 * a) % p, (2 * b) % p
    obstructed = plus != 0 and minus != 0
    return Verdict(obstructed, "a+b = b-a needs 2a = 0; a+b = a-b needs 2b = 0",
                   {"two_a_mod_p": plus, "two_b_mod_p": minus})
