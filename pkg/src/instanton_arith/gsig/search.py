"""Exhaustive search over multisets of isolated fixed-point rotation data."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from typing import Iterable, Optional

from ..errors import ArithDataError
from ..exactnum import residue_of_rational
from .congruences import expected_constants, point_numerators, twisted_rhs
from .data import ExtensionData, FixedPointDatum, canonical_classes, check_gsig_prime, e8_plumbing
from .terms import eta_plumbing, lefschetz_point_term
from .theorem_b import U_CLASS, theorem_a_filter

__all__ = ["FILTER_ALIASES", "normalize_filters", "search_space_size", "search_extensions", "SEARCH_BUDGET"]

SEARCH_BUDGET = 10 ** 8

FILTER_ALIASES = {
    "identity": "identity",
    "gsig-identity": "identity",
    "congruences": "congruences",
    "theorem-a": "theorem-a",
    "twisted": "twisted",
}


def normalize_filters(filters: Optional[Iterable[str]]) -> frozenset[str]:
    if filters is None:
        return frozenset()
    if isinstance(filters, str):
        filters = [f for f in filters.split(",") if f.strip()]
    out = set()
    for f in filters:
        key = f.strip().lower()
        if key not in FILTER_ALIASES:
            raise ArithDataError(f"unknown search filter {f!r}", code="unknown-filter",
                                 data={"filter": f, "known": sorted(FILTER_ALIASES)})
        out.add(FILTER_ALIASES[key])
    return frozenset(out)


def _classes(p: int, filters: frozenset[str]) -> list[tuple[int, int]]:
    classes = canonical_classes(p)
    if "theorem-a" in filters:
        classes = [c for c in classes if theorem_a_filter(c, p).admissible]
    return classes


def search_space_size(p: int, num_points: int = 9, filters=None) -> int:
    n = len(_classes(check_gsig_prime(p), normalize_filters(filters)))
    return math.comb(n + num_points - 1, num_points)


def _identity_vectors(p: int, classes, reference: ExtensionData):
    """Integer vectors for each class term and for the target, over a common denominator."""
    terms = [lefschetz_point_term(FixedPointDatum(a, b), p).coeffs for a, b in classes]
    # points of X must match eta + signature, minus any fixed spheres carried over (none here)
    target = (eta_plumbing(p) + reference.signature).coeffs
    den = 1
    for vec in terms + [target]:
        for c in vec:
            den = math.lcm(den, c.denominator)
    width = p - 1

    def scale(vec):
        out = [int(c * den) for c in vec]
        return tuple(out + [0] * (width - len(out)))

    return [scale(v) for v in terms], scale(target)


class _Searcher:
    def __init__(self, p: int, num_points: int, filters: frozenset[str], reference: ExtensionData):
        self.p = p
        self.n = num_points
        self.filters = filters
        self.classes = _classes(p, filters)
        isolated = ExtensionData(p, (), (), reference.signature, reference.chi)
        if "identity" in filters:
            self.vecs, self.target = _identity_vectors(p, self.classes, reference)
        if "congruences" in filters:
            self.nums = [tuple(residue_of_rational(v, p).value for v in point_numerators(a, b))
                         for a, b in self.classes]
            self.expected = tuple(residue_of_rational(e, p).value for e in expected_constants(isolated, reference))
        if "twisted" in filters:
            half = pow(2, -1, p)
            self.u_mask = [theorem_a_filter(c, p).cls == U_CLASS for c in self.classes]
            # 4 lam^2/(ab) for lam = (a+b)/2 and for the distinguished lam = (b-a)/2
            self.sq = [((a + b) * half) ** 2 * 4 * pow(a * b, -1, p) % p for a, b in self.classes]
            self.dist = [((b - a) * half) ** 2 * 4 * pow(a * b, -1, p) % p for a, b in self.classes]
            self.tw_rhs = residue_of_rational(twisted_rhs(isolated, reference), p).value

    def _accept(self, idx: list[int]) -> bool:
        p = self.p
        if "congruences" in self.filters:
            sums = [0, 0, 0]
            for i in idx:
                for k in range(3):
                    sums[k] += self.nums[i][k]
            if tuple(s % p for s in sums) != self.expected:
                return False
        if "twisted" in self.filters:
            u_points = [j for j, i in enumerate(idx) if self.u_mask[i]]
            if not u_points:
                return False
            base = sum(self.sq[i] for i in idx)
            for j in u_points:
                i = idx[j]
                if (base - self.sq[i] + self.dist[i]) % p != self.tw_rhs:
                    return False
        return True

    def run_from(self, first: int) -> list[tuple[tuple[int, int], ...]]:
        found: list[tuple[tuple[int, int], ...]] = []
        m = len(self.classes)
        use_id = "identity" in self.filters
        width = self.p - 1
        idx = [first]
        acc = list(self.vecs[first]) if use_id else None

        def rec(start: int):
            if len(idx) == self.n:
                if use_id and tuple(acc) != self.target:
                    return
                if self._accept(idx):
                    found.append(tuple(self.classes[i] for i in idx))
                return
            for i in range(start, m):
                idx.append(i)
                if use_id:
                    v = self.vecs[i]
                    for k in range(width):
                        acc[k] += v[k]
                rec(i)
                if use_id:
                    for k in range(width):
                        acc[k] -= v[k]
                idx.pop()

        if self.n == 0:
            return []
        rec(first)
        return found


def _worker(args):
    p, n, filters, first = args
    return _Searcher(p, n, filters, e8_plumbing(p)).run_from(first)


def search_extensions(p: int, num_points: int = 9, filters=None, jobs: int = 1,
                      budget: int = SEARCH_BUDGET, reference: Optional[ExtensionData] = None
                      ) -> list[tuple[FixedPointDatum, ...]]:
    """All multisets of canonical rotation pairs passing ``filters``, sorted.

    Every filter is invariant under the pair orbit (a,b) ~ (b,a) ~ (-a,-b),
    so searching canonical representatives loses nothing.
    """
    check_gsig_prime(p)
    if num_points < 0:
        raise ArithDataError("num_points must be non-negative", code="invalid-argument", data=num_points)
    filt = normalize_filters(filters)
    size = search_space_size(p, num_points, filt)
    if size > budget:
        raise ArithDataError(f"search space of {size} multisets exceeds the budget of {budget}",
                             code="search-over-budget", data={"size": size, "budget": budget, "p": p})
    searcher = _Searcher(p, num_points, filt, reference or e8_plumbing(p))
    if num_points == 0:
        hits = [()] if searcher._accept([]) and ("identity" not in filt or not any(searcher.target)) else []
    elif jobs > 1 and reference is None:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = pool.map(_worker, [(p, num_points, filt, i) for i in range(len(searcher.classes))])
            hits = [h for chunk in chunks for h in chunk]
    else:
        hits = [h for i in range(len(searcher.classes)) for h in searcher.run_from(i)]
    hits.sort()
    return [tuple(FixedPointDatum(a, b) for a, b in h) for h in hits]
