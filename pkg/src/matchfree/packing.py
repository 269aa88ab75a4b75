"""Exact matching number by branch and bound over minimal members.

A maximum matching can always be taken among inclusion-minimal members, so
the solver first reduces a family to its minimal sets. Upper bounds come
from fractional covers: a cheap one spreading each element's budget over
the smallest set through it, and for larger subproblems the LP dual of the
packing relaxation, re-verified in exact integer arithmetic before use.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil

import numpy as np

from .setfam import Family, elements_of, popcount

try:
    from scipy.optimize import linprog
except ImportError:  # pragma: no cover - scipy is a declared dependency
    linprog = None

DENSE_LIMIT = 24        # build a full indicator over 2^n below this n
LP_MIN_CANDIDATES = 24  # LP bound only pays off on larger subproblems
LP_GRID = 10**6         # dual weights are rounded up to this grid


@dataclass(frozen=True)
class MatchingWitness:
    sets: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.sets)

    def to_lists(self) -> list[list[int]]:
        return [elements_of(m) for m in self.sets]


def minimal_members(f: Family) -> list[int]:
    """Inclusion-minimal members, sorted by (size, mask)."""
    arr = f.masks
    if arr.size == 0:
        return []
    if f.n <= DENSE_LIMIT and arr.size > 4096:
        mins = _minimal_dense(arr, f.n)
    else:
        mins = _minimal_sparse(arr)
    return sorted(mins, key=lambda m: (m.bit_count(), m))


def _minimal_dense(arr: np.ndarray, n: int) -> list[int]:
    # down[x] says some member is a subset of x (subset-sum transform)
    down = np.zeros(1 << n, dtype=bool)
    down[arr.astype(np.int64)] = True
    idx = np.arange(1 << n, dtype=np.int64)
    for b in range(n):
        has = (idx >> b) & 1 == 1
        down[has] |= down[idx[has] ^ (1 << b)]
    members = arr.astype(np.int64)
    nonmin = np.zeros(members.size, dtype=bool)
    for b in range(n):
        has = (members >> b) & 1 == 1
        nonmin[has] |= down[members[has] ^ (1 << b)]
    return [int(m) for m in members[~nonmin]]


def _minimal_sparse(arr: np.ndarray) -> list[int]:
    order = np.argsort(popcount(arr), kind="stable")
    kept: list[int] = []
    for m in (int(x) for x in arr[order]):
        if not any(k & m == k for k in kept):
            kept.append(m)
    return kept


def _cheap_bound(cands: list[int]) -> int:
    """floor of sum over covered elements of 1/(smallest set through it)."""
    seen = 0
    total = Fraction(0)
    for m in cands:  # sorted by size
        new = m & ~seen
        if new:
            total += Fraction(new.bit_count(), m.bit_count())
            seen |= new
    return int(total)


def _lp_bound(cands: list[int]) -> int | None:
    """Verified fractional-cover bound from the LP dual, or None."""
    if linprog is None:
        return None
    union = 0
    for m in cands:
        union |= m
    elems = [b for b in range(union.bit_length()) if union >> b & 1]
    pos = {b: r for r, b in enumerate(elems)}
    a = np.zeros((len(elems), len(cands)))
    for col, m in enumerate(cands):
        x = m
        while x:
            low = x & -x
            a[pos[low.bit_length() - 1], col] = 1.0
            x ^= low
    res = linprog(-np.ones(len(cands)), A_ub=a, b_ub=np.ones(len(elems)),
                  bounds=(0, None), method="highs")
    if res.status != 0:
        return None
    y = np.maximum(-res.ineqlin.marginals, 0.0)
    # round up onto an integer grid; the cover check below is exact
    w = {b: ceil(float(y[r]) * LP_GRID) + 1 for b, r in pos.items()}
    for m in cands:
        if sum(w[b] for b in pos if m >> b & 1) < LP_GRID:
            return None
    return sum(w.values()) // LP_GRID


class _Packer:
    def __init__(self, cands: list[int], target: int | None):
        self.target = target
        self.best: list[int] = []
        self.nodes = 0
        self._greedy(cands)

    def _greedy(self, cands: list[int]) -> None:
        used = 0
        for m in cands:
            if not m & used:
                self.best.append(m)
                used |= m

    def done(self) -> bool:
        return self.target is not None and len(self.best) >= self.target

    def goal(self) -> int:
        # a branch is worth exploring only if it can reach this many sets
        if self.target is not None:
            return self.target
        return len(self.best) + 1

    def search(self, cands: list[int], chosen: list[int]) -> None:
        self.nodes += 1
        if len(chosen) > len(self.best):
            self.best = list(chosen)
        if not cands or self.done():
            return
        need = self.goal() - len(chosen)
        if len(cands) < need or _cheap_bound(cands) < need:
            return
        if len(cands) >= LP_MIN_CANDIDATES:
            ub = _lp_bound(cands)
            if ub is not None and ub < need:
                return
        # branch on the element lying in the fewest candidates
        degree: dict[int, int] = {}
        for m in cands:
            x = m
            while x:
                low = x & -x
                degree[low] = degree.get(low, 0) + 1
                x ^= low
        bit = min(degree, key=lambda b: (degree[b], b))
        for m in cands:
            if m & bit:
                chosen.append(m)
                self.search([g for g in cands if not g & m], chosen)
                chosen.pop()
                if self.done():
                    return
        self.search([g for g in cands if not g & bit], chosen)


def _solve(f: Family, target: int | None, allow_empty: bool) -> tuple[list[int], bool]:
    """Returns (matching, used_empty_set)."""
    has_empty = len(f) > 0 and int(f.masks[0]) == 0
    if has_empty and not allow_empty:
        raise ValueError("family contains the empty set; pass allow_empty=True "
                         "to count it as one extra disjoint member")
    core = Family(f.n, f.masks[1:]) if has_empty else f
    cands = minimal_members(core)
    # singletons are minimal, so no other candidate meets them
    singles = [m for m in cands if m.bit_count() == 1]
    rest = [m for m in cands if m.bit_count() > 1]
    extra = 1 if has_empty else 0
    if target is not None:
        target = max(target - len(singles) - extra, 0)
    packer = _Packer(rest, target)
    if not packer.done():
        packer.search(rest, [])
    matching = singles + packer.best
    return sorted(matching), has_empty


def nu(f: Family, allow_empty: bool = False) -> tuple[int, MatchingWitness]:
    """Matching number of f with a maximum matching as witness.

    The empty set is disjoint from everything, including itself; under the
    distinct-members convention it adds exactly one to the matching.
    """
    matching, used_empty = _solve(f, None, allow_empty)
    sets = tuple(([0] if used_empty else []) + matching)
    return len(sets), MatchingWitness(sets)


def has_s_matching(f: Family, s: int, allow_empty: bool = False) -> MatchingWitness | None:
    if s < 1:
        raise ValueError(f"s must be positive, got {s}")
    matching, used_empty = _solve(f, s, allow_empty)
    sets = ([0] if used_empty else []) + matching
    if len(sets) < s:
        return None
    return MatchingWitness(tuple(sets[:s]))
