"""Generators for the named families and their fractional covers.

Every family here is described by a ``BlockRule``: [n] is cut into
consecutive intervals and membership depends only on the set size and the
number of elements taken from each interval. That lets us count members
layer by layer for any n <= 62 without listing 2^n sets.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import product
from math import comb, lcm, prod
from typing import Callable

import numpy as np

from .setfam import MAX_N, Family, Params, doubling, interval, make_params, popcount

MATERIALIZE_LIMIT = 26
_CHUNK = 1 << 22


class FamilyKind(str, Enum):
    P = "P"
    PPRIME = "Pprime"
    Q = "Q"
    W = "W"
    P_GENERAL = "P_general"
    A = "A"
    KLEITMAN = "Kleitman"


FOUR_KINDS = (FamilyKind.P, FamilyKind.PPRIME, FamilyKind.Q, FamilyKind.W)


@dataclass(frozen=True)
class BlockRule:
    """Membership as a predicate of (size, counts per block).

    ``accept`` must work both on Python ints and on numpy arrays, so it is
    written with ``&``/``|`` instead of ``and``/``or``.
    """

    n: int
    blocks: tuple[int, ...]
    accept: Callable

    def __post_init__(self):
        if sum(self.blocks) != self.n or any(b < 0 for b in self.blocks):
            raise ValueError(f"blocks {self.blocks} do not partition [{self.n}]")

    def block_masks(self) -> list[int]:
        out, start = [], 1
        for b in self.blocks:
            out.append(interval(start, start + b - 1))
            start += b
        return out

    def member_mask(self, masks: np.ndarray) -> np.ndarray:
        counts = [popcount(masks & np.uint64(bm)) for bm in self.block_masks()]
        size = sum(counts)
        return np.asarray(self.accept(size, tuple(counts)), dtype=bool) & np.ones(
            masks.shape, dtype=bool)

    def contains(self, mask: int) -> bool:
        counts = tuple(int(mask & bm).bit_count() for bm in self.block_masks())
        return bool(self.accept(sum(counts), counts))

    def layer_count(self, k: int) -> int:
        """Members of size k, summed over block-count types."""
        total = 0
        for counts in product(*(range(b + 1) for b in self.blocks)):
            if sum(counts) == k and self.accept(k, counts):
                total += prod(comb(b, t) for b, t in zip(self.blocks, counts))
        return total

    def missing_by_layer(self) -> list[int]:
        return [comb(self.n, k) - self.layer_count(k) for k in range(self.n + 1)]

    def materialize(self) -> Family:
        if self.n > MATERIALIZE_LIMIT:
            raise ValueError(f"n = {self.n} is too large to list; use layer counts")
        parts = []
        for lo in range(0, 1 << self.n, _CHUNK):
            arr = np.arange(lo, min(lo + _CHUNK, 1 << self.n), dtype=np.uint64)
            parts.append(arr[self.member_mask(arr)])
        return Family(self.n, np.concatenate(parts))

    def count_members(self) -> int:
        """Brute-force count over all masks, chunked (independent of layer_count)."""
        if self.n > MATERIALIZE_LIMIT:
            raise ValueError(f"n = {self.n} is too large to enumerate")
        total = 0
        for lo in range(0, 1 << self.n, _CHUNK):
            arr = np.arange(lo, min(lo + _CHUNK, 1 << self.n), dtype=np.uint64)
            total += int(self.member_mask(arr).sum())
        return total


def _two_blocks(n: int, first: int) -> tuple[int, int]:
    return (first, n - first)


def rule_for(kind: FamilyKind | str, p: Params) -> BlockRule:
    """Rule for one of the four candidate families at parameters p."""
    kind = FamilyKind(kind)
    s, ell, n = p.s, p.ell, p.n
    if kind is FamilyKind.P:
        return BlockRule(n, _two_blocks(n, ell - 1),
                         lambda k, t: k + t[0] >= 3)
    if kind is FamilyKind.PPRIME:
        return BlockRule(n, _two_blocks(n, 2 * ell - 1),
                         lambda k, t: (k >= 3) | ((k == 2) & (t[0] == 2)))
    if kind is FamilyKind.Q:
        # (C([n],>=3) u C([s+ell-1],2)) minus C([s+ell,n],3)
        return BlockRule(n, _two_blocks(n, s + ell - 1),
                         lambda k, t: (k >= 4) | ((k == 3) & (t[0] >= 1))
                         | ((k == 2) & (t[0] == 2)))
    if kind is FamilyKind.W:
        return BlockRule(n, _two_blocks(n, 2 * s - 1), lambda k, t: t[0] >= 2)
    raise ValueError(f"no parameterized rule for kind {kind.value}")


def rule_P_general(s: int, m: int, ell: int) -> BlockRule:
    if not 0 < ell <= s or m < 1:
        raise ValueError(f"need 0 < ell <= s and m >= 1, got s={s}, m={m}, ell={ell}")
    n = s * m + s - ell
    if n > MAX_N:
        raise ValueError(f"n = {n} exceeds {MAX_N}")
    return BlockRule(n, _two_blocks(n, ell - 1), lambda k, t: k + t[0] >= m + 1)


def rule_A(n: int, k: int, i: int, s: int) -> BlockRule:
    if not 1 <= i <= k or n < s * k or n > MAX_N or s < 1:
        raise ValueError(f"need 1 <= i <= k, s*k <= n <= {MAX_N}; got n={n}, k={k}, i={i}, s={s}")
    return BlockRule(n, _two_blocks(n, s * i - 1),
                     lambda size, t: (size == k) & (t[0] >= i))


def kleitman_m(n: int, s: int) -> tuple[int, bool]:
    """(m, is_sm) with n = s*m - 1 (is_sm False) or n = s*m (is_sm True)."""
    if s < 2:
        raise ValueError(f"s must be at least 2, got {s}")
    if (n + 1) % s == 0 and (n + 1) // s >= 1:
        return (n + 1) // s, False
    if n % s == 0 and n // s >= 1:
        return n // s, True
    raise ValueError(f"n = {n} is neither s*m - 1 nor s*m for s = {s}")


def rule_kleitman(n: int, s: int) -> BlockRule:
    m, is_sm = kleitman_m(n, s)
    if n > MAX_N:
        raise ValueError(f"n = {n} exceeds {MAX_N}")
    if is_sm:
        # doubling of C([sm-1], >= m): the last element is free
        return BlockRule(n, (n - 1, 1), lambda k, t: t[0] >= m)
    return BlockRule(n, (n,), lambda k, t: k >= m)


def family_P(s: int, c: int) -> Family:
    return rule_for(FamilyKind.P, make_params(s, c)).materialize()


def family_Pprime(s: int, c: int) -> Family:
    return rule_for(FamilyKind.PPRIME, make_params(s, c)).materialize()


def family_Q(s: int, c: int) -> Family:
    return rule_for(FamilyKind.Q, make_params(s, c)).materialize()


def family_W(s: int, c: int) -> Family:
    return rule_for(FamilyKind.W, make_params(s, c)).materialize()


def family_of(kind: FamilyKind | str, p: Params) -> Family:
    return rule_for(kind, p).materialize()


def family_P_general(s: int, m: int, ell: int) -> Family:
    return rule_P_general(s, m, ell).materialize()


def family_A(n: int, k: int, i: int, s: int) -> Family:
    return rule_A(n, k, i, s).materialize()


def family_kleitman(n: int, s: int) -> Family:
    m, is_sm = kleitman_m(n, s)
    if not is_sm:
        return rule_kleitman(n, s).materialize()
    return doubling(rule_kleitman(n - 1, s).materialize())


# --- fractional covers -----------------------------------------------------

@dataclass(frozen=True)
class FractionalCover:
    weights: tuple[Fraction, ...]

    @property
    def total(self) -> Fraction:
        return sum(self.weights, Fraction(0))


def _two_level(n: int, first: int, hi: Fraction, lo: Fraction) -> FractionalCover:
    return FractionalCover(tuple([hi] * first + [lo] * (n - first)))


def certificate_for(kind: FamilyKind | str, p: Params) -> FractionalCover:
    kind = FamilyKind(kind)
    n = p.n
    if kind is FamilyKind.P:
        return _two_level(n, p.ell - 1, Fraction(2, 3), Fraction(1, 3))
    if kind is FamilyKind.PPRIME:
        return _two_level(n, 2 * p.ell - 1, Fraction(1, 2), Fraction(1, 3))
    if kind is FamilyKind.Q:
        return _two_level(n, 2 * p.s - p.c - 1, Fraction(1, 2), Fraction(1, 4))
    if kind is FamilyKind.W:
        return _two_level(n, 2 * p.s - 1, Fraction(1, 2), Fraction(0))
    raise ValueError(f"no certificate for kind {kind.value}")


def verify_cover(f: Family, x: FractionalCover, s: int) -> bool:
    """Exact weak-duality check: total weight < s and every member weighs >= 1."""
    if len(x.weights) != f.n:
        raise ValueError(f"cover has {len(x.weights)} weights for n = {f.n}")
    if any(w < 0 for w in x.weights):
        return False
    if not x.total < s:
        return False
    # scale to integers and group equal weights
    scale = lcm(*(w.denominator for w in x.weights)) if x.weights else 1
    levels: dict[int, int] = {}
    for e, w in enumerate(x.weights):
        iw = int(w * scale)
        levels[iw] = levels.get(iw, 0) | (1 << e)
    weight = np.zeros(len(f), dtype=np.int64)
    for iw, bm in levels.items():
        weight += popcount(f.masks & np.uint64(bm)) * iw
    return bool(np.all(weight >= scale))


def verify_cover_rule(rule: BlockRule, x: FractionalCover, s: int) -> bool:
    """verify_cover for a rule-described family, exact for any n <= 62.

    Members are grouped by how many elements they take from each cell of
    the common refinement of the rule's blocks and the cover's constant
    stretches; within a group all members have the same weight.
    """
    if len(x.weights) != rule.n:
        raise ValueError(f"cover has {len(x.weights)} weights for n = {rule.n}")
    if any(w < 0 for w in x.weights) or not x.total < s:
        return False
    cuts = {0, rule.n}
    pos = 0
    for b in rule.blocks:
        pos += b
        cuts.add(pos)
    for e in range(1, rule.n):
        if x.weights[e] != x.weights[e - 1]:
            cuts.add(e)
    cuts = sorted(cuts)
    cells = [(a, b) for a, b in zip(cuts, cuts[1:]) if b > a]
    block_ends = []
    pos = 0
    for b in rule.blocks:
        pos += b
        block_ends.append(pos)
    for counts in product(*(range(b - a + 1) for a, b in cells)):
        coarse = [0] * len(rule.blocks)
        for (a, _), t in zip(cells, counts):
            idx = next(i for i, end in enumerate(block_ends) if a < end)
            coarse[idx] += t
        k = sum(counts)
        if rule.accept(k, tuple(coarse)):
            w = sum((x.weights[a] * t for (a, _), t in zip(cells, counts)), Fraction(0))
            if w < 1:
                return False
    return True
