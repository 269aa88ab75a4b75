"""Set families over [n] encoded as bitmasks.

Element k of [n] is bit k-1. A family is a sorted, duplicate-free numpy
array of uint64 masks, so two families are equal iff their arrays are.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterable

import numpy as np

MAX_N = 62


@dataclass(frozen=True)
class Params:
    """The regime 2s < n < 3s written as n = 2s + c = 3s - ell."""

    s: int
    c: int
    ell: int
    n: int


def make_params(s: int, c: int, check_width: bool = True) -> Params:
    """Validated parameters; formula-only callers may skip the mask-width cap."""
    if s < 2:
        raise ValueError(f"s must be at least 2, got {s}")
    if not 1 <= c <= s - 1:
        raise ValueError(f"c must lie in [1, s-1] = [1, {s - 1}], got {c}")
    n = 2 * s + c
    if check_width and n > MAX_N:
        raise ValueError(f"ground set size n = {n} exceeds {MAX_N}")
    return Params(s=s, c=c, ell=s - c, n=n)


def valid_params(max_n: int = MAX_N, s_max: int | None = None) -> list[Params]:
    """All valid (s, c) with n <= max_n, ordered by (s, c)."""
    out = []
    s = 2
    while 2 * s + 1 <= max_n and (s_max is None or s <= s_max):
        for c in range(1, s):
            if 2 * s + c <= max_n:
                out.append(make_params(s, c))
        s += 1
    return out


# --- masks -----------------------------------------------------------------

def mask_of(elements: Iterable[int]) -> int:
    m = 0
    for e in elements:
        if e < 1:
            raise ValueError(f"elements are 1-based, got {e}")
        m |= 1 << (e - 1)
    return m


def elements_of(mask: int) -> list[int]:
    out = []
    k = 1
    while mask:
        if mask & 1:
            out.append(k)
        mask >>= 1
        k += 1
    return out


def interval(a: int, b: int) -> int:
    """Mask of [a, b] (empty when b < a)."""
    if b < a:
        return 0
    return ((1 << (b - a + 1)) - 1) << (a - 1)


def popcount(arr: np.ndarray) -> np.ndarray:
    return np.bitwise_count(arr).astype(np.int64)


# --- families --------------------------------------------------------------

class Family:
    """Immutable family of subsets of [n]."""

    __slots__ = ("n", "masks")

    def __init__(self, n: int, masks: Iterable[int] | np.ndarray = ()):
        if not 0 <= n <= MAX_N:
            raise ValueError(f"n must lie in [0, {MAX_N}], got {n}")
        if isinstance(masks, np.ndarray):
            arr = masks.astype(np.uint64, copy=True)
        else:
            arr = np.fromiter((int(m) for m in masks), dtype=np.uint64)
        arr.sort()
        if arr.size:
            if arr.size > 1 and np.any(arr[1:] == arr[:-1]):
                raise ValueError("family has duplicate members")
            if int(arr[-1]) >> n:
                raise ValueError(f"member uses an element outside [{n}]")
        arr.flags.writeable = False
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "masks", arr)

    def __setattr__(self, name, value):
        raise AttributeError("Family is immutable")

    @classmethod
    def from_sets(cls, n: int, sets: Iterable[Iterable[int]]) -> "Family":
        masks = []
        for s in sets:
            s = list(s)
            if any(e > n for e in s):
                raise ValueError(f"set {s} not contained in [{n}]")
            if len(set(s)) != len(s):
                raise ValueError(f"set {s} repeats an element")
            masks.append(mask_of(s))
        return cls(n, masks)

    @classmethod
    def all_sets(cls, n: int, min_size: int = 0, max_size: int | None = None) -> "Family":
        arr = np.arange(1 << n, dtype=np.uint64)
        pc = popcount(arr)
        keep = pc >= min_size
        if max_size is not None:
            keep &= pc <= max_size
        return cls(n, arr[keep])

    def __len__(self) -> int:
        return int(self.masks.size)

    def __iter__(self):
        return (int(m) for m in self.masks)

    def __contains__(self, mask: int) -> bool:
        i = int(np.searchsorted(self.masks, np.uint64(mask)))
        return i < self.masks.size and int(self.masks[i]) == mask

    def contains_many(self, queries: np.ndarray) -> np.ndarray:
        q = np.asarray(queries, dtype=np.uint64)
        if not self.masks.size:
            return np.zeros(q.shape, dtype=bool)
        idx = np.searchsorted(self.masks, q)
        idx = np.minimum(idx, self.masks.size - 1)
        return self.masks[idx] == q

    def __eq__(self, other) -> bool:
        if not isinstance(other, Family):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.masks, other.masks)

    def __hash__(self) -> int:
        return hash((self.n, self.masks.tobytes()))

    def __repr__(self) -> str:
        if len(self) <= 8:
            return f"Family(n={self.n}, sets={self.sets()})"
        return f"Family(n={self.n}, |F|={len(self)})"

    def sets(self) -> list[list[int]]:
        return [elements_of(m) for m in self]

    def layer(self, k: int) -> "Family":
        return Family(self.n, self.masks[popcount(self.masks) == k])

    def restrict(self, keep: np.ndarray) -> "Family":
        return Family(self.n, self.masks[keep])

    def to_json(self) -> dict:
        # 1-based sorted sets, ordered by mask value
        return {"n": self.n, "sets": self.sets()}

    @classmethod
    def from_json(cls, doc: dict | str) -> "Family":
        if isinstance(doc, str):
            doc = json.loads(doc)
        try:
            n = int(doc["n"])
            sets = doc["sets"]
        except (KeyError, TypeError) as exc:
            raise ValueError("family JSON needs keys 'n' and 'sets'") from exc
        return cls.from_sets(n, sets)


# --- shifting --------------------------------------------------------------

def _check_pair(n: int, i: int, j: int) -> None:
    if not 1 <= i < j <= n:
        raise ValueError(f"need 1 <= i < j <= n, got i={i}, j={j}, n={n}")


def shift_once(f: Family, i: int, j: int) -> Family:
    """The (i <- j)-shift: replace j by i wherever the result is new."""
    _check_pair(f.n, i, j)
    bi, bj = np.uint64(1 << (i - 1)), np.uint64(1 << (j - 1))
    arr = f.masks
    movable = ((arr & bj) != 0) & ((arr & bi) == 0)
    img = arr ^ (bi | bj)
    moves = movable & ~f.contains_many(img)
    if not moves.any():
        return f
    return Family(f.n, np.where(moves, img, arr))


def shift_closure(f: Family) -> Family:
    """Apply all shifts, pairs in lexicographic order, until nothing moves."""
    pairs = list(combinations(range(1, f.n + 1), 2))
    while True:
        before = f
        for i, j in pairs:
            f = shift_once(f, i, j)
        if f == before:
            return f


def is_shifted(f: Family) -> bool:
    arr = f.masks
    for i, j in combinations(range(1, f.n + 1), 2):
        bi, bj = np.uint64(1 << (i - 1)), np.uint64(1 << (j - 1))
        movable = ((arr & bj) != 0) & ((arr & bi) == 0)
        if movable.any() and not f.contains_many(arr[movable] ^ (bi | bj)).all():
            return False
    return True


def is_upset(f: Family) -> bool:
    arr = f.masks
    for b in range(f.n):
        bit = np.uint64(1 << b)
        free = (arr & bit) == 0
        if free.any() and not f.contains_many(arr[free] | bit).all():
            return False
    return True


def upset_closure(f: Family) -> Family:
    arr = f.masks
    while True:
        grown = np.unique(np.concatenate(
            [arr] + [arr | np.uint64(1 << b) for b in range(f.n)]))
        if grown.size == arr.size:
            return Family(f.n, arr)
        arr = grown


def y_profile(f: Family) -> list[int]:
    """y(i) = C(n, i) - |F^(i)|, the number of missing i-sets."""
    counts = np.bincount(popcount(f.masks), minlength=f.n + 1)
    return [comb(f.n, i) - int(counts[i]) for i in range(f.n + 1)]


def shiftable_pair_count(n: int, i: int, j: int) -> int:
    """Number of 2-sets {a, b}, a < b, with a >= i and b >= j."""
    _check_pair(n, i, j)
    num = (n + j - 2 * i) * (n - j + 1)
    assert num % 2 == 0
    return num // 2


def can_shift_to(a: int, b: int) -> bool:
    """True iff some sequence of shifts turns the set a into the set b."""
    ea, eb = elements_of(a), elements_of(b)
    return len(ea) == len(eb) and all(x >= y for x, y in zip(ea, eb))


def doubling(f: Family) -> Family:
    """{F subset of [n+1] : F meet [n] in f}."""
    if 0 in f:
        raise ValueError("doubling needs an empty-set-free family")
    if f.n + 1 > MAX_N:
        raise ValueError(f"doubling would exceed n = {MAX_N}")
    top = np.uint64(1 << f.n)
    return Family(f.n + 1, np.concatenate([f.masks, f.masks | top]))
