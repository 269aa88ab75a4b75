"""Exact e(n, s) and friends at desk scale.

Two independent engines:

* ``full_ihs`` solves the minimum blocker problem over all nonempty subsets
  of [n] by implicit hitting sets: find an s-matching among the sets not
  yet blocked, add it as a constraint, re-solve the hitting set exactly.
* ``shifted_upset`` (and its truncated and uniform variants) searches
  shifted up-sets directly. Masks are visited in a topological order of
  the "is forced by" relation (left shifts and supersets), so choosing a
  set forces its whole closure and rejecting a set is always consistent.

The empty set is never part of the universe.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from enum import Enum
from math import comb

import numpy as np

from .constructions import FOUR_KINDS, rule_for
from .formulas import nkm_minima
from .packing import has_s_matching
from .setfam import Family, make_params, popcount

FULL_MAX_N = 6
SHIFTED_MAX_N = 9
TRUNCATED_MAX_N = 10
UNIFORM_MAX_N = 12


class OracleMode(str, Enum):
    FULL_IHS = "full_ihs"
    SHIFTED_UPSET = "shifted_upset"
    TRUNCATED = "truncated"


@dataclass(frozen=True)
class OracleResult:
    value: int
    blocker: Family
    iterations: int
    mode: OracleMode

    def to_json(self) -> dict:
        return {"value": self.value, "blocker": self.blocker.to_json(),
                "iterations": self.iterations, "mode": self.mode.value}


def _universe(n: int, max_layer: int | None = None, layer: int | None = None) -> list[int]:
    arr = np.arange(1, 1 << n, dtype=np.uint64)
    pc = popcount(arr)
    if layer is not None:
        arr = arr[pc == layer]
    elif max_layer is not None:
        arr = arr[pc <= max_layer]
    return [int(m) for m in arr]


# --- matching check on small python-int families ---------------------------

def _has_matching(cands: list[int], k: int) -> bool:
    if k == 0:
        return True
    for i, m in enumerate(cands):
        if len(cands) - i < k:
            return False
        rest = [x for x in cands[i + 1:] if not x & m]
        if len(rest) >= k - 1 and _has_matching(rest, k - 1):
            return True
    return False


def matching_free(members: set[int], s: int) -> bool:
    """Pure-python check for small families given as a set of masks."""
    mins = []
    for m in members:
        b = m
        minimal = True
        while b:
            low = b & -b
            b ^= low
            if m ^ low in members:
                minimal = False
                break
        if minimal:
            mins.append(m)
    mins.sort(key=int.bit_count)
    return not _has_matching(mins, s)


# --- shifted up-set search -------------------------------------------------

def _incumbent(n: int, s: int, universe: list[int]) -> int:
    """Blocker size of the best simple shifted candidate; an upper bound."""
    arr = np.array(universe, dtype=np.uint64)
    size = popcount(arr)
    cands = []
    for m in range(1, n + 1):
        cands.append(size >= m)
        for j in range(1, n):
            head = popcount(arr & np.uint64((1 << j) - 1))
            cands.append(head >= m)
            cands.append(size + head >= m + 1)
    if 2 * s < n < 3 * s:
        p = make_params(s, n - 2 * s)
        cands.extend(rule_for(k, p).member_mask(arr) for k in FOUR_KINDS)
    best = len(universe)
    for keep in cands:
        fam = Family(n, arr[keep])
        if len(universe) - len(fam) < best and has_s_matching(fam, s) is None:
            best = len(universe) - len(fam)
    return best


def _partitions(n: int, s: int) -> list[list[int]]:
    """Unordered partitions of the mask 2^n - 1 into s nonempty masks."""
    out = []

    def rec(rest: int, k: int, parts: list[int]) -> None:
        if k == 1:
            out.append(parts + [rest])
            return
        low = rest & -rest        # the part holding the lowest element
        others = rest ^ low
        sub = others
        while True:
            part = low | sub
            if part != rest:
                rec(rest ^ part, k - 1, parts + [part])
            if sub == 0:
                break
            sub = (sub - 1) & others

    rec((1 << n) - 1, s, [])
    return out


class _ShiftedSearch:
    def __init__(self, n: int, s: int, universe: list[int], up_closed: bool = False):
        self.n, self.s, self.u = n, s, universe
        idx = {m: i for i, m in enumerate(universe)}
        # an up-set over all of 2^[n] has an s-matching iff it holds an
        # s-partition of [n]; partitions sharing no undecided member each
        # force a separate exclusion
        self.parts: list[int] = []
        if up_closed and s <= n:
            for part in _partitions(n, s):
                bits = 0
                for m in part:
                    bits |= 1 << idx[m]
                self.parts.append(bits)
        self.inbits = 0
        self.outbits = 0
        self.succ: list[list[int]] = []
        indeg = [0] * len(universe)
        for m in universe:
            out = set()
            for b in range(1, n):
                if m >> b & 1 and not m >> (b - 1) & 1:
                    out.add(m ^ (3 << (b - 1)))
            for b in range(n):
                if not m >> b & 1 and (m | 1 << b) in idx:
                    out.add(m | 1 << b)
            targets = [idx[t] for t in out if t in idx]
            self.succ.append(targets)
            for t in targets:
                indeg[t] += 1
        order = [i for i, d in enumerate(indeg) if d == 0]
        for i in order:        # Kahn: order grows while we walk it
            for j in self.succ[i]:
                indeg[j] -= 1
                if indeg[j] == 0:
                    order.append(j)
        self.order = order
        self.state = [0] * len(universe)
        self.members: set[int] = set()
        self.nodes = 0

    def _close(self, i: int, trail: list[int]) -> None:
        todo = [i]
        while todo:
            j = todo.pop()
            if self.state[j] == 0:
                self.state[j] = 1
                trail.append(j)
                self.members.add(self.u[j])
                self.inbits |= 1 << j
                todo.extend(self.succ[j])

    def _undo(self, trail: list[int]) -> None:
        for j in trail:
            self.state[j] = 0
            self.members.discard(self.u[j])
            self.inbits &= ~(1 << j)

    def _forced_outs(self) -> int:
        used, lb = 0, 0
        for p in self.parts:
            if p & self.outbits:
                continue
            und = p & ~self.inbits
            if not und & used:
                used |= und
                lb += 1
        return lb

    def run(self, bound: int, ties: bool) -> tuple[int, list[tuple[int, ...]]]:
        """Minimum blocker size and optimal blockers.

        Leaves are reached in lexicographic order of the exclusion vector
        (indexed by the topological order, "in" before "out"). Without
        ``ties`` the search keeps only the first leaf at each new optimum,
        which is the lexicographically least optimal vector; with ``ties``
        it keeps every optimal blocker.
        """
        best = [bound]
        sols: list[tuple[int, ...]] = []
        size = len(self.u)

        def limit() -> int:
            return best[0] - 1 if sols and not ties else best[0]

        def rec(pos: int, out: int) -> None:
            self.nodes += 1
            while pos < size and self.state[self.order[pos]] != 0:
                pos += 1
            if pos == size:
                if out < best[0]:
                    best[0] = out
                    sols.clear()
                if out == best[0]:
                    sols.append(tuple(sorted(self.u[j] for j in range(size) if self.state[j] == -1)))
                return
            cap = limit()
            if out == cap:
                # no more exclusions allowed: everything left goes in
                trail: list[int] = []
                for p in range(pos, size):
                    if self.state[self.order[p]] == 0:
                        self._close(self.order[p], trail)
                if matching_free(self.members, self.s):
                    rec(size, out)
                self._undo(trail)
                return
            if out > cap or self.parts and out + self._forced_outs() > cap:
                return
            i = self.order[pos]
            trail = []
            self._close(i, trail)
            if matching_free(self.members, self.s):
                rec(pos + 1, out)
            self._undo(trail)
            if out + 1 > limit():
                return
            self.state[i] = -1
            self.outbits |= 1 << i
            rec(pos + 1, out + 1)
            self.state[i] = 0
            self.outbits &= ~(1 << i)

        old = sys.getrecursionlimit()
        sys.setrecursionlimit(max(old, 4 * size + 1000))
        try:
            rec(0, 0)
        finally:
            sys.setrecursionlimit(old)
        return best[0], sols


def _shifted_optimum(n: int, s: int, universe: list[int], uniform: bool = False,
                     ties: bool = False):
    bound = len(universe) if uniform else _incumbent(n, s, universe)
    search = _ShiftedSearch(n, s, universe, up_closed=len(universe) == (1 << n) - 1)
    value, sols = search.run(bound, ties)
    if not sols:
        raise RuntimeError("shifted search found no solution within its own incumbent")
    return value, sols, search.nodes


def shifted_optima(n: int, s: int, max_layer: int | None = None) -> list[Family]:
    """Every optimal blocker among shifted up-sets, lexicographically sorted."""
    _check_shifted(n, s, max_layer)
    u = _universe(n, max_layer)
    if s > n or s > len(u):
        return [Family(n)]
    _, sols, _ = _shifted_optimum(n, s, u, ties=True)
    return [Family(n, b) for b in sorted(sols)]


def _check_shifted(n: int, s: int, max_layer: int | None) -> None:
    if s < 1 or n < 1:
        raise ValueError(f"need n >= 1 and s >= 1, got n={n}, s={s}")
    limit = SHIFTED_MAX_N if max_layer is None else TRUNCATED_MAX_N
    if n > limit:
        raise ValueError(f"n = {n} exceeds the limit {limit} for this mode")


# --- implicit hitting sets -------------------------------------------------

def _min_hitting_set(constraints: list[int], width: int, upper: int) -> int:
    """Exact minimum hitting set over elements 0..width-1, constraints as
    bitmasks. ``upper`` is the size of some known hitting set."""
    degree = [0] * width
    for c in constraints:
        b = c
        while b:
            low = b & -b
            degree[low.bit_length() - 1] += 1
            b ^= low
    best_size = [upper + 1]
    best = [0]

    def lower_bound(unhit: list[int], banned: int) -> int:
        # constraints pairwise disjoint on allowed elements need one pick each
        used, lb = 0, 0
        for c in sorted(unhit, key=lambda c: (c & ~banned).bit_count()):
            avail = c & ~banned
            if not avail & used:
                used |= avail
                lb += 1
        return lb

    def rec(unhit: list[int], chosen: int, nchosen: int, banned: int) -> None:
        if not unhit:
            best_size[0], best[0] = nchosen, chosen
            return
        if nchosen + lower_bound(unhit, banned) >= best_size[0]:
            return
        pick = min(unhit, key=lambda c: (c & ~banned).bit_count())
        avail = pick & ~banned
        elems = []
        while avail:
            low = avail & -avail
            elems.append(low.bit_length() - 1)
            avail ^= low
        elems.sort(key=lambda e: -degree[e])
        for e in elems:
            bit = 1 << e
            rec([c for c in unhit if not c & bit], chosen | bit, nchosen + 1, banned)
            banned |= bit   # later branches assume e is not chosen

    rec(list(constraints), 0, 0, 0)
    return best[0]


def _full_ihs(n: int, s: int, per_round: int = 8) -> tuple[list[int], int, int]:
    """(blocker, iterations, constraints collected)."""
    u = _universe(n)
    pos = {m: i for i, m in enumerate(u)}
    arr = np.array(u, dtype=np.uint64)
    constraints: list[int] = []
    seen: set[int] = set()
    hitting = 0
    iterations = 0
    while True:
        iterations += 1
        blocked = np.array([bool(hitting >> i & 1) for i in range(len(u))])
        avail = arr[~blocked]
        added = 0
        fam_mask = np.ones(avail.size, dtype=bool)
        while added < per_round:
            w = has_s_matching(Family(n, avail[fam_mask]), s)
            if w is None:
                break
            c = 0
            for m in w.sets:
                c |= 1 << pos[m]
            if c not in seen:
                seen.add(c)
                constraints.append(c)
                added += 1
            # look for another matching avoiding this one's sets
            fam_mask &= ~np.isin(avail, np.array(w.sets, dtype=np.uint64))
        if not added:
            return [u[i] for i in range(len(u)) if hitting >> i & 1], iterations, len(constraints)
        # repair the old hitting set into an incumbent for the new system
        inc = hitting
        for c in constraints:
            if not c & inc:
                inc |= c & -c
        hitting = _min_hitting_set(constraints, len(u), inc.bit_count())


# --- public API ------------------------------------------------------------

def e_exact(n: int, s: int, mode: OracleMode | str = OracleMode.SHIFTED_UPSET,
            max_layer: int | None = None) -> OracleResult:
    mode = OracleMode(mode)
    if mode is OracleMode.TRUNCATED and max_layer is None:
        max_layer = 3
    if mode is not OracleMode.TRUNCATED and max_layer is not None:
        raise ValueError("max_layer is only meaningful in truncated mode")
    if s < 1 or n < 1:
        raise ValueError(f"need n >= 1 and s >= 1, got n={n}, s={s}")
    if mode is OracleMode.FULL_IHS:
        if n > FULL_MAX_N:
            raise ValueError(f"full_ihs mode needs n <= {FULL_MAX_N}, got {n}")
        u = _universe(n)
        if s > n:
            return OracleResult(len(u), Family(n), 0, mode)
        blocker, it, _ = _full_ihs(n, s)
        return OracleResult(len(u) - len(blocker), Family(n, blocker), it, mode)
    _check_shifted(n, s, max_layer)
    u = _universe(n, max_layer)
    if s > n:
        return OracleResult(len(u), Family(n), 0, mode)
    value, sols, nodes = _shifted_optimum(n, s, u)
    return OracleResult(len(u) - value, Family(n, min(sols)), nodes, mode)


def ek_exact(n: int, k: int, s: int) -> int:
    if not 1 <= k <= 3:
        raise ValueError(f"need 1 <= k <= 3, got {k}")
    if n > UNIFORM_MAX_N:
        raise ValueError(f"need n <= {UNIFORM_MAX_N}, got {n}")
    if s < 1 or n < s * k:
        raise ValueError(f"need s >= 1 and n >= s*k, got n={n}, k={k}, s={s}")
    u = _universe(n, layer=k)
    value, _, _ = _shifted_optimum(n, s, u, uniform=True)
    return len(u) - value


def complement_of(blocker: Family, max_layer: int | None = None) -> Family:
    u = np.array(_universe(blocker.n, max_layer), dtype=np.uint64)
    return Family(blocker.n, u[~blocker.contains_many(u)])


def blocker_is_minimal(res: OracleResult, s: int, max_layer: int | None = None) -> bool:
    """The complement is matching free and un-blocking any one set breaks that."""
    fam = complement_of(res.blocker, max_layer)
    if has_s_matching(fam, s) is not None:
        return False
    for m in res.blocker:
        grown = Family(fam.n, np.append(fam.masks, np.uint64(m)))
        if has_s_matching(grown, s) is None:
            return False
    return True


def verify_main_theorem(s: int, c: int) -> bool:
    """Shifted optimum equals 2^n - N and, for s >= 3, every shifted optimum
    is one of the largest generators. For s = 2 uniqueness is not claimed
    (the star at 1 is also optimal), so only the value is compared."""
    p = make_params(s, c)
    if p.n > SHIFTED_MAX_N:
        raise ValueError(f"n = {p.n} exceeds the limit {SHIFTED_MAX_N}")
    N = nkm_minima(p)[0]
    u = _universe(p.n)
    value, sols, _ = _shifted_optimum(p.n, s, u, ties=s >= 3)
    # the blocker misses the empty set, which every family here lacks too
    if len(u) - value != 2 ** p.n - N:
        return False
    gens = [rule_for(k, p).materialize() for k in FOUR_KINDS]
    top = max(len(g) for g in gens)
    winners = {g for g in gens if len(g) == top}
    if s < 3:
        return True
    return all(complement_of(Family(p.n, b)) in winners for b in sols)


def truncated_formula(p) -> int:
    """Optimum over nonempty sets of size <= 3: the <= 3 universe without
    the empty set, minus K with its empty-set term taken back out."""
    K = nkm_minima(p)[1]
    universe = sum(comb(p.n, i) for i in range(4)) - 1
    return universe - (K - 1)


def verify_truncated(s: int, c: int) -> bool:
    p = make_params(s, c)
    if p.n > TRUNCATED_MAX_N:
        raise ValueError(f"n = {p.n} exceeds the limit {TRUNCATED_MAX_N}")
    return e_exact(p.n, s, OracleMode.TRUNCATED, 3).value == truncated_formula(p)
