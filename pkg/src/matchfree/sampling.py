"""Random families for property tests and the bounds suite."""

from __future__ import annotations

import numpy as np

from .oracle import matching_free
from .setfam import Family

DEFAULT_SEED = 0x5EED


def forced_by(n: int, mask: int) -> list[int]:
    """Sets a shifted up-set must contain once it contains ``mask``:
    one-step left shifts and one-element supersets."""
    out = []
    for b in range(1, n):
        if mask >> b & 1 and not mask >> (b - 1) & 1:
            out.append(mask ^ (3 << (b - 1)))
    for b in range(n):
        if not mask >> b & 1:
            out.append(mask | 1 << b)
    return out


def shifted_upset_closure(n: int, masks) -> set[int]:
    members = set()
    todo = [int(m) for m in masks]
    while todo:
        m = todo.pop()
        if m not in members:
            members.add(m)
            todo.extend(forced_by(n, m))
    return members


def random_shifted_upset(n: int, s: int, rng: np.random.Generator,
                         singleton_free: bool = True) -> Family:
    """Add the closures of random sets while no s-matching appears.

    A random stopping time keeps small families in the mix; without it
    the walk nearly always ends at a maximal family.
    """
    low = 2 if singleton_free else 1
    cands = [m for m in range(1, 1 << n) if m.bit_count() >= low]
    order = rng.permutation(len(cands))
    stop = int(rng.integers(1, len(cands) + 1))
    members: set[int] = set()
    for step, i in enumerate(order):
        if step >= stop:
            break
        m = cands[i]
        if m in members:
            continue
        grown = members | shifted_upset_closure(n, [m])
        if matching_free(grown, s):
            members = grown
    return Family(n, sorted(members))


def random_family(n: int, rng: np.random.Generator, density: float | None = None,
                  allow_empty: bool = False) -> Family:
    """Each set kept independently; density drawn at random when omitted."""
    if density is None:
        density = float(rng.uniform(0.05, 0.6))
    arr = np.arange(0 if allow_empty else 1, 1 << n, dtype=np.uint64)
    return Family(n, arr[rng.random(arr.size) < density])


def rng_for(seed: int = DEFAULT_SEED) -> np.random.Generator:
    return np.random.Generator(np.random.SFC64(seed))
