"""Monte Carlo checks of the random-matching probabilities behind the
y(3) bounds.

The generator is numpy's SFC64 (four 64-bit state words). Trials run in
fixed-size chunks and chunk i is seeded from SeedSequence(seed, spawn_key=(i,)),
so the hit count depends only on (seed, trials), never on how many worker
threads process the chunks.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, sqrt

import numpy as np

DEFAULT_SEED = 0x5EED
CHUNK = 1 << 16


@dataclass(frozen=True)
class McEstimate:
    trials: int
    hits: int
    estimate: Fraction
    target: Fraction
    z_score: float
    stage_hits: int = 0             # trials with the probe element left in Z
    stage_target: Fraction = Fraction(0)
    z_counts: tuple[int, ...] = field(default=())


def worker_count() -> int:
    cap = os.environ.get("MATCHFREE_THREADS")
    n = os.cpu_count() or 1
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            pass
    return n


def z_score(hits: int, trials: int, target: Fraction) -> float:
    p = float(target)
    if p in (0.0, 1.0):
        return 0.0 if hits == round(p * trials) else float("inf")
    return (hits / trials - p) / sqrt(p * (1 - p) / trials)


def _rng(seed: int, chunk: int) -> np.random.Generator:
    return np.random.Generator(np.random.SFC64(np.random.SeedSequence(seed, spawn_key=(chunk,))))


def _run_chunks(fn, trials: int, seed: int) -> list:
    sizes = [min(CHUNK, trials - lo) for lo in range(0, trials, CHUNK)]
    jobs = list(enumerate(sizes))
    workers = min(worker_count(), len(jobs))
    if workers <= 1:
        return [fn(_rng(seed, i), b) for i, b in jobs]
    with ThreadPoolExecutor(workers) as pool:
        return list(pool.map(lambda job: fn(_rng(seed, job[0]), job[1]), jobs))


def _fixed_and_y(ell: int, c: int, d: int, fixed: str) -> tuple[list[tuple[int, ...]], list[int]]:
    """The fixed (c-d+1) triples inside [2l+d, n] and the leftover Y."""
    n = 2 * ell + 3 * c
    ground = list(range(2 * ell + d, n + 1))
    t = 3 * (c - d + 1)
    if fixed == "left":
        used, y = ground[:t], ground[t:]
    elif fixed == "right":
        used, y = ground[len(ground) - t:], ground[:len(ground) - t]
    else:
        raise ValueError(f"fixed must be 'left' or 'right', got {fixed!r}")
    return [tuple(used[i:i + 3]) for i in range(0, t, 3)], y


def _match_hits(rng, zs: np.ndarray, x: int, y: np.ndarray, probe_y: tuple[int, int]) -> tuple[np.ndarray, np.ndarray]:
    """Pair Z row-wise with random pairs of Y; report x in Z and probe hits."""
    b = zs.shape[0]
    in_z = (zs == x)
    has = in_z.any(axis=1)
    if y.size == 0:
        return has, np.zeros(b, dtype=bool)
    yperm = rng.permuted(np.broadcast_to(y, (b, y.size)), axis=1)
    slot = in_z.argmax(axis=1)
    rows = np.arange(b)
    y1, y2 = yperm[rows, 2 * slot], yperm[rows, 2 * slot + 1]
    a, bb = probe_y
    pair_ok = ((y1 == a) & (y2 == bb)) | ((y1 == bb) & (y2 == a))
    return has, has & pair_ok


def mc_odd(ell: int, c: int, d: int, trials: int, seed: int = DEFAULT_SEED,
           probe: tuple[int, int, int] | None = None, fixed: str = "left") -> McEstimate:
    if d % 2 == 0:
        raise ValueError(f"d must be odd, got {d}")
    if not 1 <= d <= c + 1:
        raise ValueError(f"need 1 <= d <= c+1 = {c + 1}, got {d}")
    if ell < 1 or trials < 1:
        raise ValueError("need ell >= 1 and trials >= 1")
    k = (d - 1) // 2
    pairs = np.array([(i, 2 * ell + 2 * k + 1 - i) for i in range(1, ell + k + 1)])
    _, y = _fixed_and_y(ell, c, d, fixed)
    y = np.array(y, dtype=np.int64)
    if probe is None:
        probe = (1, *(y[:2].tolist() if y.size >= 2 else (0, 0)))
    x, py = probe[0], (probe[1], probe[2])
    if not 1 <= x <= 2 * ell + d - 1:
        raise ValueError(f"probe element {x} not in [2l+d-1]")

    def chunk(rng, b):
        # stage 2: keep l random pairs of pi_L, the other k form Z
        perm = rng.permuted(np.broadcast_to(np.arange(ell + k), (b, ell + k)), axis=1)
        zs = pairs[perm[:, :k]].reshape(b, 2 * k)
        has, hit = _match_hits(rng, zs, x, y, py)
        return int(has.sum()), int(hit.sum())

    res = _run_chunks(chunk, trials, seed)
    stage = sum(r[0] for r in res)
    hits = sum(r[1] for r in res)
    stage_target = Fraction(k, ell + k)
    target = stage_target / comb(2 * d - 2, 2) if d > 1 else Fraction(0)
    return McEstimate(trials, hits, Fraction(hits, trials), target,
                      z_score(hits, trials, target), stage, stage_target)


def even_matchings(ell: int, d: int) -> dict[int, list[tuple[int, int]]]:
    """For each x in [2l+d-1], a perfect matching of [2l+d-1] minus x,
    built from pi_2 by trading x's partner onto 2 (x = 1 trades 1 for 2)."""
    top = 2 * ell + d - 1
    pi2 = [(1, top)] + [(i, 2 * ell + d + 1 - i) for i in range(3, ell + d // 2 + 1)]
    out = {2: pi2}
    for x in [1] + list(range(3, top + 1)):
        out[x] = [tuple(sorted((2, b if a == x else a))) if x in (a, b) else (a, b)
                  for a, b in pi2]
    return out


def x_members(ell: int, d: int, xsize: int) -> list[int]:
    top = 2 * ell + d - 1
    if xsize <= top - 1:
        return list(range(2, xsize + 2))
    return list(range(1, top + 1))


def mc_even(ell: int, c: int, d: int, xsize: int, trials: int, seed: int = DEFAULT_SEED,
            probe: tuple[int, int, int] | None = None, fixed: str = "left") -> McEstimate:
    if d % 2:
        raise ValueError(f"d must be even, got {d}")
    if not 2 <= d <= c + 1:
        raise ValueError(f"need 2 <= d <= c+1 = {c + 1}, got {d}")
    if not 1 <= xsize <= 2 * ell + d - 1:
        raise ValueError(f"need 1 <= |X| <= 2l+d-1 = {2 * ell + d - 1}, got {xsize}")
    if ell < 1 or trials < 1:
        raise ValueError("need ell >= 1 and trials >= 1")
    k = (d - 2) // 2
    xs = x_members(ell, d, xsize)
    mats = even_matchings(ell, d)
    pis = np.array([mats[z] for z in xs]).reshape(len(xs), ell + k, 2)
    _, y = _fixed_and_y(ell, c, d, fixed)
    y = np.array(y, dtype=np.int64)
    if probe is None:
        probe = (xs[0], int(y[0]), int(y[1]))
    x, py = probe[0], (probe[1], probe[2])
    if x not in xs:
        raise ValueError(f"probe element {x} not in X = {xs}")
    xs_arr = np.array(xs)

    def chunk(rng, b):
        zi = rng.integers(0, len(xs), size=b)
        perm = rng.permuted(np.broadcast_to(np.arange(ell + k), (b, ell + k)), axis=1)
        dropped = pis[zi[:, None], perm[:, :k]].reshape(b, 2 * k)
        zs = np.concatenate([xs_arr[zi][:, None], dropped], axis=1)
        has, hit = _match_hits(rng, zs, x, y, py)
        return int(has.sum()), int(hit.sum()), np.bincount(zi, minlength=len(xs))

    res = _run_chunks(chunk, trials, seed)
    stage = sum(r[0] for r in res)
    hits = sum(r[1] for r in res)
    zc = tuple(int(v) for v in sum(r[2] for r in res))
    stage_target = Fraction(k * len(xs) + ell, (ell + k) * len(xs))
    target = stage_target / comb(2 * d - 2, 2)
    return McEstimate(trials, hits, Fraction(hits, trials), target,
                      z_score(hits, trials, target), stage, stage_target, zc)
