from fractions import Fraction
from math import sqrt

import pytest

from matchfree import montecarlo
from matchfree.montecarlo import even_matchings, mc_even, mc_odd, x_members


def within(est, sigmas=4.0):
    return abs(est.z_score) <= sigmas


def test_odd_target_and_window():
    est = mc_odd(2, 2, 3, 10**6)
    assert est.target == Fraction(1, 18)
    assert within(est)
    assert est.estimate == Fraction(est.hits, est.trials)


def test_even_target_and_window():
    est = mc_even(2, 3, 4, 6, 10**6)
    assert est.stage_target == Fraction(4, 9)
    assert est.target == Fraction(4, 135)
    assert within(est)


def test_deterministic_per_seed():
    a = mc_odd(2, 2, 3, 200_000, seed=5)
    b = mc_odd(2, 2, 3, 200_000, seed=5)
    c = mc_odd(2, 2, 3, 200_000, seed=6)
    assert a == b and a.hits != c.hits


def test_independent_of_worker_count(monkeypatch):
    monkeypatch.setenv("MATCHFREE_THREADS", "1")
    one = mc_even(2, 3, 4, 6, 300_000)
    monkeypatch.setenv("MATCHFREE_THREADS", "4")
    monkeypatch.setattr(montecarlo.os, "cpu_count", lambda: 4)
    four = mc_even(2, 3, 4, 6, 300_000)
    assert one == four


def test_stage_probability_any_pair():
    # every element covered by the fixed matching is in Z equally often
    for x in (1, 3, 5):
        est = mc_odd(2, 3, 3, 200_000, probe=(x, 10, 11))
        p = float(est.stage_target)
        z = (est.stage_hits / est.trials - p) / sqrt(p * (1 - p) / est.trials)
        assert abs(z) <= 4


def test_d1_degenerate():
    est = mc_odd(2, 2, 1, 1000)
    assert est.hits == 0 and est.target == 0


def test_z_uniformity():
    est = mc_even(2, 3, 4, 6, 300_000)
    k = len(est.z_counts)
    p = 1 / k
    for cnt in est.z_counts:
        assert abs(cnt / est.trials - p) <= 4 * sqrt(p * (1 - p) / est.trials)


def test_fixed_side_does_not_matter():
    left = mc_odd(2, 3, 3, 400_000, fixed="left")
    right = mc_odd(2, 3, 3, 400_000, fixed="right")
    assert left.target == right.target
    assert within(left) and within(right)


def test_grid():
    for ell in range(1, 5):
        for d in (1, 3, 5):
            c = max(d - 1, 1)
            assert within(mc_odd(ell, c, d, 10**6)), (ell, d)
        for d in (2, 4, 6):
            c = d - 1
            xsize = 2 * ell + d - 2
            assert within(mc_even(ell, c, d, xsize, 10**6)), (ell, d)


def test_even_matchings_are_perfect():
    for ell in range(1, 4):
        for d in (2, 4, 6):
            top = 2 * ell + d - 1
            for x, pairs in even_matchings(ell, d).items():
                covered = sorted(e for pair in pairs for e in pair)
                assert covered == [e for e in range(1, top + 1) if e != x]
                assert len(pairs) == ell + (d - 2) // 2


def test_x_members():
    assert x_members(2, 4, 6) == [2, 3, 4, 5, 6, 7]
    assert x_members(2, 4, 7) == list(range(1, 8))


@pytest.mark.parametrize("call", [
    lambda: mc_odd(2, 2, 2, 10),
    lambda: mc_odd(2, 2, 5, 10),
    lambda: mc_even(2, 3, 3, 4, 10),
    lambda: mc_even(2, 3, 4, 8, 10),
    lambda: mc_odd(2, 2, 3, 0),
])
def test_validation(call):
    with pytest.raises(ValueError):
        call()
