from math import comb

import pytest

from matchfree.constructions import family_A, family_P
from matchfree.formulas import kleitman_value
from matchfree.oracle import (OracleMode, _full_ihs, blocker_is_minimal, complement_of,
                              e_exact, ek_exact, shifted_optima, truncated_formula,
                              verify_main_theorem, verify_truncated)
from matchfree.packing import has_s_matching
from matchfree.setfam import Family, make_params, mask_of


def test_anchor_5_2_full():
    res = e_exact(5, 2, "full_ihs")
    assert res.value == 16 == kleitman_value(5, 2)
    assert 2**5 - 1 - len(res.blocker) == res.value
    assert res.mode is OracleMode.FULL_IHS


def test_anchor_7_3_shifted():
    res = e_exact(7, 3)
    assert res.value == 105 == len(family_P(3, 1))
    assert complement_of(res.blocker) == family_P(3, 1)


def test_anchor_7_3_truncated():
    res = e_exact(7, 3, "truncated", 3)
    assert res.value == 41
    assert len(res.blocker) + 1 == 23      # counting the empty set
    assert blocker_is_minimal(res, 3, max_layer=3)


@pytest.mark.parametrize("n", range(2, 7))
def test_full_and_shifted_agree(n):
    for s in range(1, n + 2):
        full = e_exact(n, s, "full_ihs")
        shifted = e_exact(n, s, "shifted_upset")
        assert full.value == shifted.value, (n, s)
        assert blocker_is_minimal(full, s) and blocker_is_minimal(shifted, s)
        assert has_s_matching(complement_of(full.blocker), s) is None


@pytest.mark.parametrize("n,s", [(4, 2), (5, 2), (5, 3), (6, 3), (6, 4)])
def test_ihs_iteration_ceiling(n, s):
    blocker, iterations, constraints = _full_ihs(n, s)
    assert 0 < iterations <= max(1, len(blocker) * constraints)
    assert e_exact(n, s, "full_ihs").iterations == iterations


def test_infeasible_s_returns_universe():
    res = e_exact(4, 5)
    assert res.value == 15 and len(res.blocker) == 0


def test_limits():
    with pytest.raises(ValueError):
        e_exact(7, 2, "full_ihs")
    with pytest.raises(ValueError):
        e_exact(10, 3)
    with pytest.raises(ValueError):
        e_exact(11, 3, "truncated", 3)
    with pytest.raises(ValueError):
        e_exact(6, 2, "shifted_upset", 3)
    with pytest.raises(ValueError):
        ek_exact(13, 2, 3)


def test_deterministic_witness():
    assert e_exact(8, 3).blocker == e_exact(8, 3).blocker


def test_monotone_in_n():
    values = {(n, s): e_exact(n, s).value for n in range(2, 9) for s in range(2, n + 1)}
    for (n, s), v in values.items():
        if (n + 1, s) in values:
            assert values[(n + 1, s)] >= 2 * v


@pytest.mark.parametrize("n,k,s,expected", [
    (6, 2, 3, 10),
    (6, 3, 2, 10),
    (9, 3, 3, 56),
])
def test_ek_examples(n, k, s, expected):
    assert ek_exact(n, k, s) == expected


def test_ek_9_3_3_matches_constructions():
    best = max(len(family_A(9, 3, i, 3)) for i in (1, 3))
    assert ek_exact(9, 3, 3) == best
    assert len(family_A(9, 3, 1, 3)) == comb(9, 3) - comb(7, 3)


@pytest.mark.parametrize("s,c", [(2, 1), (3, 1), (3, 2)])
def test_main_theorem(s, c):
    assert verify_main_theorem(s, c)


def test_unique_shifted_optimum_at_3_1():
    opts = shifted_optima(7, 3)
    assert len(opts) == 1 and complement_of(opts[0]) == family_P(3, 1)


@pytest.mark.parametrize("s,c", [(3, 1), (3, 2)])
def test_truncated(s, c):
    assert verify_truncated(s, c)


def test_truncated_formula_at_3_1():
    assert truncated_formula(make_params(3, 1)) == 41


def test_truncated_fails_at_s_2():
    # the star at 1 inside the first three layers beats every generator
    p = make_params(2, 1)
    star = Family(5, [m for m in range(1, 32) if m & 1 and m.bit_count() <= 3])
    assert len(star) == 11 and has_s_matching(star, 2) is None
    assert truncated_formula(p) == 10
    assert e_exact(5, 2, "truncated", 3).value == 11
    assert not verify_truncated(2, 1)


def test_blocker_minimality_detects_slack():
    res = e_exact(5, 2)
    padded = Family(5, list(res.blocker) + [mask_of([1, 2, 3, 4, 5])])
    fake = type(res)(res.value - 1, padded, res.iterations, res.mode)
    assert not blocker_is_minimal(fake, 2)
