from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from matchfree.packing import has_s_matching, minimal_members, nu
from matchfree.setfam import Family


def brute_nu(f: Family) -> int:
    masks = list(f)
    best = 0
    for k in range(1, len(masks) + 1):
        found = False
        for combo in combinations(masks, k):
            acc, ok = 0, True
            for m in combo:
                if acc & m:
                    ok = False
                    break
                acc |= m
            if ok:
                found = True
                break
        if not found:
            break
        best = k
    return best


@st.composite
def small_families(draw):
    n = draw(st.integers(1, 6))
    masks = draw(st.sets(st.integers(1, (1 << n) - 1), max_size=12))
    return Family(n, masks)


@settings(max_examples=150, deadline=None)
@given(small_families())
def test_nu_matches_brute_force(f):
    value, witness = nu(f)
    assert value == brute_nu(f)
    acc = 0
    for m in witness.sets:
        assert m in f and not acc & m
        acc |= m
    assert len(set(witness.sets)) == len(witness.sets) == value


@settings(max_examples=80, deadline=None)
@given(small_families(), st.integers(1, 4))
def test_has_s_matching_agrees(f, s):
    w = has_s_matching(f, s)
    assert (w is not None) == (brute_nu(f) >= s)
    if w is not None:
        assert len(w.sets) == s


def test_empty_set_refused_by_default():
    f = Family(3, [0, 1, 2])
    with pytest.raises(ValueError):
        nu(f)
    value, witness = nu(f, allow_empty=True)
    assert value == 3 and 0 in witness.sets


def test_minimal_members():
    f = Family.from_sets(4, [[1], [1, 2], [2, 3], [2, 3, 4], [4]])
    assert sorted(minimal_members(f)) == sorted([0b1, 0b110, 0b1000])


def test_minimal_members_large_family():
    # big enough for the dense subset transform
    rng = np.random.default_rng(3)
    arr = np.unique(rng.integers(1, 1 << 14, size=6000).astype(np.uint64))
    mins = set(minimal_members(Family(14, arr)))
    brute = {int(m) for m in arr
             if not np.any(((arr & m) == arr) & (arr != m))}
    assert mins == brute


def test_all_sets_nu():
    assert nu(Family.all_sets(7, 1))[0] == 7
    assert nu(Family.all_sets(7, 3))[0] == 2
