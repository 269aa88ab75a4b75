from collections import deque
from itertools import combinations
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from matchfree.packing import nu
from matchfree.setfam import (Family, can_shift_to, doubling, elements_of, interval,
                              is_shifted, is_upset, make_params, mask_of, shift_closure,
                              shift_once, shiftable_pair_count, upset_closure, valid_params,
                              y_profile)


def families(max_n=6, allow_empty=False):
    @st.composite
    def build(draw):
        n = draw(st.integers(1, max_n))
        lo = 0 if allow_empty else 1
        masks = draw(st.sets(st.integers(lo, (1 << n) - 1), max_size=24))
        return Family(n, masks)
    return build()


class TestParams:
    def test_relations(self):
        p = make_params(3, 1)
        assert (p.s, p.c, p.ell, p.n) == (3, 1, 2, 7)
        for p in valid_params(30):
            assert p.n == 2 * p.s + p.c == 3 * p.s - p.ell
            assert p.c + p.ell == p.s

    @pytest.mark.parametrize("s,c", [(1, 1), (3, 0), (3, 3), (30, 5)])
    def test_rejects(self, s, c):
        with pytest.raises(ValueError):
            make_params(s, c)

    def test_width_check_can_be_skipped(self):
        assert make_params(30, 5, check_width=False).n == 65

    def test_grid_size(self):
        assert len(valid_params(9)) == 4


class TestMasks:
    def test_roundtrip(self):
        assert mask_of([1, 3]) == 0b101
        assert elements_of(0b101) == [1, 3]
        assert interval(2, 4) == 0b1110
        assert interval(3, 2) == 0

    def test_bad_element(self):
        with pytest.raises(ValueError):
            mask_of([0])


class TestFamily:
    def test_canonical(self):
        f = Family.from_sets(4, [[2, 3], [1]])
        g = Family(4, [mask_of([1]), mask_of([2, 3])])
        assert f == g and hash(f) == hash(g)
        assert list(f) == [1, 6]

    def test_rejects_duplicates_and_range(self):
        with pytest.raises(ValueError):
            Family(3, [1, 1])
        with pytest.raises(ValueError):
            Family(3, [8])
        with pytest.raises(ValueError):
            Family.from_sets(3, [[4]])

    def test_immutable(self):
        f = Family(3, [1])
        with pytest.raises(AttributeError):
            f.n = 4
        with pytest.raises(ValueError):
            f.masks[0] = 2

    def test_json_roundtrip(self):
        f = Family.from_sets(5, [[1, 2], [3], [2, 4, 5]])
        assert Family.from_json(f.to_json()) == f
        with pytest.raises(ValueError):
            Family.from_json({"sets": []})

    def test_membership(self):
        f = Family.from_sets(4, [[1, 2], [3]])
        assert mask_of([1, 2]) in f and mask_of([2]) not in f
        assert list(f.contains_many(np.array([3, 4, 5], dtype=np.uint64))) == [True, True, False]

    def test_all_sets_and_layers(self):
        f = Family.all_sets(5, 2, 3)
        assert len(f) == comb(5, 2) + comb(5, 3)
        assert len(f.layer(2)) == 10

    def test_y_profile(self):
        f = Family.all_sets(4, 2)
        assert y_profile(f) == [1, 4, 0, 0, 0]


class TestShifting:
    def test_shift_once_example(self):
        f = Family.from_sets(3, [[2, 3], [3]])
        g = shift_once(f, 1, 3)
        assert g == Family.from_sets(3, [[1, 2], [1]])

    def test_blocked_shift_stays(self):
        f = Family.from_sets(3, [[1], [2]])
        assert shift_once(f, 1, 2) == f

    def test_pair_validation(self):
        with pytest.raises(ValueError):
            shift_once(Family(3), 2, 2)

    def test_closure_is_shifted(self):
        rng = np.random.default_rng(1)
        for _ in range(30):
            masks = rng.choice(np.arange(1, 64), size=12, replace=False)
            g = shift_closure(Family(6, masks))
            assert is_shifted(g) and len(g) == 12

    @settings(max_examples=60, deadline=None)
    @given(families(6))
    def test_shift_preserves_size_and_nu(self, f):
        g = shift_closure(f)
        assert len(g) == len(f)
        assert nu(g)[0] <= nu(f)[0]

    @pytest.mark.parametrize("n", range(2, 9))
    def test_shiftable_pair_count(self, n):
        for i, j in combinations(range(1, n + 1), 2):
            brute = sum(1 for a, b in combinations(range(1, n + 1), 2) if a >= i and b >= j)
            assert shiftable_pair_count(n, i, j) == brute

    def test_can_shift_to_matches_bfs(self):
        for n in range(1, 8):
            for k in range(1, min(3, n) + 1):
                sets = [mask_of(c) for c in combinations(range(1, n + 1), k)]
                for a in sets:
                    seen, todo = {a}, deque([a])
                    while todo:
                        m = todo.popleft()
                        for j in elements_of(m):
                            for i in range(1, j):
                                if not m >> (i - 1) & 1:
                                    t = m ^ (1 << (j - 1)) ^ (1 << (i - 1))
                                    if t not in seen:
                                        seen.add(t)
                                        todo.append(t)
                    for b in sets:
                        assert can_shift_to(a, b) == (b in seen), (n, a, b)


class TestUpsets:
    def test_closure(self):
        f = upset_closure(Family.from_sets(3, [[1, 2]]))
        assert f == Family.from_sets(3, [[1, 2], [1, 2, 3]])
        assert is_upset(f)
        assert not is_upset(Family.from_sets(3, [[1]]))


class TestDoubling:
    @settings(max_examples=60, deadline=None)
    @given(families(6))
    def test_doubles_size_keeps_nu(self, f):
        g = doubling(f)
        assert len(g) == 2 * len(f)
        assert nu(g)[0] == nu(f)[0]

    def test_rejects_empty_set(self):
        with pytest.raises(ValueError):
            doubling(Family(3, [0, 1]))
