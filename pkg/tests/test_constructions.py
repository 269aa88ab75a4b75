from fractions import Fraction
from math import comb

import pytest

from matchfree.constructions import (FOUR_KINDS, BlockRule, FamilyKind, FractionalCover,
                                     certificate_for, family_A, family_kleitman, family_of,
                                     family_P, family_P_general, family_Pprime, family_Q,
                                     family_W, kleitman_m, rule_for, verify_cover,
                                     verify_cover_rule)
from matchfree.formulas import kleitman_value
from matchfree.packing import has_s_matching, nu
from matchfree.setfam import is_shifted, is_upset, make_params, valid_params, y_profile


def test_sizes_at_3_1():
    assert [len(g(3, 1)) for g in (family_P, family_Pprime, family_Q, family_W)] == [105, 102, 104, 104]


def test_y_profiles_at_3_1():
    assert y_profile(family_P(3, 1))[:4] == [1, 7, 15, 0]
    assert y_profile(family_Q(3, 1))[:4] == [1, 7, 15, 1]


@pytest.mark.parametrize("p", valid_params(12), ids=lambda p: f"s{p.s}c{p.c}")
def test_generators_shifted_upsets_without_small_sets(p):
    for kind in FOUR_KINDS:
        f = family_of(kind, p)
        assert is_shifted(f) and is_upset(f)
        assert y_profile(f)[:2] == [1, p.n]


@pytest.mark.parametrize("p", valid_params(16), ids=lambda p: f"s{p.s}c{p.c}")
def test_layer_counts_match_brute_force(p):
    for kind in FOUR_KINDS:
        rule = rule_for(kind, p)
        assert sum(rule.layer_count(k) for k in range(p.n + 1)) == rule.count_members()


def test_block_rule_validation():
    with pytest.raises(ValueError):
        BlockRule(5, (2, 2), lambda k, t: True)


@pytest.mark.parametrize("s,c", [(3, 1), (3, 2), (4, 1), (4, 2), (4, 3)])
def test_matching_number_is_s_minus_1(s, c):
    p = make_params(s, c)
    for kind in FOUR_KINDS:
        assert nu(family_of(kind, p))[0] == s - 1


@pytest.mark.parametrize("p", valid_params(14), ids=lambda p: f"s{p.s}c{p.c}")
def test_certificates_enumerated(p):
    for kind in FOUR_KINDS:
        cover = certificate_for(kind, p)
        assert cover.total < p.s
        assert verify_cover(family_of(kind, p), cover, p.s)


def test_certificates_by_rule_full_range():
    for p in valid_params(62):
        for kind in FOUR_KINDS:
            assert verify_cover_rule(rule_for(kind, p), certificate_for(kind, p), p.s)


def test_cover_rejections():
    p = make_params(3, 1)
    f = family_P(3, 1)
    heavy = FractionalCover(tuple([Fraction(1, 2)] * 7))   # total 7/2 >= 3
    assert not verify_cover(f, heavy, 3)
    light = FractionalCover(tuple([Fraction(1, 4)] * 7))   # triples weigh 3/4
    assert not verify_cover(f, light, 3)
    assert not verify_cover_rule(rule_for("P", p), light, 3)
    with pytest.raises(ValueError):
        verify_cover(f, FractionalCover((Fraction(1),)), 3)


def test_p_general_matches_p():
    # m = 2 is the three-layer regime
    assert family_P_general(3, 2, 2) == family_P(3, 1)


def test_p_general_matching_free():
    for s, m, ell in [(2, 3, 1), (3, 3, 2), (3, 2, 3)]:
        f = family_P_general(s, m, ell)
        assert has_s_matching(f, s) is None


def test_family_A_sizes():
    # 2-uniform, n = 6, nu < 3: A_1 meets [2], A_2 lives in [5]
    assert len(family_A(6, 2, 1, 3)) == comb(6, 2) - comb(4, 2) == 9
    assert len(family_A(6, 2, 2, 3)) == comb(5, 2) == 10
    for i in (1, 2):
        assert has_s_matching(family_A(6, 2, i, 3), 3) is None


@pytest.mark.parametrize("n,s", [(5, 2), (6, 2), (8, 3), (9, 3), (11, 3), (12, 4)])
def test_kleitman_family(n, s):
    f = family_kleitman(n, s)
    assert len(f) == kleitman_value(n, s)
    assert has_s_matching(f, s) is None


def test_kleitman_m():
    assert kleitman_m(5, 2) == (3, False)
    assert kleitman_m(6, 2) == (3, True)
    with pytest.raises(ValueError):
        kleitman_m(7, 3)


def test_kind_names():
    assert [k.value for k in FOUR_KINDS] == ["P", "Pprime", "Q", "W"]
    with pytest.raises(ValueError):
        rule_for(FamilyKind.A, make_params(3, 1))
