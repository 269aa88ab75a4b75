"""The d invariant and the lower bounds on y(2), y(3) that depend on it.

d(F) is the least d >= 0 at which a specific 2-set is missing from F:
for even d some {i, 2l+d+1-i} with i <= l + d/2, for odd d either
{1, 2l+d} or some {i, 2l+d+2-i} with 3 <= i <= l + (d+1)/2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .formulas import comp_sizes, y23_totals
from .packing import has_s_matching, nu
from .setfam import Family, Params, interval, is_shifted, is_upset, mask_of, popcount, y_profile

# The cubic bound from Frankl's lemma has denominator 6. A printed variant
# with denominator 2 is inconsistent with f(c) = yQ; see fg_report.
FRANKL_CUBIC_DENOMINATOR = 6
FRANKL_NOTE = ("cubic y(3) bound (2d+1)(3c-d)(3c-d-1)/6 uses denominator 6; "
               "the denominator-2 variant contradicts C(3c-d+1,3) - (c-d)C(3c-d,2) "
               "and the identity f(c) = yQ")


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class BoundReport:
    bound_name: str
    hypothesis_ok: bool
    bound_value: Fraction
    observed: int
    holds: bool
    note: str = ""


def _report(name: str, hyp: bool, bound, observed: int, note: str = "") -> BoundReport:
    bound = Fraction(bound)
    return BoundReport(name, hyp, bound, observed, (not hyp) or observed >= bound, note)


# --- d(F) ------------------------------------------------------------------

def condition_pairs(ell: int, d: int) -> list[tuple[int, int]]:
    """The 2-sets whose absence makes d satisfy the defining condition."""
    if d % 2 == 0:
        return [(i, 2 * ell + d + 1 - i) for i in range(1, ell + d // 2 + 1)]
    rest = [(i, 2 * ell + d + 2 - i) for i in range(3, ell + (d + 1) // 2 + 1)]
    return [(1, 2 * ell + d)] + rest


def monotone_condition(f: Family, p: Params, d: int) -> bool:
    """Whether the defining condition holds at exactly this d."""
    if d < 0:
        raise ValueError(f"d must be nonnegative, got {d}")
    pairs = condition_pairs(p.ell, d)
    if max(b for _, b in pairs) > f.n:
        raise ValueError(f"condition at d = {d} uses elements beyond n = {f.n}")
    return any(mask_of(pair) not in f for pair in pairs)


def d_of(f: Family, p: Params) -> int:
    if f.n != p.n:
        raise ValueError(f"family has n = {f.n}, parameters have n = {p.n}")
    d = 0
    while True:
        pairs = condition_pairs(p.ell, d)
        if max(b for _, b in pairs) > f.n:
            raise ValueError(f"no d qualifies before indices exceed n = {f.n}; "
                             "the family contains an s-matching of 2-sets")
        if any(mask_of(pair) not in f for pair in pairs):
            return d
        d += 1


# --- y(2) ------------------------------------------------------------------

def _ceil_half(d: int) -> int:
    return (d + 1) // 2


def y2_terms(ell: int, c: int, d: int) -> tuple[Fraction, Fraction]:
    """The two arguments of the y(2) minimum at d (any parity)."""
    first = Fraction((4 * ell + 3 * c + d - 2) * (3 * c - d + 1), 2)
    h = _ceil_half(d)
    second = Fraction((ell + 3 * c - h + 1) * (ell + 3 * c - h), 2)
    return first, second


def y2_lower(ell: int, c: int, d: int, parity_mode: str = "universal") -> Fraction:
    """Lower bound on y(2) for a shifted family with the given d.

    ``parity_mode`` is "even", "odd" or "universal"; the universal form
    with ceil(d/2) agrees with the parity-specific ones and is a minimum
    of the two terms (a maximum would exceed y_P(2) at d = 0).
    """
    if d < 0:
        raise ValueError(f"d must be nonnegative, got {d}")
    if parity_mode == "even" and d % 2:
        raise ValueError(f"even mode needs even d, got {d}")
    if parity_mode == "odd":
        if d % 2 == 0:
            raise ValueError(f"odd mode needs odd d, got {d}")
        if d > 2 * c:
            raise ValueError(f"odd mode needs d <= 2c = {2 * c}, got {d}")
    if parity_mode not in ("even", "odd", "universal"):
        raise ValueError(f"unknown parity mode {parity_mode!r}")
    return min(y2_terms(ell, c, d))


def y2_gap(ell: int, c: int, d: int) -> tuple[Fraction, Fraction]:
    """Slack budgets (against P', against P) for y(0)+y(1)+y(2)."""
    if not 0 <= d <= 2 * c:
        raise ValueError(f"need 0 <= d <= 2c = {2 * c}, got {d}")
    h = _ceil_half(d)
    return (Fraction((4 * ell + d - 3) * d, 2),
            Fraction((2 * ell + 6 * c - h + 1) * h, 2))


# --- y(3) ------------------------------------------------------------------

@dataclass(frozen=True)
class MenuEntry:
    name: str
    hypothesis: str
    value: Fraction | None
    hypothesis_ok: bool


def frankl_cubic(c: int, d: int, denominator: int = FRANKL_CUBIC_DENOMINATOR) -> Fraction:
    return Fraction((2 * d + 1) * (3 * c - d) * (3 * c - d - 1), denominator)


def even_x_bound(ell: int, d: int, xsize: int) -> Fraction:
    return xsize * comb(2 * d - 2, 2) * (
        1 - Fraction((2 * ell + d - 2) * (d - 2), (d - 2) * xsize + 2 * ell))


def y3_lower_menu(ell: int, c: int, d: int, xsize: int | None = None) -> list[MenuEntry]:
    s = ell + c
    even_ok = d % 2 == 0 and 2 <= d <= c + 1
    x = 2 * ell + d - 2 if xsize is None else xsize
    cor22 = None
    if d >= 2:
        cor22 = Fraction((2 * ell + d - 2) * (2 * d - 3)) / (
            1 + Fraction((d - 2) ** 2, 2 * ell * (d - 1)))
    return [
        MenuEntry("lemma17", "d(F) > 0 and nu(F) < s",
                  Fraction(comb(3 * c - 1, 2)), d > 0),
        MenuEntry("odd_packed", "d odd, d <= c+1, d(F) >= d, nu(F cap C([2l+d,n],3)) >= c-d+1",
                  Fraction((2 * ell + d - 1) * (2 * d - 3)), d % 2 == 1 and d <= c + 1),
        MenuEntry("even_packed_X", "d even in [2,c+1], d(F) >= d, X condition, packed 3-layer",
                  even_x_bound(ell, d, x) if even_ok and x > 0 else None, even_ok and x > 0),
        MenuEntry("even_corollary", "d(F) = d even in [2,c+1], shifted, packed 3-layer",
                  cor22, even_ok),
        MenuEntry("large_d", "d(F) >= c+2, shifted",
                  Fraction((2 * ell + c) * (2 * c - 1)), d >= c + 2),
        MenuEntry("small_c_shift", "2 <= d <= c, {i,2l+d+1-i} in F for i <= l, "
                  "nu(F cap C([2l+d+1,n],3)) >= c-d",
                  Fraction((2 * d - 1) * (s + 2 * c - 2 * d) + 1), 2 <= d <= c),
        MenuEntry("frankl_cubic", "1 <= d <= c, nu(F cap C([2l+d,n],3)) < c-d+1",
                  frankl_cubic(c, d) if 1 <= d <= c else None, 1 <= d <= c),
    ]


# --- auditing a family -----------------------------------------------------

def _triples_from(f: Family, a: int) -> Family:
    """F cap C([a, n], 3)."""
    outside = np.uint64(interval(1, a - 1))
    arr = f.masks
    keep = (popcount(arr) == 3) & ((arr & outside) == 0)
    return f.restrict(keep)


def _pairs_within(f: Family, ground: int) -> Family:
    arr = f.masks
    keep = (popcount(arr) == 2) & ((arr & ~np.uint64(ground)) == 0)
    return f.restrict(keep)


def x_set(f: Family, p: Params, d: int) -> list[int]:
    """Elements x of [2l+d-1] such that the 2-sets of F inside
    [2l+d-1] minus x contain an (l + (d-2)/2)-matching."""
    top = 2 * p.ell + d - 1
    need = p.ell + (d - 2) // 2
    out = []
    for x in range(1, top + 1):
        g = _pairs_within(f, interval(1, top) & ~(1 << (x - 1)))
        if need == 0 or has_s_matching(g, need) is not None:
            out.append(x)
    return out


def check_audit_preconditions(f: Family, p: Params) -> list[str]:
    problems = []
    if f.n != p.n:
        problems.append(f"family has n = {f.n}, parameters have n = {p.n}")
        return problems
    if 0 in f:
        problems.append("family contains the empty set")
    if len(f.layer(1)):
        problems.append("family contains 1-element sets")
    if not is_upset(f):
        problems.append("family is not an up-set")
    if not is_shifted(f):
        problems.append("family is not shifted")
    if 0 not in f and has_s_matching(f, p.s) is not None:
        problems.append(f"family has an {p.s}-matching")
    return problems


def audit_family(f: Family, p: Params) -> list[BoundReport]:
    problems = check_audit_preconditions(f, p)
    if problems:
        raise PreconditionError("; ".join(problems))
    ell, c, n, s = p.ell, p.c, p.n, p.s
    y = y_profile(f)
    y2, y3 = y[2], y[3]
    d = d_of(f, p)
    out = [_report("d_at_most_2c", True, d, 2 * c)]

    # y(2): even bound for every even d' >= d(F), parity bound at d(F)
    for dd in range(d + (d % 2), 2 * c + 1, 2):
        out.append(_report(f"y2_even[d={dd}]", True, y2_lower(ell, c, dd, "even"), y2))
    if d % 2:
        out.append(_report("y2_odd", True, y2_lower(ell, c, d, "odd"), y2))
    out.append(_report("y2_universal", True, y2_lower(ell, c, d), y2))
    gap_pp, gap_p = y2_gap(ell, c, d)
    cs = comp_sizes(p)
    low = y[0] + y[1] + y[2]
    # either compP' - low <= gapP' or compP - low <= gapP
    out.append(_report("y2_gap_disjunction", True,
                       min(cs.compPprime - gap_pp, cs.compP - gap_p), low))

    # y(3)
    packed_nu = {}

    def nu_triples(a: int) -> int:
        if a not in packed_nu:
            packed_nu[a] = nu(_triples_from(f, a))[0] if a <= n else 0
        return packed_nu[a]

    out.append(_report("y3_lemma17", d > 0, comb(3 * c - 1, 2), y3))
    for dd in range(1, min(d, c + 1) + 1, 2):
        hyp = nu_triples(2 * ell + dd) >= c - dd + 1
        out.append(_report(f"y3_odd_packed[d={dd}]", hyp,
                           (2 * ell + dd - 1) * (2 * dd - 3), y3))
    for dd in range(2, min(d, c + 1) + 1, 2):
        xs = x_set(f, p, dd)
        hyp = bool(xs) and nu_triples(2 * ell + dd) >= c - dd + 1
        bound = even_x_bound(ell, dd, len(xs)) if xs else Fraction(0)
        out.append(_report(f"y3_even_packed_X[d={dd},|X|={len(xs)}]", hyp, bound, y3))
    if d >= 2 and d % 2 == 0:
        xs = set(x_set(f, p, d))
        target = set(range(2, 2 * ell + d))
        out.append(_report("x_contains_2_to_2l+d-1", True, len(target),
                           len(xs & target)))
        if d <= c + 1:
            entry = next(e for e in y3_lower_menu(ell, c, d) if e.name == "even_corollary")
            hyp = nu_triples(2 * ell + d) >= c - d + 1
            out.append(_report("y3_even_corollary", hyp, entry.value, y3))
    out.append(_report("y3_large_d", d >= c + 2, (2 * ell + c) * (2 * c - 1), y3))
    for dd in range(2, c + 1):
        pairs_in = all(mask_of((i, 2 * ell + dd + 1 - i)) in f for i in range(1, ell + 1))
        hyp = pairs_in and nu_triples(2 * ell + dd + 1) >= c - dd
        out.append(_report(f"y3_small_c_shift[d={dd}]", hyp,
                           (2 * dd - 1) * (s + 2 * c - 2 * dd) + 1, y3))
    for dd in range(1, c + 1):
        g = _triples_from(f, 2 * ell + dd)
        nu_g = nu_triples(2 * ell + dd)
        out.append(_report(f"y3_frankl_cubic[d={dd}]", nu_g < c - dd + 1,
                           frankl_cubic(c, dd), y3, FRANKL_NOTE))
        m = n - 2 * ell - dd + 1
        # |G| <= nu(G) C(m-1, 2), written as a bound on missing triples
        out.append(_report(f"frankl_lemma[d={dd}]", m >= 3 * (nu_g + 1),
                           comb(m, 3) - nu_g * comb(m - 1, 2), comb(m, 3) - len(g)))
    return out


# --- technical claims ------------------------------------------------------

def claim_A2_cell(ell: int, c: int, d: int) -> tuple[bool, bool]:
    """Truth values of the two alternative strict inequalities (doubled)."""
    rhs = (4 * ell + 3 * c + d - 7) * (3 * c - d + 2)
    first = (4 * ell + 3 * c + d - 2) * (3 * c - d + 1) < rhs
    second = (ell + 3 * c - (d - 1) // 2) * (ell + 3 * c - (d + 1) // 2) < rhs
    return first, second


def claim_A2_counterexample(c_max: int) -> tuple[int, int, int] | None:
    if c_max < 1:
        raise ValueError(f"c_max must be positive, got {c_max}")
    for c in range(1, c_max + 1):
        for d in range(1, 2 * c + 1, 2):
            for ell in range(1, 12 * c + 13):
                if ell + (d + 1) // 2 < 4:
                    continue
                if not any(claim_A2_cell(ell, c, d)):
                    return ell, c, d
    return None


def check_claim_A2(c_max: int) -> bool:
    return claim_A2_counterexample(c_max) is None


def f_lc(ell: int, c: int, d: int, denominator: int = FRANKL_CUBIC_DENOMINATOR) -> Fraction:
    return frankl_cubic(c, d, denominator) + Fraction(
        (4 * ell + 3 * c + d - 2) * (3 * c - d + 1), 2)


def g_lc(ell: int, c: int, d: int, denominator: int = FRANKL_CUBIC_DENOMINATOR) -> Fraction:
    h = Fraction(d, 2)
    return frankl_cubic(c, d, denominator) + (
        (ell + 3 * c - h + Fraction(1, 2)) * (ell + 3 * c - h - Fraction(1, 2)) / 2)


def _second_diffs(fn, ell: int, c: int) -> list[Fraction]:
    return [fn(ell, c, d + 1) - 2 * fn(ell, c, d) + fn(ell, c, d - 1) for d in range(1, c)]


def fg_report(ell: int, c: int) -> dict:
    if ell < 1 or c < 1:
        raise ValueError(f"need ell, c >= 1, got ell={ell}, c={c}")
    p = Params(s=ell + c, c=c, ell=ell, n=2 * ell + 3 * c)
    _, y_pp, y_q = y23_totals(p)
    f0_gap = f_lc(ell, c, 0) - y_pp
    f0_gap_2 = f_lc(ell, c, 0, 2) - y_pp
    return {
        "f_c_equals_yQ": f_lc(ell, c, c) == y_q,
        "f_0_minus_yPprime": f0_gap,
        "f_0_minus_yPprime_expected": Fraction(c * (3 * c - 1), 2),
        "f_0_gap_positive": f0_gap > 0,
        "f_concave": all(v <= 0 for v in _second_diffs(f_lc, ell, c)),
        "g_concave": all(v <= 0 for v in _second_diffs(g_lc, ell, c)),
        # the denominator-2 variant reproduces the printed 3c(3c-1)/2 gap at
        # d = 0 but breaks the d = c identity
        "denominator_2_f_c_equals_yQ": f_lc(ell, c, c, 2) == y_q,
        "denominator_2_f_0_gap": f0_gap_2,
        "denominator_2_f_0_gap_is_3c(3c-1)/2": f0_gap_2 == Fraction(3 * c * (3 * c - 1), 2),
    }


def fg_endpoints(ell: int, c: int) -> bool:
    r = fg_report(ell, c)
    return (r["f_c_equals_yQ"] and r["f_0_minus_yPprime"] == r["f_0_minus_yPprime_expected"]
            and r["f_0_gap_positive"] and r["f_concave"] and r["g_concave"])
