"""Closed forms for complement sizes, layer deficits and thresholds.

All arithmetic is exact; a non-integral value where an integer is expected
raises instead of rounding.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from fractions import Fraction
from math import comb

from .setfam import Params, make_params

KIND_ORDER = ("P", "Pprime", "Q", "W")


def _int(x: Fraction | int, what: str) -> int:
    x = Fraction(x)
    if x.denominator != 1:
        raise ArithmeticError(f"{what} is not an integer: {x}")
    return int(x)


@dataclass(frozen=True)
class CompSizes:
    compP: int
    compPprime: int
    compQ: int
    compW: int

    def as_dict(self) -> dict[str, int]:
        return {k: getattr(self, "comp" + k) for k in KIND_ORDER}


@dataclass(frozen=True)
class RegimeVerdict:
    winners: tuple[str, ...]
    values: CompSizes

    @property
    def label(self) -> str:
        return "|".join(self.winners)


def _comp_raw(s: int, c: int) -> CompSizes:
    # evaluated without validating (s, c); the induction step in
    # nkm monotonicity steps onto ell = 0
    ell, n = s - c, 2 * s + c
    P = comb(s + 2 * c + 1, 2) + n + 1
    Pp = _int((6 * c + 4) * s - Fraction(3, 2) * c * c - Fraction(5, 2) * c, "compPprime")
    Q = _int((4 * c + 4) * s + Fraction(4 * c**3 - 4 * c, 3), "compQ")
    W = 2 ** (c + 2) * s
    del ell
    return CompSizes(P, Pp, Q, W)


def comp_sizes(p: Params) -> CompSizes:
    return _comp_raw(p.s, p.c)


def y23_totals(p: Params) -> tuple[int, int, int]:
    ell, c = p.ell, p.c
    yP = comb(ell + 3 * c + 1, 2)
    yPp = _int(Fraction((4 * ell + 3 * c - 2) * (3 * c + 1), 2), "yPprime")
    yQ = _int((4 * c + 2) * ell + Fraction(4 * c**3 + 12 * c**2 - c - 3, 3), "yQ")
    return yP, yPp, yQ


def _w_leq3_raw(s: int, c: int) -> int:
    return _int((c * c + 3 * c + 4) * s + Fraction(c**3 - c, 6), "w_leq3")


def w_leq3(p: Params) -> int:
    """Sets of size <= 3 missing from W."""
    return _w_leq3_raw(p.s, p.c)


def _nkm_raw(s: int, c: int) -> tuple[int, int, int]:
    cs = _comp_raw(s, c)
    m = min(cs.compP, cs.compPprime, cs.compQ)
    return min(m, cs.compW), min(m, _w_leq3_raw(s, c)), m


def nkm_minima(p: Params) -> tuple[int, int, int]:
    """(N, K, M): min of all four complements, the same with W cut to
    layers <= 3, and the min over P, P', Q only."""
    return _nkm_raw(p.s, p.c)


def regime_classify(p: Params) -> RegimeVerdict:
    cs = comp_sizes(p)
    vals = cs.as_dict()
    low = min(vals.values())
    return RegimeVerdict(tuple(k for k in KIND_ORDER if vals[k] == low), cs)


def threshold_pprime_vs_p(p: Params) -> bool:
    """compPprime <= compP; only meaningful for ell >= 2."""
    if p.ell < 2:
        raise ValueError("threshold needs ell >= 2 (for ell = 1 the families coincide)")
    cs = comp_sizes(p)
    return cs.compPprime <= cs.compP


def m_step(s: int, ell: int) -> tuple[int, int]:
    """(left, right) for the step M(s-1, ell-2) > M(s, ell).

    The smaller instance has c + 1 in place of c. When ell = 2 it lands on
    n = 3(s-1), where the closed forms no longer describe matching-free
    families; there the left side is the exact minimum complement given by
    Kleitman's value.
    """
    if ell < 2 or ell >= s:
        raise ValueError(f"need 2 <= ell < s, got s={s}, ell={ell}")
    c = s - ell
    right = _nkm_raw(s, c)[2]
    if ell == 2:
        n = 3 * (s - 1)
        return 2**n - kleitman_value(n, s - 1), right
    return _nkm_raw(s - 1, c + 1)[2], right


def m_step_holds(s: int, ell: int) -> bool:
    left, right = m_step(s, ell)
    return left > right


def kleitman_value(n: int, s: int) -> int:
    from .constructions import kleitman_m

    m, is_sm = kleitman_m(n, s)
    if is_sm:
        return comb(s * m - 1, m) + sum(comb(s * m, t) for t in range(m + 1, s * m + 1))
    return sum(comb(s * m - 1, t) for t in range(m, s * m))


def regime_rows(s_max: int) -> list[dict]:
    rows = []
    for s in range(2, s_max + 1):
        for c in range(1, s):
            p = make_params(s, c, check_width=False)
            v = regime_classify(p)
            row = {"s": s, "c": c, "l": p.ell, "n": p.n}
            row.update({f.name: getattr(v.values, f.name) for f in fields(CompSizes)})
            row["winners"] = v.label
            rows.append(row)
    return rows


CSV_COLUMNS = ("s", "c", "l", "n", "compP", "compPprime", "compQ", "compW", "winners")


def w_gaps(p: Params) -> tuple[int, int]:
    """(w_leq3 - compPprime, w_leq3 - compQ) from the complement formulas."""
    cs = comp_sizes(p)
    w = w_leq3(p)
    return w - cs.compPprime, w - cs.compQ


def w_gaps_closed(p: Params) -> tuple[int, int]:
    """The same two gaps as polynomials in (s, c)."""
    s, c = p.s, p.c
    return (_int((c * c - 3 * c) * s + Fraction(c**3 + 9 * c * c + 14 * c, 6), "w_gap"),
            _int(Fraction(c * (c - 1) * (6 * s - 7 * c - 7), 6), "w_gap"))
