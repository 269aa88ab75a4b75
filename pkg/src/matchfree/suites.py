"""Batch verification suites behind ``matchfree verify``."""

from __future__ import annotations

from dataclasses import dataclass, field

from . import oracle
from .constructions import FOUR_KINDS, rule_for
from .dinvariant import PreconditionError, audit_family, check_claim_A2, fg_endpoints
from .formulas import (comp_sizes, m_step_holds, regime_rows, threshold_pprime_vs_p,
                       w_gaps, w_gaps_closed, w_leq3)
from .sampling import DEFAULT_SEED, random_shifted_upset, rng_for
from .setfam import make_params, valid_params


@dataclass
class SuiteResult:
    name: str
    checks: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c["ok"] for c in self.checks)

    def add(self, check: str, ok: bool, **info) -> bool:
        self.checks.append({"check": check, "ok": bool(ok), **info})
        return bool(ok)

    def to_json(self) -> dict:
        return {"suite": self.name, "ok": self.ok, "checks": self.checks}


def theorem_suite(s_max: int, stop_on_failure: bool = True) -> SuiteResult:
    res = SuiteResult("theorem")
    cells = [(s, c) for s in range(2, s_max + 1) for c in range(1, s)]
    for s, c in cells:
        n = 2 * s + c
        if n <= oracle.SHIFTED_MAX_N:
            if not res.add("main_theorem", oracle.verify_main_theorem(s, c), s=s, c=c, n=n) \
                    and stop_on_failure:
                return res
        if n <= oracle.TRUNCATED_MAX_N:
            if not res.add("truncated", oracle.verify_truncated(s, c), s=s, c=c, n=n) \
                    and stop_on_failure:
                return res
    # the two engines must agree wherever both run
    for n in range(2, oracle.FULL_MAX_N + 1):
        for s in range(2, min(n, s_max) + 1):
            full = oracle.e_exact(n, s, "full_ihs").value
            shifted = oracle.e_exact(n, s, "shifted_upset").value
            if not res.add("full_vs_shifted", full == shifted, n=n, s=s,
                           full=full, shifted=shifted) and stop_on_failure:
                return res
    return res


def bounds_suite(trials: int = 1000, seed: int = DEFAULT_SEED, max_n: int = 14,
                 random_max_n: int = 8) -> SuiteResult:
    res = SuiteResult("bounds")

    def audit(f, p, label: str) -> None:
        try:
            reports = audit_family(f, p)
        except PreconditionError as exc:
            res.add("preconditions", False, family=label, error=str(exc))
            return
        bad = [r.bound_name for r in reports if r.hypothesis_ok and not r.holds]
        res.add("audit", not bad, family=label, s=p.s, c=p.c, violations=bad)

    for p in valid_params(max_n):
        for kind in FOUR_KINDS:
            audit(rule_for(kind, p).materialize(), p, kind.value)
    small = valid_params(random_max_n)
    rng = rng_for(seed)
    bad_total = 0
    for t in range(trials):
        p = small[t % len(small)]
        f = random_shifted_upset(p.n, p.s, rng)
        try:
            reports = audit_family(f, p)
        except PreconditionError as exc:
            res.add("preconditions", False, family=f"random[{t}]", error=str(exc))
            continue
        bad = [r.bound_name for r in reports if r.hypothesis_ok and not r.holds]
        if bad:
            bad_total += 1
            res.add("audit", False, family=f"random[{t}]", s=p.s, c=p.c,
                    sets=f.sets(), violations=bad)
    res.add("random_audits", bad_total == 0, trials=trials, seed=seed, failures=bad_total)
    return res


def claims_suite(c_max: int = 10, ell_max: int = 20, s_grid: int = 60, s_mstep: int = 40) -> SuiteResult:
    res = SuiteResult("claims")
    res.add("claim_A2", check_claim_A2(c_max), c_max=c_max)
    bad = [(ell, c) for ell in range(1, ell_max + 1) for c in range(1, c_max + 1)
           if not fg_endpoints(ell, c)]
    res.add("fg_endpoints", not bad, ell_max=ell_max, c_max=c_max, failures=bad)

    grid = [make_params(s, c, check_width=False) for s in range(2, s_grid + 1) for c in range(1, s)]
    bad = [(p.s, p.c) for p in grid if p.ell >= 2 and threshold_pprime_vs_p(p) != (p.s >= 7 * p.c + 2)]
    res.add("threshold_7c_plus_2", not bad, s_max=s_grid, failures=bad)
    bad = [(s, ell) for s in range(3, s_mstep + 1) for ell in range(2, s) if not m_step_holds(s, ell)]
    res.add("m_step", not bad, s_max=s_mstep, failures=bad)
    bad = [(p.s, p.c) for p in grid
           if w_leq3(p) < min(comp_sizes(p).compP, comp_sizes(p).compQ)]
    res.add("w_leq3_at_least_min_P_Q", not bad, s_max=s_grid, failures=bad)
    bad = [(p.s, p.c) for p in grid if w_gaps(p) != w_gaps_closed(p)]
    res.add("w_gap_identities", not bad, s_max=s_grid, failures=bad)
    rows = [r for r in regime_rows(s_grid) if r["l"] >= 2 and r["c"] <= 9]
    bad = [(r["s"], r["c"]) for r in rows if "Pprime" in r["winners"].split("|")]
    res.add("pprime_never_extremal_c_le_9", not bad, s_max=s_grid, failures=bad)
    return res


SUITES = {"theorem": theorem_suite, "bounds": bounds_suite, "claims": claims_suite}
