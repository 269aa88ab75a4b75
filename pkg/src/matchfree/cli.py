"""Command-line entry point.

JSON goes to stdout, diagnostics to stderr. Exit codes: 2 for bad input,
1 when a verification fails, 0 otherwise. Rationals are written as
{"num": int, "den": int}.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict
from fractions import Fraction

from . import formulas, montecarlo, oracle
from .constructions import (FamilyKind, certificate_for, family_A, family_kleitman,
                            family_of, family_P_general, rule_for, verify_cover,
                            verify_cover_rule)
from .dinvariant import PreconditionError, audit_family, d_of
from .packing import nu
from .setfam import Family, make_params, shift_closure, shift_once
from .suites import SUITES


class InputError(Exception):
    pass


def rational(x) -> dict:
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator}


def _plain(obj):
    """Recursively turn rationals and enums into JSON-friendly values."""
    if isinstance(obj, Fraction):
        return rational(obj)
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if hasattr(obj, "value") and isinstance(getattr(obj, "value"), str):
        return obj.value
    return obj


def _emit(doc) -> None:
    json.dump(_plain(doc), sys.stdout, separators=(",", ":"))
    sys.stdout.write("\n")


def _read_family(path: str) -> Family:
    try:
        text = sys.stdin.read() if path == "-" else open(path).read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    try:
        return Family.from_json(text)
    except (ValueError, json.JSONDecodeError) as exc:
        raise InputError(f"bad family JSON: {exc}") from exc


def _params(args):
    if args.s is None or args.c is None:
        raise InputError("--s and --c are required")
    return make_params(args.s, args.c)


# --- commands --------------------------------------------------------------

def cmd_construct(args) -> int:
    kind = FamilyKind(args.family)
    if kind is FamilyKind.P_GENERAL:
        fam = family_P_general(args.s, args.m, args.l)
    elif kind is FamilyKind.A:
        fam = family_A(args.n, args.k, args.i, args.s)
    elif kind is FamilyKind.KLEITMAN:
        fam = family_kleitman(args.n, args.s)
    else:
        fam = family_of(kind, _params(args))
    _emit(fam.to_json())
    return 0


def cmd_nu(args) -> int:
    f = _read_family(args.input)
    value, witness = nu(f, allow_empty=args.allow_empty)
    _emit({"nu": value, "witness": witness.to_lists()})
    return 0


def cmd_shift(args) -> int:
    f = _read_family(args.input)
    if args.closure:
        f = shift_closure(f)
    else:
        if args.i is None or args.j is None:
            raise InputError("give --i and --j, or --closure")
        f = shift_once(f, args.i, args.j)
    _emit(f.to_json())
    return 0


def cmd_d(args) -> int:
    f = _read_family(args.input)
    _emit({"d": d_of(f, _params(args))})
    return 0


def cmd_certify(args) -> int:
    p = _params(args)
    cover = certificate_for(args.family, p)
    if args.input:
        ok = verify_cover(_read_family(args.input), cover, p.s)
    else:
        ok = verify_cover_rule(rule_for(args.family, p), cover, p.s)
    _emit({"family": args.family, "s": p.s, "c": p.c, "weights": list(cover.weights),
           "total": cover.total, "valid": ok})
    return 0 if ok else 1


def cmd_formulas(args) -> int:
    p = _params(args) if args.s is not None else None
    doc = {}
    if p is not None:
        verdict = formulas.regime_classify(p)
        yP, yPp, yQ = formulas.y23_totals(p)
        N, K, M = formulas.nkm_minima(p)
        doc.update({"s": p.s, "c": p.c, "l": p.ell, "n": p.n,
                    "comp": verdict.values.as_dict(), "winners": list(verdict.winners),
                    "y23": {"P": yP, "Pprime": yPp, "Q": yQ},
                    "w_leq3": formulas.w_leq3(p), "N": N, "K": K, "M": M})
        if p.ell >= 2:
            doc["pprime_le_p"] = formulas.threshold_pprime_vs_p(p)
    if args.kleitman_n is not None:
        ks = args.s if args.kleitman_s is None else args.kleitman_s
        if ks is None:
            raise InputError("--kleitman-n needs --kleitman-s or --s")
        doc["kleitman"] = {"n": args.kleitman_n, "s": ks,
                           "value": formulas.kleitman_value(args.kleitman_n, ks)}
    if not doc:
        raise InputError("give --s/--c or --kleitman-n")
    _emit(doc)
    return 0


def cmd_regime_map(args) -> int:
    rows = formulas.regime_rows(args.s_max)
    if args.format == "json":
        _emit(rows)
        return 0
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=formulas.CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    sys.stdout.write(buf.getvalue())
    return 0


_MODES = {"full": oracle.OracleMode.FULL_IHS, "shifted": oracle.OracleMode.SHIFTED_UPSET,
          "truncated": oracle.OracleMode.TRUNCATED}


def cmd_oracle(args) -> int:
    mode = _MODES[args.mode]
    res = oracle.e_exact(args.n, args.s, mode, args.max_layer)
    _emit(res.to_json())
    if args.expect is not None and res.value != args.expect:
        print(f"expected {args.expect}, got {res.value}", file=sys.stderr)
        return 1
    return 0


def cmd_audit_bounds(args) -> int:
    p = _params(args)
    kinds = [FamilyKind(args.family)] if args.family else list(FamilyKind)[:4]
    out, failed = [], False
    for kind in kinds:
        fam = family_of(kind, p)
        for r in audit_family(fam, p):
            doc = {"type": "BoundReport", "family": kind.value, **asdict(r)}
            out.append(doc)
            failed |= r.hypothesis_ok and not r.holds
    ell, c = p.ell, p.c
    for d in range(1, c + 2):
        if d % 2:
            est = montecarlo.mc_odd(ell, c, d, args.trials, args.seed)
            extra = {}
        else:
            xsize = 2 * ell + d - 2
            est = montecarlo.mc_even(ell, c, d, xsize, args.trials, args.seed)
            extra = {"xsize": xsize}
        out.append({"type": "McEstimate", "procedure": "odd" if d % 2 else "even",
                    "l": ell, "c": c, "d": d, **extra, **asdict(est)})
    _emit(out)
    return 1 if failed else 0


def cmd_verify(args) -> int:
    if args.suite == "theorem":
        res = SUITES["theorem"](args.s_max)
    elif args.suite == "bounds":
        res = SUITES["bounds"](args.trials, args.seed)
    else:
        res = SUITES["claims"]()
    _emit(res.to_json())
    for c in res.checks:
        if not c["ok"]:
            print(f"FAILED {c['check']}: {c}", file=sys.stderr)
    return 0 if res.ok else 1


# --- parser ----------------------------------------------------------------

def _int_auto(text: str) -> int:
    return int(text, 0)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="matchfree",
                                 description="Families without s pairwise disjoint members.")
    sub = ap.add_subparsers(dest="command", required=True)

    def sc(p, required=False):
        p.add_argument("--s", type=int, required=required)
        p.add_argument("--c", type=int, required=required)

    p = sub.add_parser("construct", help="emit a named family as JSON")
    p.add_argument("--family", required=True, choices=[k.value for k in FamilyKind])
    sc(p)
    for flag in ("--m", "--l", "--n", "--k", "--i"):
        p.add_argument(flag, type=int)
    p.set_defaults(fn=cmd_construct)

    p = sub.add_parser("nu", help="matching number of a family")
    p.add_argument("--input", required=True, help="family JSON file, or - for stdin")
    p.add_argument("--allow-empty", action="store_true")
    p.set_defaults(fn=cmd_nu)

    p = sub.add_parser("shift", help="apply one shift or the full shift closure")
    p.add_argument("--input", required=True)
    p.add_argument("--i", type=int)
    p.add_argument("--j", type=int)
    p.add_argument("--closure", action="store_true")
    p.set_defaults(fn=cmd_shift)

    p = sub.add_parser("d", help="the d invariant of a family")
    p.add_argument("--input", required=True)
    sc(p, required=True)
    p.set_defaults(fn=cmd_d)

    p = sub.add_parser("certify", help="check the fractional cover of a generator")
    p.add_argument("--family", required=True, choices=["P", "Pprime", "Q", "W"])
    sc(p, required=True)
    p.add_argument("--input", help="check the cover against this family instead")
    p.set_defaults(fn=cmd_certify)

    p = sub.add_parser("formulas", help="closed forms at (s, c)")
    sc(p)
    p.add_argument("--kleitman-n", type=int)
    p.add_argument("--kleitman-s", type=int)
    p.set_defaults(fn=cmd_formulas)

    p = sub.add_parser("regime-map", help="winners over the (s, c) grid")
    p.add_argument("--s-max", type=int, required=True)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(fn=cmd_regime_map)

    p = sub.add_parser("oracle", help="exact e(n, s)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--mode", choices=sorted(_MODES), default="shifted")
    p.add_argument("--max-layer", type=int)
    p.add_argument("--expect", type=int)
    p.set_defaults(fn=cmd_oracle)

    p = sub.add_parser("audit-bounds", help="bound audits and Monte Carlo estimates")
    sc(p, required=True)
    p.add_argument("--family", choices=["P", "Pprime", "Q", "W"])
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=_int_auto, default=montecarlo.DEFAULT_SEED)
    p.set_defaults(fn=cmd_audit_bounds)

    p = sub.add_parser("verify", help="batch verification suites")
    p.add_argument("--suite", required=True, choices=sorted(SUITES))
    p.add_argument("--s-max", type=int, default=4)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=_int_auto, default=montecarlo.DEFAULT_SEED)
    p.set_defaults(fn=cmd_verify)
    return ap


def _validate(args) -> None:
    for name in ("s", "c", "n", "m", "l", "k", "i", "j", "s_max", "trials", "max_layer"):
        v = getattr(args, name, None)
        if v is not None and v < 0:
            raise InputError(f"--{name.replace('_', '-')} must be nonnegative")
    if getattr(args, "trials", None) == 0:
        raise InputError("--trials must be positive")
    if args.command == "oracle" and args.max_layer is not None and args.mode != "truncated":
        raise InputError("--max-layer needs --mode truncated")


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _validate(args)
        return args.fn(args)
    except (InputError, PreconditionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
