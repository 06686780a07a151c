"""Command-line entry point.

Every verification command prints (or writes with ``--out``) one JSON
report and exits 0 when all checks pass, 1 on a failure, 2 when a zero test
was undetermined and 64 on a usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import gmpy2

from .coverings import (
    COVERINGS,
    CoveringFileError,
    ValidityError,
    builtin,
    cie_verify,
    flatness,
    mutation_checks,
    read_covering_file,
    we_check_builtin,
)
from .coverings.cie import CIE_CASES, THEOREMS, case_for
from .coverings.cie import default_kappa as cie_default_kappa
from .coverings.covering import default_kappa as cov_default_kappa
from .coverings.we import we_kappa
from .jetspace import DEFAULT_ORDER, JetContext, TruncationError
from .mdkp import BranchError, audit, closure_check, reconstruction_consistency, verify_structure
from .report import EXIT_USAGE, Report, combine
from .symexpr import Expr, SymExprError, ZeroTestConfig, ZeroTester, parse, render, sample_point, sym
from .symexpr.symbols import KAPPA
from .symexpr.zerotest import positive_symbols

PROG = "mdkp-eds"


class UsageError(Exception):
    pass


def _kappa(text: str | None) -> Expr | None:
    """``None`` for the command default, the symbol k for ``symbolic``."""
    if text is None:
        return None
    if text == "symbolic":
        return parse("k")
    try:
        e = parse(text)
    except SymExprError as exc:
        raise UsageError(f"bad --kappa {text!r}: {exc}") from exc
    if not e.is_const():
        raise UsageError("--kappa must be 'symbolic' or a rational p/q")
    return e


def _lambda(text: str | None) -> Expr | None:
    if text is None:
        return None
    if text == "symbolic":
        return parse("lam")
    e = parse(text)
    if not e.is_const():
        raise UsageError("--lambda must be 'symbolic' or a rational p/q")
    return e


def _tester(args) -> ZeroTester:
    return ZeroTester(ZeroTestConfig(points=args.points, precision=args.precision, seed=args.seed))


def _zero_config(args) -> dict:
    return {"points": args.points, "precision": args.precision, "seed": args.seed}


def _timed(report_fn, args):
    t0 = time.perf_counter()
    report = report_fn()
    if args.timings:
        report.config["seconds"] = round(time.perf_counter() - t0, 3)
    return report


# -- commands ----------------------------------------------------------------

def cmd_verify_structure(args) -> Report:
    k = _kappa(args.kappa)
    ctx = JetContext(k, args.order)
    tester = _tester(args)
    parts = [
        _timed(lambda: verify_structure(ctx, tester), args),
        _timed(lambda: closure_check(ctx, tester), args),
        _timed(lambda: reconstruction_consistency(ctx, tester), args),
    ]
    if args.audit:
        parts.append(_timed(lambda: audit(ctx, tester), args))
    config = dict(parts[0].config)
    config["zero_test"] = _zero_config(args)
    return combine("verify-structure", parts, config)


def cmd_verify_covering(args) -> Report:
    target = args.covering
    lam = _lambda(args.lam)
    k = _kappa(args.kappa)
    if target in COVERINGS:
        cov = builtin(target, k if k is not None else cov_default_kappa(target), lam)
    else:
        path = Path(target)
        if not path.is_file():
            raise UsageError(f"{target!r} is neither a built-in covering ({', '.join(sorted(COVERINGS))}) nor a file")
        if lam is not None:
            raise UsageError("--lambda applies to built-in coverings only")
        cov = read_covering_file(path.read_text(), None if k is None else render(k))
    cov.depth = args.depth
    report = _timed(lambda: flatness(cov, cov.context(args.order), args.depth, _tester(args)), args)
    report.config["zero_test"] = _zero_config(args)
    return report


def cmd_we_check(args) -> Report:
    wid = args.form
    k = _kappa(args.kappa)
    k = k if k is not None else we_kappa(wid)
    lam = _lambda(args.lam)
    tester = _tester(args)
    report = _timed(lambda: we_check_builtin(wid, k, lam, args.order, tester, args.depth), args)
    if args.mutations:
        report.extend(_timed(lambda: mutation_checks(wid, k, lam, args.order, tester), args), "mutations:")
    report.config["zero_test"] = _zero_config(args)
    return report


def cmd_verify_cie(args) -> Report:
    tester = _tester(args)
    lam = _lambda(args.lam)
    k = _kappa(args.kappa)
    if args.theorem == "all":
        if k is not None:
            raise UsageError("--kappa cannot be combined with 'all'")
        parts = [
            _timed(lambda c=c: cie_verify(c, JetContext(cie_default_kappa(c), args.order), lam if CIE_CASES[c].we in ("WE2", "WE6") else None, tester), args)
            for c in sorted(CIE_CASES)
        ]
        return combine("verify-cie", parts, {"theorem": "all", "order": args.order, "zero_test": _zero_config(args)})
    if args.theorem not in THEOREMS and args.theorem not in CIE_CASES:
        raise UsageError(f"unknown theorem {args.theorem!r}; expected one of {list(THEOREMS)}, a case id {sorted(CIE_CASES)} or 'all'")
    if k is None:
        base = args.theorem if args.theorem in CIE_CASES else case_for(args.theorem, parse("k"))
        k = cie_default_kappa(base)
    report = _timed(lambda: cie_verify(args.theorem, JetContext(k, args.order), lam, tester), args)
    report.config["zero_test"] = _zero_config(args)
    return report


def cmd_reduce(args) -> dict:
    k = _kappa(args.kappa)
    ctx = JetContext(k, args.order)
    e = parse(args.expr)
    if k is not None and k.is_const():
        e = e.subs({KAPPA: k})
    return {"input": args.expr, "kappa": "symbolic" if ctx.kappa_symbolic else render(ctx.kappa), "result": render(ctx.reduce(e))}


def _assignment(pairs: list[str]) -> dict:
    out = {}
    for p in pairs:
        if "=" not in p:
            raise UsageError(f"--at expects name=value, got {p!r}")
        name, value = (x.strip() for x in p.split("=", 1))
        s = parse(name)
        if len(s.free_symbols) != 1:
            raise UsageError(f"--at: {name!r} is not a symbol")
        (sym_,) = s.free_symbols
        if s != sym(sym_):
            raise UsageError(f"--at: {name!r} is not a symbol")
        v = parse(value)
        if not v.is_const():
            raise UsageError(f"--at: {value!r} is not a rational")
        out[sym_] = v.const_value()
    return out


def cmd_eval(args) -> dict:
    e = parse(args.expr)
    k = _kappa(args.kappa)
    if k is not None and k.is_const():
        e = e.subs({KAPPA: k})
    given = _assignment(args.at or [])
    free = e.free_symbols
    pt = sample_point(free, seed=args.seed, index=0, precision=args.precision, positive=positive_symbols(e),
                      pinned={s: v for s, v in given.items() if s in free})
    with gmpy2.context(gmpy2.get_context(), precision=args.precision):
        val = pt.evaluate(e)[0]
        digits = max(int(args.precision * 0.30103) - 2, 1)
        text = gmpy2.mpfr(val).__format__(f".{digits}g")
    point = {s.name: gmpy2.mpfr(v).__format__(".17g") for s, v in sorted(pt.assignment.items(), key=lambda kv: kv[0].coord_key)}
    return {"input": args.expr, "value": text, "point": point, "seed": args.seed, "precision": args.precision}


COMMANDS = {
    "verify-structure": cmd_verify_structure,
    "verify-covering": cmd_verify_covering,
    "we-check": cmd_we_check,
    "verify-cie": cmd_verify_cie,
    "reduce": cmd_reduce,
    "eval": cmd_eval,
}


# -- parser ------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--kappa", help="'symbolic' or a rational p/q (default depends on the command)")
    common.add_argument("--lambda", dest="lam", help="'symbolic' or a rational p/q")
    common.add_argument("--order", type=int, default=DEFAULT_ORDER, help="jet truncation order N (default 6)")
    common.add_argument("--depth", type=int, default=2, help="fiber depth J (default 2)")
    common.add_argument("--points", type=int, default=20, help="zero-test sample points (default 20)")
    common.add_argument("--precision", type=int, default=256, help="zero-test precision in bits (default 256)")
    common.add_argument("--seed", type=int, default=0, help="zero-test seed (default 0)")
    common.add_argument("--out", help="write the report to this path instead of stdout")
    common.add_argument("--timings", action="store_true", help="record wall-clock seconds (breaks byte-identity)")

    p = _Parser(prog=PROG, description="Machine checks for the mdKP structure equations, coverings and CIEs.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    s = sub.add_parser("verify-structure", parents=[common], help="structure equations, closure, reconstruction")
    s.add_argument("--audit", action="store_true", help="also show that every erratum and reading is forced")
    s = sub.add_parser("verify-covering", parents=[common], help="flatness of a built-in or user covering")
    s.add_argument("covering", help="cov1..cov6 or a covering file")
    s = sub.add_parser("we-check", parents=[common], help="form congruence of WE1..WE6")
    s.add_argument("form", help="WE1..WE6")
    s.add_argument("--mutations", action="store_true", help="also check that the documented mutations fail")
    s = sub.add_parser("verify-cie", parents=[common], help="CIE witness of theorem 1, 2 or 3")
    s.add_argument("theorem", help="1, 2, 3, a case id or 'all'")
    s = sub.add_parser("reduce", parents=[common], help="restrict an expression to the equation")
    s.add_argument("expr")
    s = sub.add_parser("eval", parents=[common], help="evaluate an expression at a seeded point")
    s.add_argument("expr")
    s.add_argument("--at", action="append", metavar="NAME=VALUE", help="fix a symbol (repeatable)")
    return p


def _validate(args) -> None:
    if args.order < 3:
        raise UsageError("--order must be at least 3")
    if args.depth < 1:
        raise UsageError("--depth must be at least 1")
    if args.points < 1:
        raise UsageError("--points must be positive")
    if args.precision < 64:
        raise UsageError("--precision must be at least 64 bits")
    if args.seed < 0 or args.seed >= 2**64:
        raise UsageError("--seed must be an unsigned 64-bit integer")


def _emit(text: str, args, summary: str) -> None:
    if args.out:
        Path(args.out).write_text(text)
        print(summary)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = build_parser().parse_args(argv)
        _validate(args)
        result = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValidityError, BranchError, CoveringFileError, SymExprError, TruncationError, OSError) as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if isinstance(result, Report):
        _emit(result.to_json(), args, f"{result.title}: {result.status}")
        return result.exit_code
    if args.command == "reduce" and not args.out:
        print(result["result"])
        return 0
    if args.command == "eval" and not args.out:
        print(result["value"])
        return 0
    _emit(json.dumps(result, indent=2, sort_keys=True) + "\n", args, result.get("result", result.get("value", "")))
    return 0


run = main

if __name__ == "__main__":
    sys.exit(main())
