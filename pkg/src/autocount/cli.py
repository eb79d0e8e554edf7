"""Command-line front end: ``autocount {delta,enumerate,verify-table,solve,ideal}``.

Exit codes: 0 success, 1 table mismatch, 2 parse error, 3 guard violation,
4 timeout.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Optional, Sequence

from . import counting, groebner
from .assignment import InfeasibleError, SolverGuardError, WeightTensor, from_tensor, solve_3pap_exact
from .counting import (
    ContradictoryPrefixError,
    CountReport,
    GuardError,
    PrefixError,
    SearchTimeout,
    SymmetryInput,
)
from .latin import Isotopism, LatinError, PartialLatinSquare, contains, format_square, load_square
from .permutations import (
    CycleStructure,
    PermutationError,
    parse_permutation,
    permutation_from_cycle_structure,
)
from .table import TableEntry, entries

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_PARSE = 2
EXIT_GUARD = 3
EXIT_TIMEOUT = 4


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _env_jobs() -> int:
    return counting.default_jobs()


def _add_isotopism_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, help="order of the square")
    p.add_argument("--alpha", help="row permutation, one-line or cycle form (default identity)")
    p.add_argument("--beta", help="column permutation (default identity)")
    p.add_argument("--gamma", help="symbol permutation (default identity)")
    p.add_argument(
        "--cycle-structure",
        help='"la|lb|lg" cycle structures; builds canonical representatives',
    )


def isotopism_from_args(args) -> Isotopism:
    try:
        if args.cycle_structure:
            if args.alpha or args.beta or args.gamma:
                raise CliError("--cycle-structure excludes --alpha/--beta/--gamma", EXIT_PARSE)
            parts = args.cycle_structure.split("|")
            if len(parts) != 3:
                raise CliError("--cycle-structure needs three structures separated by '|'", EXIT_PARSE)
            perms = [permutation_from_cycle_structure(CycleStructure.parse(p)) for p in parts]
            if args.n is not None and any(p.n != args.n for p in perms):
                raise CliError(f"cycle structures do not have order {args.n}", EXIT_PARSE)
            return Isotopism(*perms)
        if args.n is None or args.n < 1:
            raise CliError("--n (a positive integer) is required", EXIT_PARSE)
        perms = [parse_permutation(text or "", args.n) for text in (args.alpha, args.beta, args.gamma)]
        return Isotopism(*perms)
    except (PermutationError, ValueError) as exc:
        if isinstance(exc, CliError):
            raise
        raise CliError(str(exc), EXIT_PARSE) from None


def _load_prefix(path: Optional[str]) -> Optional[PartialLatinSquare]:
    if not path:
        return None
    try:
        return load_square(path, partial=True)
    except (OSError, LatinError, ValueError, KeyError) as exc:
        raise CliError(f"cannot read prefix {path}: {exc}", EXIT_PARSE) from None


def _emit(obj: dict, pretty: bool) -> None:
    if pretty:
        print(json.dumps(obj, indent=2))
    else:
        print(json.dumps(obj, separators=(",", ":")))


# -- delta -----------------------------------------------------------------------


def _delta_groebner(t, prefix, coeff, order_kind, time_limit, dump) -> CountReport:
    start = time.monotonic()
    try:
        ideal = groebner.build_ideal_reduced(t, prefix)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_PARSE) from None
    if dump:
        with open(dump, "w") as fh:
            fh.write(ideal.dump())
    try:
        gb = groebner.buchberger(ideal, groebner.TermOrder(order_kind), time_limit=time_limit)
    except groebner.GroebnerTimeout as exc:
        raise CliError(str(exc), EXIT_TIMEOUT) from None
    except groebner.ResourceCapError as exc:
        raise CliError(f"{exc}; use --method search", EXIT_GUARD) from None
    dim = groebner.quotient_dimension(gb)
    return CountReport(coeff * dim, gb.stats.get("pairs", 0), time.monotonic() - start, "groebner")


def _delta_brute(t, prefix, coeff) -> CountReport:
    try:
        if prefix is None:
            report = counting.brute_force_count(t)
        else:
            start = time.monotonic()
            hits = [L for L in counting.brute_force_squares(t) if contains(prefix, L)]
            report = CountReport(len(hits), 0, time.monotonic() - start, "brute_force")
    except GuardError as exc:
        raise CliError(str(exc), EXIT_GUARD) from None
    report.delta *= coeff
    return report


def cmd_delta(args) -> int:
    t = isotopism_from_args(args)
    prefix = _load_prefix(args.prefix)
    if args.coeff < 1:
        raise CliError("--coeff must be a positive integer", EXIT_PARSE)
    if prefix is not None and prefix.n != t.n:
        raise CliError(f"prefix has order {prefix.n}, isotopism has order {t.n}", EXIT_PARSE)
    if args.method == "search":
        s = SymmetryInput(t, prefix, args.coeff)
        try:
            if prefix is None:
                report = counting.count_ls(t, jobs=args.jobs, time_limit=args.limit_seconds)
                report.delta *= args.coeff
            else:
                report = counting.delta_via_symmetry(s, jobs=args.jobs, time_limit=args.limit_seconds)
        except SearchTimeout as exc:
            raise CliError(str(exc), EXIT_TIMEOUT) from None
        except PrefixError as exc:
            raise CliError(str(exc), EXIT_PARSE) from None
    elif args.method == "groebner":
        report = _delta_groebner(t, prefix, args.coeff, args.order, args.limit_seconds, args.dump_ideal)
    else:
        report = _delta_brute(t, prefix, args.coeff)
    out = report.to_json(t)
    if prefix is not None or args.coeff != 1:
        out["coefficient"] = str(args.coeff)
    _emit(out, args.pretty)
    return EXIT_OK


# -- enumerate -------------------------------------------------------------------


def cmd_enumerate(args) -> int:
    t = isotopism_from_args(args)
    prefix = _load_prefix(args.prefix)
    try:
        squares = counting.enumerate_ls(t, limit=args.limit, prefix=prefix)
        first = True
        for L in squares:
            if args.json:
                print(json.dumps(L.to_json(), separators=(",", ":")))
                continue
            if not first:
                print()
            sys.stdout.write(format_square(L))
            first = False
    except ContradictoryPrefixError:
        return EXIT_OK
    except PrefixError as exc:
        raise CliError(str(exc), EXIT_PARSE) from None
    return EXIT_OK


# -- verify-table ----------------------------------------------------------------


def verify_table(
    only: Optional[int],
    budget: Optional[float],
    jobs: int = 1,
    selection: Optional[Sequence[TableEntry]] = None,
):
    """Yield ``(entry, status, computed, seconds)`` for the embedded table."""
    for e in entries(only) if selection is None else selection:
        start = time.monotonic()
        try:
            report = counting.count_ls(e.isotopism(), jobs=jobs, time_limit=budget)
        except SearchTimeout:
            yield e, "SKIPPED", None, time.monotonic() - start
            continue
        status = "MATCH" if report.delta == e.delta else "MISMATCH"
        yield e, status, report.delta, time.monotonic() - start


def cmd_verify_table(args) -> int:
    only = None
    if args.only:
        try:
            only = int(args.only.replace(" ", "").removeprefix("n="))
        except ValueError:
            raise CliError("--only expects n=8 or n=9", EXIT_PARSE) from None
        if only not in (8, 9):
            raise CliError("--only expects n=8 or n=9", EXIT_PARSE)
    budget = None if args.all else args.max_seconds_per_entry
    mismatches = 0
    rows = []
    for e, status, got, secs in verify_table(only, budget, args.jobs):
        mismatches += status == "MISMATCH"
        row = {
            "status": status,
            "n": e.n,
            "alpha": str(e.alpha),
            "beta": str(e.beta),
            "gamma": str(e.gamma),
            "expected": str(e.delta),
            "computed": None if got is None else str(got),
            "seconds": round(secs, 3),
        }
        rows.append(row)
        if args.json:
            print(json.dumps(row, separators=(",", ":")), flush=True)
        else:
            print(
                "\t".join(
                    [status, f"n={e.n}", str(e.alpha), str(e.gamma), str(e.delta), row["computed"] or "-", f"{secs:.2f}s"]
                ),
                flush=True,
            )
    summary = {s: sum(r["status"] == s for r in rows) for s in ("MATCH", "MISMATCH", "SKIPPED")}
    print(
        f"# {summary['MATCH']} MATCH, {summary['MISMATCH']} MISMATCH, {summary['SKIPPED']} SKIPPED",
        file=sys.stderr,
    )
    return EXIT_MISMATCH if mismatches else EXIT_OK


# -- solve / ideal ---------------------------------------------------------------


def cmd_solve(args) -> int:
    try:
        with open(args.weights) as fh:
            W = WeightTensor.from_json(fh.read())
    except (OSError, ValueError, KeyError) as exc:
        raise CliError(f"cannot read weights {args.weights}: {exc}", EXIT_PARSE) from None
    t = None
    if any((args.alpha, args.beta, args.gamma, args.cycle_structure)):
        if args.n is None and not args.cycle_structure:
            args.n = W.n
        t = isotopism_from_args(args)
    try:
        X, value = solve_3pap_exact(W, t)
    except SolverGuardError as exc:
        raise CliError(str(exc), EXIT_GUARD) from None
    except InfeasibleError as exc:
        _emit({"n": W.n, "feasible": False, "error": str(exc)}, args.pretty)
        return EXIT_OK
    L = from_tensor(X)
    _emit({"n": W.n, "feasible": True, "objective": value, "square": [list(r) for r in L.cells]}, args.pretty)
    return EXIT_OK


def cmd_ideal(args) -> int:
    t = isotopism_from_args(args)
    prefix = _load_prefix(args.prefix)
    try:
        ideal = groebner.build_ideal_full(t) if args.full else groebner.build_ideal_reduced(t, prefix)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_PARSE) from None
    sys.stdout.write(ideal.dump(groebner.TermOrder(args.order)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="autocount",
        description="Count Latin squares that admit a given autotopism.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("delta", help="number of Latin squares fixed by an isotopism")
    _add_isotopism_flags(p)
    p.add_argument("--method", choices=("search", "groebner", "brute"), default="search")
    p.add_argument("--prefix", help="partial square file restricting the count")
    p.add_argument("--coeff", type=int, default=1, help="coefficient of symmetry of the prefix")
    p.add_argument("--jobs", type=int, default=_env_jobs())
    p.add_argument("--limit-seconds", type=float, default=None)
    p.add_argument("--order", choices=("degrevlex", "lex"), default="degrevlex")
    p.add_argument("--dump-ideal", metavar="FILE", help="write the ideal generators (groebner only)")
    p.add_argument("--pretty", action="store_true")
    p.set_defaults(func=cmd_delta)

    p = sub.add_parser("enumerate", help="list the Latin squares fixed by an isotopism")
    _add_isotopism_flags(p)
    p.add_argument("--limit", type=int, default=None)
    p.add_argument("--prefix")
    p.add_argument("--json", action="store_true", help="one JSON square per line")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("verify-table", help="recompute the embedded reference counts")
    p.add_argument("--max-seconds-per-entry", type=float, default=60.0)
    p.add_argument("--only", help="n=8 or n=9")
    p.add_argument("--all", action="store_true", help="ignore the per-entry budget")
    p.add_argument("--jobs", type=int, default=_env_jobs())
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify_table)

    p = sub.add_parser("solve", help="exact minimum-weight Latin square")
    _add_isotopism_flags(p)
    p.add_argument("--weights", required=True, help='JSON {"n": .., "weights": [[[..]]]}')
    p.add_argument("--pretty", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("ideal", help="dump the polynomial ideal, one generator per line")
    _add_isotopism_flags(p)
    p.add_argument("--full", action="store_true", help="all n^3 variables, no collapsing")
    p.add_argument("--prefix")
    p.add_argument("--order", choices=("degrevlex", "lex"), default="degrevlex")
    p.set_defaults(func=cmd_ideal)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"autocount: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
