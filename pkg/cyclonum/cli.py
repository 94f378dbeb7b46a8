"""Command-line front end.

Data goes to stdout and diagnostics go to stderr as JSON log lines.
Exit codes: 0 ok, 1 counterexample, 2 usage or invalid input, 3 resource limit.
"""

import argparse
import json
import sys
from fractions import Fraction
from typing import Any, Dict, Optional, Sequence

import mpmath
from pydantic import ValidationError

from cyclonum import __version__
from cyclonum.cache import get_results_cache
from cyclonum.cyclo_integers import (
    CycInt,
    circulant,
    det_exact,
    norm,
    norm_bound_general,
    norm_bound_obvious,
    norm_bound_prime,
    norm_via_circulant,
    schinzel_bound,
)
from cyclonum.cyclotomy import compute_table, format_table, make_config, table_to_csv, table_to_json
from cyclonum.errors import (
    CounterexampleError,
    InvalidArgumentError,
    ResourceLimitError,
    UnsupportedCaseError,
)
from cyclonum.finite_field import is_prime
from cyclonum.harness import fermat_check, grid_search, tally, write_summary_csv
from cyclonum.transfer import check_equivalence
from cyclonum.utils import log_event, setup_logging
from cyclonum.vanishing_sums import (
    RootSum,
    cancels_in_pairs,
    classify_up_to_6,
    is_minimal,
    is_similar,
    is_vanishing,
    squarefree_reduce,
    vanishing_subsums,
)

EXIT_OK = 0
EXIT_COUNTEREXAMPLE = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3

ROOTSUM_OPS = ("vanishing", "minimal", "classify", "subsums", "pairs", "squarefree", "similar")


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def parse_coeffs(text: str, k: int) -> CycInt:
    """Comma-separated integers, exactly k of them."""
    try:
        values = [int(tok) for tok in text.split(",")]
    except ValueError:
        raise InvalidArgumentError(f"coefficients must be comma-separated integers: {text!r}")
    if len(values) != k:
        raise InvalidArgumentError(f"expected exactly {k} coefficients, got {len(values)}")
    return CycInt(k=k, coeffs=tuple(values))


def parse_terms(text: str, m: int) -> RootSum:
    """Terms "c:e,c:e,..." with c an integer or a fraction such as -1/2."""
    if m < 1:
        raise InvalidArgumentError(f"m must be a positive integer, got {m}")
    pairs = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        coeff, sep, exp = tok.partition(":")
        if not sep:
            raise InvalidArgumentError(f"term {tok!r} is not of the form c:e")
        try:
            pairs.append((Fraction(coeff), int(exp)))
        except (ValueError, ZeroDivisionError):
            raise InvalidArgumentError(f"term {tok!r} is not of the form c:e")
    exps = [e % m for _, e in pairs]
    if len(set(exps)) != len(exps):
        raise InvalidArgumentError("exponents must be distinct mod m")
    return RootSum.of(m, pairs)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cyclonum",
        description="Cyclotomic numbers, cyclotomic-integer norms and theorem verification",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--log-level",
        type=str,
        default=None,
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Diagnostic log level (default from CYCLONUM_LOG_LEVEL)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table", help="Print the cyclotomic numbers of order e over F_{p^n}")
    p.add_argument("--p", type=int, required=True, help="Characteristic")
    p.add_argument("--n", type=int, default=1, help="Extension degree")
    p.add_argument("--e", type=int, required=True, help="Order e, dividing p^n - 1")
    p.add_argument("--format", choices=["json", "csv", "pretty"], default="pretty")
    p.add_argument("--out", type=str, default=None, help="Write to a file instead of stdout")

    p = sub.add_parser("norm", help="Norm of f(zeta_k) and its upper bounds")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--coeffs", type=str, required=True, help="a0,a1,...,a_{k-1}")

    p = sub.add_parser("rootsum", help="Queries on a sum of m-th roots of unity")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--terms", type=str, required=True, help='"c:e,c:e,..."')
    p.add_argument("--op", choices=ROOTSUM_OPS, default="vanishing")
    p.add_argument("--other", type=str, default=None, help="Second sum for --op similar")
    p.add_argument("--other-m", type=int, default=None, help="Modulus of --other (default --m)")

    p = sub.add_parser("transfer", help="Compare f(g^e) = 0 in F_q with f(zeta_k) = 0")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--e", type=int, required=True)
    p.add_argument("--coeffs", type=str, required=True, help="a0,...,a_{k-1}, k = (q-1)/e")

    p = sub.add_parser("verify", help="Verify every theorem over a grid of configurations")
    p.add_argument("--qmax", type=int, required=True)
    p.add_argument("--kmax", type=int, default=None)
    p.add_argument("--pmax", type=int, default=None)
    p.add_argument("--jobs", type=int, default=None, help="Worker processes")
    p.add_argument("--cache", type=str, default=None, help="JSON Lines results cache")
    p.add_argument("--out", type=str, default=None, help="Write reports here instead of stdout")
    p.add_argument("--summary", type=str, default=None, help="Write a per-theorem CSV summary")
    p.add_argument("--oracle", action="store_true", help="Cross-check every table by brute force")
    p.add_argument("--timing", action="store_true", help="Include timing_ms in reports")

    p = sub.add_parser("fermat", help="x^e + y^e is never an e-th power mod p")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--e", type=int, required=True)
    p.add_argument("--exhaustive", action="store_true", help="Sweep all pairs regardless of p")

    return parser


# ---------------------------------------------------------------------------
# Output helpers
# ---------------------------------------------------------------------------


def _emit(data: Dict[str, Any], out=None):
    print(json.dumps(data, default=str), file=out or sys.stdout)


def _general_bound_value(k_s: int, phi: int) -> str:
    """(k*S/phi)^(phi/2) as an exact fraction when phi is even, else 30 digits."""
    base = Fraction(k_s, phi)
    if phi % 2 == 0:
        return str(base ** (phi // 2))
    with mpmath.workdps(30):
        value = mpmath.power(mpmath.mpf(base.numerator) / base.denominator, mpmath.mpf(phi) / 2)
        return mpmath.nstr(value, 25)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_table(args) -> int:
    table = compute_table(make_config(args.p, args.n, args.e))
    if args.format == "csv":
        text = table_to_csv(table)
    elif args.format == "json":
        text = table_to_json(table)
    else:
        text = format_table(table)

    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        log_event("table_written", {"path": args.out, "format": args.format})
    else:
        print(text)
    return EXIT_OK


def cmd_norm(args) -> int:
    f = parse_coeffs(args.coeffs, args.k)
    n = norm(f)
    general = norm_bound_general(f, n)
    data: Dict[str, Any] = {
        "k": f.k,
        "coeffs": list(f.coeffs),
        "norm": n,
        "obvious_bound": norm_bound_obvious(f, n).model_dump(),
        "general_bound": {
            **general.model_dump(),
            "bound": _general_bound_value(f.k * f.square_sum, general.phi),
        },
    }
    if is_prime(f.k):
        m = circulant(f)
        via = norm_via_circulant(f)
        data["prime_bound"] = norm_bound_prime(f, n).to_dict()
        data["circulant"] = {
            "det": det_exact(m),
            "schinzel_bound": schinzel_bound(m),
            "norm": via,
            "agrees": via == n,
        }
    _emit(data)
    return EXIT_OK


def cmd_rootsum(args) -> int:
    s = parse_terms(args.terms, args.m)
    data: Dict[str, Any] = {"m": s.m, "sum": str(s), "op": args.op}

    if args.op == "vanishing":
        data["vanishing"] = is_vanishing(s)
    elif args.op == "minimal":
        data["minimal"] = is_minimal(s)
    elif args.op == "classify":
        tag = classify_up_to_6(s)
        data["class"] = tag
        _emit(data)
        return EXIT_COUNTEREXAMPLE if tag == "violation" else EXIT_OK
    elif args.op == "subsums":
        data["subsums"] = [list(idx) for idx in vanishing_subsums(s)]
    elif args.op == "pairs":
        data["cancels_in_pairs"] = cancels_in_pairs(s)
    elif args.op == "squarefree":
        reduction = squarefree_reduce(s)
        data["squarefree"] = (
            None
            if reduction is None
            else {"beta_exponent": reduction.beta_exponent, "reduced": json.loads(reduction.reduced.to_json())}
        )
    else:
        if args.other is None:
            raise InvalidArgumentError("--op similar needs --other")
        other = parse_terms(args.other, args.other_m or args.m)
        data["other"] = str(other)
        data["similar"] = is_similar(s, other)

    _emit(data)
    return EXIT_OK


def cmd_transfer(args) -> int:
    cfg = make_config(args.p, args.n, args.e)
    f = parse_coeffs(args.coeffs, cfg.k)
    result = check_equivalence(cfg, f)
    _emit({"p": cfg.p, "n": cfg.n, "q": cfg.q, "e": cfg.e, "k": cfg.k, **result.model_dump()})
    return EXIT_OK if result.consistent else EXIT_COUNTEREXAMPLE


def cmd_verify(args) -> int:
    cache = get_results_cache(args.cache) if args.cache else None
    out = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    reports = []
    try:
        for report in grid_search(
            args.qmax,
            k_max=args.kmax,
            p_max=args.pmax,
            jobs=args.jobs,
            cache=cache,
            oracle=args.oracle,
            timing=args.timing,
        ):
            reports.append(report)
            out.write(report.to_jsonl() + "\n")
    except CounterexampleError as e:
        out.write(e.report.to_jsonl() + "\n")
        raise
    finally:
        if args.summary:
            write_summary_csv(reports, args.summary)
        if out is not sys.stdout:
            out.close()
        if cache is not None:
            cache.close()

    counts = tally(reports)
    log_event(
        "verify_summary",
        {
            "configs": len(reports),
            "checked": sum(c["pass"] + c["fail"] for c in counts.values()),
            "vacuous": sum(c["vacuous"] for c in counts.values()),
            "unsupported": sum(c["unsupported"] for c in counts.values()),
        },
    )
    return EXIT_OK


def cmd_fermat(args) -> int:
    report = fermat_check(args.p, args.e, mode="exhaustive" if args.exhaustive else "auto")
    _emit(report.model_dump())
    return EXIT_COUNTEREXAMPLE if report.status == "fail" else EXIT_OK


COMMANDS = {
    "table": cmd_table,
    "norm": cmd_norm,
    "rootsum": cmd_rootsum,
    "transfer": cmd_transfer,
    "verify": cmd_verify,
    "fermat": cmd_fermat,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse argv, dispatch one subcommand and map errors to exit codes."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    if args.log_level:
        setup_logging(args.log_level)

    try:
        return COMMANDS[args.command](args)
    except CounterexampleError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_COUNTEREXAMPLE
    except ResourceLimitError as e:
        log_event(
            "resource_limit_exceeded",
            {"bound": e.bound_name, "limit": e.bound, "requested": e.requested},
            level="ERROR",
        )
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except (InvalidArgumentError, UnsupportedCaseError, ValidationError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        log_event("output_failed", {"command": args.command, "error": str(e)}, level="ERROR")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


def main():
    """CLI entrypoint."""
    sys.exit(run())


if __name__ == "__main__":
    main()
