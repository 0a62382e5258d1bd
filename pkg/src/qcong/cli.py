"""Command-line front end.

Exit codes: 0 success / verified, 1 counterexample found, 2 usage error,
3 truncation budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys

from . import series as sr
from .partitions import a_c_oracle
from .products import EtaParseError, eta_quotient, parse_eta_quotient
from .series import EXACT, Modular, SeriesError
from .verify import (
    BSeries,
    ClassicalPartition,
    CongruenceClaim,
    GeneralizedCubic,
    TruncationBudgetExceeded,
    check_budget,
    cited_congruence_suite,
    replay_proof,
    run_ordered,
    scan_congruences,
    verify_claim,
)

EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _nonneg(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text}")
    return v


def _modulus(text):
    v = int(text)
    if v < 2:
        raise argparse.ArgumentTypeError(f"modulus must be >= 2, got {text}")
    return v


def _int_list(text):
    try:
        values = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of integers, got {text!r}")
    if not values or any(v < 1 for v in values):
        raise argparse.ArgumentTypeError(f"progression steps must be positive integers, got {text!r}")
    return values


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("plain", "json", "csv"), default="plain")
    common.add_argument("--output", "-o", default=None, help="write to this file instead of stdout")
    common.add_argument("--threads", type=int, default=1, help="worker threads for independent checks")
    common.add_argument("--accelerated", action="store_true", help="use the Kronecker-substitution multiply")

    parser = argparse.ArgumentParser(prog="qcong", description="q-series congruence checks for generalized cubic partitions")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", parents=[common], help="expand an eta quotient like 'f1^-1 * f2^-4'")
    p.add_argument("expression")
    p.add_argument("--n", type=_nonneg, required=True, help="truncation order")
    p.add_argument("--mod", type=_modulus, default=None)

    p = sub.add_parser("oracle", parents=[common], help="count generalized cubic partitions by enumeration")
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--n", type=_nonneg, required=True)

    p = sub.add_parser("verify", parents=[common], help="check family(A n + B) = 0 mod M")
    _family_args(p)
    p.add_argument("--cform", default=None, help="color counts of the form 'Kc+L', used with --cmax")
    p.add_argument("--cmax", type=_nonneg, default=0)
    p.add_argument("--A", type=int, required=True)
    p.add_argument("--B", type=_nonneg, required=True)
    p.add_argument("--mod", type=_modulus, required=True)
    p.add_argument("--terms", type=_nonneg, required=True)
    p.add_argument("--cross-check", action="store_true", help="compare residues with the enumeration oracle")

    p = sub.add_parser("replay", parents=[common], help="replay the mod 7 or mod 11 proof step by step")
    p.add_argument("--prime", type=int, choices=(7, 11), required=True)
    p.add_argument("--cmax", type=_nonneg, default=0)
    p.add_argument("--n", type=_nonneg, default=None)

    p = sub.add_parser("scan", parents=[common], help="search for vanishing progressions")
    _family_args(p)
    p.add_argument("--mod", type=_modulus, required=True)
    p.add_argument("--A-list", dest="a_list", type=_int_list, required=True)
    p.add_argument("--terms", type=_nonneg, required=True)

    p = sub.add_parser("cited", parents=[common], help="check the classical congruences cited alongside the theorem")
    p.add_argument("--terms", type=_nonneg, default=None, help="override each claim's default range")
    return parser


def _family_args(p):
    p.add_argument("--family", choices=("cubic", "classical", "b"), required=True)
    p.add_argument("--c", type=int, default=None, help="color count for --family cubic")


def _family(args, c=None):
    if args.family == "classical":
        return ClassicalPartition()
    if args.family == "b":
        return BSeries()
    c = args.c if c is None else c
    if c is None:
        raise UsageError("--family cubic needs --c (or --cform with verify)")
    if c < 1:
        raise UsageError(f"--c must be >= 1, got {c}; families with c-parameter forms use --cform")
    return GeneralizedCubic(c)


def _emit_reports(reports, fmt):
    if fmt == "json":
        return "".join(r.to_json() + "\n" for r in reports)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["id", "status", "n_max", "counterexamples"])
        for r in reports:
            w.writerow([r.id, r.status.value, r.n_max, ";".join(f"{n}:{v}" for n, v in r.counterexamples)])
        return buf.getvalue()
    return "".join(str(r) + "\n" for r in reports)


def cmd_expand(args):
    try:
        spec = parse_eta_quotient(args.expression)
    except EtaParseError as exc:
        raise UsageError(f"bad expression: {exc} (offending token {exc.token!r})")
    check_budget("expand", args.n)
    ring = EXACT if args.mod is None else Modular(args.mod)
    s = eta_quotient(spec, args.n, ring)
    if args.format == "json":
        return EXIT_OK, sr.to_json(s) + "\n"
    if args.format == "csv":
        return EXIT_OK, sr.to_csv(s)
    return EXIT_OK, sr.to_plain(s) + "\n"


def cmd_oracle(args):
    if args.c < 1:
        raise UsageError(f"--c must be >= 1, got {args.c}")
    value = a_c_oracle(args.c, args.n)
    if args.format == "json":
        return EXIT_OK, json.dumps({"c": args.c, "n": args.n, "count": str(value)}) + "\n"
    if args.format == "csv":
        return EXIT_OK, f"c,n,count\n{args.c},{args.n},{value}\n"
    return EXIT_OK, f"{value}\n"


_CFORM = re.compile(r"(\d+)\*?c\+(\d+)")


def cmd_verify(args):
    if args.A < 1:
        raise UsageError(f"--A must be >= 1, got {args.A}")
    if args.cform is not None:
        if args.family != "cubic":
            raise UsageError("--cform only applies to --family cubic")
        m = _CFORM.fullmatch(args.cform.replace(" ", ""))
        if m is None:
            raise UsageError(f"--cform must look like '49c+5', got {args.cform!r}")
        k, l = int(m.group(1)), int(m.group(2))
        families = [_family(args, k * c + l) for c in range(args.cmax + 1)]
    else:
        families = [_family(args)]
    claims = [CongruenceClaim(f, args.A, args.B, args.mod, args.terms) for f in families]
    reports = run_ordered(lambda cl: verify_claim(cl, cross_check=args.cross_check), claims, args.threads)
    code = EXIT_OK if all(r.ok for r in reports) else EXIT_COUNTEREXAMPLE
    return code, _emit_reports(reports, args.format)


def cmd_replay(args):
    reports = replay_proof(args.prime, args.cmax, args.n, threads=args.threads)
    code = EXIT_OK if all(r.ok for r in reports) else EXIT_COUNTEREXAMPLE
    return code, _emit_reports(reports, args.format)


def cmd_scan(args):
    result = scan_congruences(_family(args), args.mod, args.a_list, args.terms, threads=args.threads)
    if args.format == "plain":
        if result.status.value == "skipped":
            return EXIT_OK, f"skipped: {result.witnesses} samples per progression is below the minimum\n"
        lines = [f"{c.statement}  ({result.witnesses} samples)" for c in result.candidates]
        return EXIT_OK, "".join(line + "\n" for line in lines)
    if args.format == "csv":
        rows = ["family,A,B,modulus,n_max"] + [
            f"{c.family},{c.A},{c.B},{c.modulus},{c.n_max}" for c in result.candidates
        ]
        return EXIT_OK, "\n".join(rows) + "\n"
    if result.status.value == "skipped":
        return EXIT_OK, json.dumps({"status": "skipped", "witnesses": result.witnesses}) + "\n"
    return EXIT_OK, "".join(json.dumps(c.to_dict()) + "\n" for c in result.candidates)


def cmd_cited(args):
    reports = cited_congruence_suite(args.terms, threads=args.threads)
    code = EXIT_OK if all(r.ok for r in reports) else EXIT_COUNTEREXAMPLE
    return code, _emit_reports(reports, args.format)


COMMANDS = {
    "expand": cmd_expand,
    "oracle": cmd_oracle,
    "verify": cmd_verify,
    "replay": cmd_replay,
    "scan": cmd_scan,
    "cited": cmd_cited,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be >= 1")
    previous = sr.set_accelerated(args.accelerated)
    try:
        code, text = COMMANDS[args.command](args)
    except UsageError as exc:
        parser.error(str(exc))
    except TruncationBudgetExceeded as exc:
        print(f"qcong: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except SeriesError as exc:
        print(f"qcong: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        sr.set_accelerated(previous)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
