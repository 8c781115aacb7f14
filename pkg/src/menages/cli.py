"""Command line interface.

Exit codes: 0 success, 1 usage error, 2 FAIL (nothing found within budget),
3 oracle mismatch.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from .board import board_from_matrix, rook_polynomial
from .counting import _board, complement_matrix, permanent, umbral_count
from .guess import HELD_OUT
from .procedures import (
    DiskCache,
    baltic_gf,
    canonical_set,
    holonomic_info,
    rook_recurrence,
    rook_terms,
    terms,
)
from .report import build_report

EXIT_OK, EXIT_USAGE, EXIT_FAIL, EXIT_MISMATCH = 0, 1, 2, 3

_SET_TOKEN = re.compile(r"^\s*\{?\s*-\d+(\s*,\s*-?\d+)*\s*\}?\s*$")


class UsageError(ValueError):
    pass


def parse_set(text: str) -> tuple[int, ...]:
    """``"{-2,-1,1,2}"``, ``"-2,-1,1,2"``, ``"{}"`` or ``""``."""
    body = text.strip()
    if body.startswith("{") and body.endswith("}"):
        body = body[1:-1]
    body = body.replace(" ", "")
    if not body:
        return ()
    try:
        return tuple(sorted({int(x) for x in body.split(",")}))
    except ValueError:
        raise UsageError(f"cannot parse integer set {text!r}") from None


def parse_matrix(text: str) -> list[list[int]]:
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        cells = line.split() if " " in line else list(line)
        if any(c not in ("0", "1") for c in cells):
            raise UsageError(f"matrix line {line!r} is not made of 0/1 entries")
        rows.append([int(c) for c in cells])
    if any(len(r) != len(rows) for r in rows):
        raise UsageError("matrix is not square")
    return rows


def _mode(args) -> str:
    if getattr(args, "circular", False) and getattr(args, "allowed", False):
        raise UsageError("--circular and --allowed are exclusive")
    if getattr(args, "circular", False):
        return "circular"
    if getattr(args, "allowed", False):
        return "allowed"
    return "straight"


def _emit(args, text: str, obj: dict) -> None:
    if args.format == "json":
        print(json.dumps(obj, sort_keys=True))
    else:
        print(text)


def _cache(args) -> DiskCache | None:
    return DiskCache(args.cache) if args.cache else None


def cmd_rp(args) -> int:
    m = parse_matrix(Path(args.matrix).read_text())
    p = rook_polynomial(board_from_matrix(m))
    _emit(args, str(p), {"n": len(m), "rook_polynomial": p.to_list()})
    return EXIT_OK


def cmd_rookrec(args) -> int:
    mode = _mode(args)
    if mode == "allowed":
        raise UsageError("rookrec needs a forbidden-position board (drop --allowed)")
    S = canonical_set(args.S, mode)
    rec = rook_recurrence(S, mode, args.max_order, args.max_tdeg, args.held_out, _cache(args))
    if rec is None:
        _emit(args, "FAIL", {"S": list(S), "mode": mode, "result": "FAIL"})
        return EXIT_FAIL
    _emit(args, str(rec), {"S": list(S), "mode": mode, "recurrence": rec.to_dict()})
    return EXIT_OK


def cmd_seq(args) -> int:
    mode = _mode(args)
    if args.N < 1:
        raise UsageError("N must be at least 1")
    S = canonical_set(args.S, mode)
    a = terms(S, mode, args.N, _cache(args))
    _emit(args, ", ".join(map(str, a)), {"S": list(S), "mode": mode, "terms": [str(x) for x in a]})
    return EXIT_OK


def cmd_info(args) -> int:
    if args.K is not None:
        raise UsageError("asymptotic expansions (K) are not supported")
    mode = _mode(args)
    S = canonical_set(args.S, mode)
    a, rec, ext = holonomic_info(S, mode, args.max_complexity, args.l1, args.l2,
                                 args.held_out, _cache(args), args.prefer)
    lines = [
        "(i) " + ", ".join(map(str, a)),
        "(ii) " + (str(rec) if rec is not None else "FAIL"),
        f"(iii) a({args.l2}) = {ext}" if ext is not None else "(iii) FAIL",
    ]
    _emit(args, "\n".join(lines), {
        "S": list(S), "mode": mode, "terms": [str(x) for x in a],
        "recurrence": rec.to_dict() if rec is not None else "FAIL",
        "L2": args.l2, "a_L2": str(ext) if ext is not None else "FAIL",
    })
    return EXIT_OK if rec is not None else EXIT_FAIL


def cmd_gfbaltic(args) -> int:
    S = tuple(args.S)
    if not S:
        raise UsageError("gfbaltic needs a nonempty set")
    gf = baltic_gf(S, args.N, args.max_order, args.held_out)
    if gf is None:
        _emit(args, "FAIL", {"S": list(S), "result": "FAIL"})
        return EXIT_FAIL
    _emit(args, str(gf), {"S": list(S), "gf": gf.to_dict()})
    return EXIT_OK


def cmd_report(args) -> int:
    mode = _mode(args)
    rep = build_report(args.S, mode, N=args.N, max_order=args.max_order, max_tdeg=args.max_tdeg,
                       max_complexity=args.max_complexity, L2=args.l2, held_out=args.held_out,
                       check_upto=args.n_max, cache=_cache(args))
    text = rep.markdown()
    if args.out:
        Path(args.out).write_text(text + "\n")
        print(args.out)
    else:
        print(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    mode = _mode(args)
    if mode == "allowed":
        raise UsageError("verify compares the umbral path with the permanent; drop --allowed")
    S = canonical_set(args.S, mode)
    R = rook_terms(S, mode, args.n_max, _cache(args))
    bad = 0
    rows = []
    for n in range(1, args.n_max + 1):
        u = umbral_count(R[n - 1], n)
        p = permanent(complement_matrix(_board(S, n, mode)))
        ok = u == p
        bad += not ok
        rows.append({"n": n, "umbral": str(u), "permanent": str(p), "ok": ok})
    text = "\n".join(f"n={r['n']} umbral={r['umbral']} permanent={r['permanent']} "
                     f"{'ok' if r['ok'] else 'MISMATCH'}" for r in rows)
    text += f"\n{'all pass' if not bad else f'{bad} mismatches'}"
    _emit(args, text, {"S": list(S), "mode": mode, "checks": rows, "pass": not bad})
    return EXIT_MISMATCH if bad else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--cache", metavar="PATH", help="directory for the advisory JSON cache")
    common.add_argument("--held-out", type=int, default=HELD_OUT,
                        help="terms kept out of every fit and used to verify it (default 10)")

    modes = argparse.ArgumentParser(add_help=False)
    modes.add_argument("--circular", action="store_true", help="round table: displacements mod n")
    modes.add_argument("--allowed", action="store_true", help="count pi(i)-i IN S instead")

    p = argparse.ArgumentParser(
        prog="menages",
        description="Enumerate permutations with restricted displacements and guess their recurrences.",
        epilog="Sets are written '{-2,-1,1,2}' or '-2,-1,1,2'; '{}' is the empty set.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("rp", parents=[common], help="rook polynomial of a 0/1 matrix file")
    s.add_argument("matrix", help="file with one row of 0/1 characters per line (spaces optional)")
    s.set_defaults(func=cmd_rp)

    s = sub.add_parser("rookrec", parents=[common, modes],
                       help="C-finite recurrence of the rook polynomials")
    s.add_argument("S", type=parse_set)
    s.add_argument("--max-order", type=int, default=12)
    s.add_argument("--max-tdeg", type=int, default=None, help="default: --max-order")
    s.set_defaults(func=cmd_rookrec)

    s = sub.add_parser("seq", parents=[common, modes], help="first N terms, starting at n=1")
    s.add_argument("S", type=parse_set)
    s.add_argument("N", type=int)
    s.set_defaults(func=cmd_seq)

    s = sub.add_parser("info", parents=[common, modes],
                       help="terms, minimal holonomic recurrence, and a far term")
    s.add_argument("S", type=parse_set)
    s.add_argument("--max-complexity", type=int, default=9, help="order + degree budget (MaxC)")
    s.add_argument("--prefer", choices=("order", "degree"), default="order",
                   help="minimise the order (default) or the degree first")
    s.add_argument("--l1", type=int, default=20, help="number of terms to print")
    s.add_argument("--l2", type=int, default=100, help="index of the far term to compute")
    s.add_argument("--K", type=int, default=None, help="reserved; asymptotics are not supported")
    s.set_defaults(func=cmd_info)

    s = sub.add_parser("gfbaltic", parents=[common],
                       help="generating function for permutations with pi(i)-i in S")
    s.add_argument("S", type=parse_set)
    s.add_argument("N", type=int, nargs="?", default=40, help="terms to compute (default 40)")
    s.add_argument("--max-order", type=int, default=None)
    s.set_defaults(func=cmd_gfbaltic)

    s = sub.add_parser("report", parents=[common, modes], help="write a markdown report")
    s.add_argument("S", type=parse_set)
    s.add_argument("--out", help="output file (default: stdout)")
    s.add_argument("--N", type=int, default=20)
    s.add_argument("--max-order", type=int, default=12)
    s.add_argument("--max-tdeg", type=int, default=None)
    s.add_argument("--max-complexity", type=int, default=9)
    s.add_argument("--l2", type=int, default=100)
    s.add_argument("--n-max", type=int, default=9, help="oracle checks for n <= this")
    s.set_defaults(func=cmd_report)

    s = sub.add_parser("verify", parents=[common, modes],
                       help="umbral count vs permanent oracle for n = 1..n-max")
    s.add_argument("S", type=parse_set)
    s.add_argument("--n-max", type=int, default=8)
    s.set_defaults(func=cmd_verify)
    return p


def _protect_sets(argv: list[str]) -> list[str]:
    # argparse would read "-2,-1,1,2" as an option
    return [" " + a if _SET_TOKEN.match(a) and a.lstrip().startswith("-") else a for a in argv]


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_protect_sets(argv))
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
