"""Command-line entry point: ``robinlab <command> [options]``.

Exit codes: 0 success, 1 audit failures, 2 usage errors, 3 capacity or
precision errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from typing import Optional, TextIO

from . import ca, primes, robin, theorems
from .errors import CapacityError, DomainError, NoBracketError, PreconditionError, TieError, UndecidedError
from .factored import FactoredNumber, parse
from .numerics import DEFAULT_MAX_DIGITS, DIGITS_ENV_VAR, Precision, Real, ln
from .primes import DEFAULT_SEGMENT_SIZE

EXIT_OK, EXIT_AUDIT, EXIT_USAGE, EXIT_CAPACITY = 0, 1, 2, 3

# mertens runs above this need --slow
MERTENS_FAST_LIMIT = 10**9


@dataclass(frozen=True)
class RunConfig:
    digits: int
    max_digits: int
    segment_size: int
    output_format: str  # json, csv or text
    slow_tests_enabled: bool = False
    threads: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.digits > self.max_digits:
            raise ValueError("--digits must not exceed --max-digits")
        if self.segment_size < 1 or self.segment_size & (self.segment_size - 1):
            raise ValueError("--segment-size must be a power of two")
        if self.output_format not in ("json", "csv", "text"):
            raise ValueError(f"unknown output format {self.output_format}")

    @property
    def prec(self) -> Precision:
        return Precision(self.digits, self.max_digits)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _int(text: str) -> int:
    """Integers with optional 10^k or 1e7 shorthand."""
    t = text.strip().replace("_", "")
    if "^" in t:
        base, exp = t.split("^")
        return int(base) ** int(exp)
    if "e" in t.lower():
        m, e = t.lower().split("e")
        return int(m) * 10 ** int(e)
    return int(t)


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--digits", type=int, default=None, help=f"working digits (default ${DIGITS_ENV_VAR} or 50)")
    p.add_argument("--max-digits", type=int, default=None, help="escalation ceiling")
    p.add_argument("--segment-size", type=_int, default=DEFAULT_SEGMENT_SIZE, help="sieve segment, a power of two")
    p.add_argument("--threads", type=int, default=None, help="worker threads (default: CPU count)")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON output")
    fmt.add_argument("--csv", action="store_true", help="CSV output")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    p.add_argument("--slow", action="store_true", help="allow long runs")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    _common(common)
    parser = _Parser(prog="robinlab", description="Robin inequality and colossally abundant number toolkit")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("sieve", parents=[common], help="primes in [lo, hi]")
    s.add_argument("--lo", type=_int, required=True)
    s.add_argument("--hi", type=_int, required=True)
    s.add_argument("--count-only", action="store_true")

    r = sub.add_parser("robin", help="Robin inequality")
    rs = r.add_subparsers(dest="action", parser_class=_Parser)
    v = rs.add_parser("verify", parents=[common], help="all violations up to a limit")
    v.add_argument("--limit", type=_int, required=True)
    v.add_argument("--oracle-check", type=_int, default=None, help="cross-check against divisor enumeration up to U")
    c = rs.add_parser("check", parents=[common], help="decide one n")
    c.add_argument("n")

    m = sub.add_parser("mertens", parents=[common], help="Mertens product remainder")
    m.add_argument("--n", type=_int, required=True)

    a = sub.add_parser("ca", help="colossally abundant numbers")
    cs = a.add_subparsers(dest="action", parser_class=_Parser)
    ch = cs.add_parser("chain", parents=[common])
    ch.add_argument("--steps", type=_int, required=True)
    xk = cs.add_parser("xk", parents=[common])
    xk.add_argument("--eps", required=True)
    xk.add_argument("--k", type=int, required=True)
    t4 = cs.add_parser("thm4", parents=[common])
    t4.add_argument("--eps", required=True)
    t4.add_argument("--kmax", type=int, default=40)
    t4.add_argument("--exploratory", action="store_true", help="allow largest prime below 3299")

    t = sub.add_parser("theorems", help="structural audits")
    ts = t.add_subparsers(dest="action", parser_class=_Parser)
    au = ts.add_parser("audit", parents=[common])
    au.add_argument("--n", required=True, help="factored string such as 2^4*3^2*5*7, or a decimal")
    sw = ts.add_parser("sweep", parents=[common])
    sw.add_argument("--chain-steps", type=_int, required=True)
    return parser


def _config(args) -> RunConfig:
    env = Precision.from_env()
    digits = args.digits if args.digits is not None else env.digits
    max_digits = args.max_digits if args.max_digits is not None else max(DEFAULT_MAX_DIGITS, digits)
    fmt = "json" if args.json else "csv" if args.csv else "default"
    if fmt == "default":
        fmt = "text" if args.command == "sieve" else "json"
    threads = args.threads if args.threads is not None else (os.cpu_count() or 1)
    if threads < 1:
        raise ValueError("--threads must be >= 1")
    return RunConfig(digits, max_digits, args.segment_size, fmt, args.slow, threads, args.seed)


# value conversion ------------------------------------------------------------


def _plain(obj):
    if isinstance(obj, Real):
        return float(obj.value)
    if isinstance(obj, FactoredNumber):
        return str(obj)
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if hasattr(obj, "value") and hasattr(obj, "name"):  # enums
        return obj.value
    return obj


def _emit(out: TextIO, cfg: RunConfig, payload, rows: Optional[list[dict]] = None) -> None:
    """Write ``payload`` as JSON, ``rows`` (or the flat payload) as CSV or text."""
    if cfg.output_format == "json":
        json.dump(_plain(payload), out, indent=2, sort_keys=False)
        out.write("\n")
        return
    rows = rows if rows is not None else [_plain(payload)]
    rows = [_plain(r) for r in rows]
    if cfg.output_format == "csv":
        buf = io.StringIO()
        keys = list(rows[0].keys()) if rows else []
        w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n", extrasaction="ignore")
        w.writeheader()
        for r in rows:
            w.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in r.items()})
        out.write(buf.getvalue())
        return
    for r in rows:
        out.write("  ".join(f"{k}={v}" for k, v in r.items()) + "\n")


# commands ----------------------------------------------------------------------


def cmd_sieve(args, cfg: RunConfig, out: TextIO) -> int:
    if args.hi < args.lo:
        raise ValueError("--hi must be >= --lo")
    if args.count_only or cfg.output_format == "json":
        count, first, last = 0, None, None
        for seg in primes.iter_prime_segments(args.lo, args.hi, cfg.segment_size):
            if len(seg):
                first = int(seg[0]) if first is None else first
                last = int(seg[-1])
                count += len(seg)
        summary = {"lo": args.lo, "hi": args.hi, "count": count, "first": first, "last": last}
        if cfg.output_format == "csv":
            _emit(out, cfg, summary)
        else:
            json.dump(summary, out)
            out.write("\n")
        return EXIT_OK
    if cfg.output_format == "csv":
        out.write("p\n")
    for seg in primes.iter_prime_segments(args.lo, args.hi, cfg.segment_size):
        if len(seg):
            out.write("\n".join(map(str, seg.tolist())) + "\n")
    return EXIT_OK


def cmd_robin_verify(args, cfg: RunConfig, out: TextIO) -> int:
    found = robin.exhaustive_scan(args.limit, cfg.segment_size, cfg.threads, cfg.prec)
    payload = {"limit": args.limit, "violations": found, "max_violation": max(found) if found else None}
    status = EXIT_OK
    if args.oracle_check is not None:
        upto = min(args.oracle_check, args.limit)
        naive = robin.naive_violations(upto)
        agree = naive == [n for n in found if n <= upto]
        payload["oracle_check"] = {"upto": upto, "agrees": agree}
        status = EXIT_OK if agree else EXIT_AUDIT
    rows = [{"n": n} for n in found]
    _emit(out, cfg, payload, rows)
    return status


def cmd_robin_check(args, cfg: RunConfig, out: TextIO) -> int:
    n = parse(args.n)
    v = robin.robin_holds(n, cfg.prec)
    label = int(args.n) if args.n.strip().isdigit() else str(n)
    payload = {"n": label, "factored": str(n), "state": v.state.value, "G": v.g_value, "margin": v.margin}
    _emit(out, cfg, payload)
    return EXIT_OK


def cmd_mertens(args, cfg: RunConfig, out: TextIO) -> int:
    if args.n > MERTENS_FAST_LIMIT and not cfg.slow_tests_enabled:
        raise CapacityError(f"mertens --n above {MERTENS_FAST_LIMIT} takes minutes; pass --slow")
    r = robin.mertens_product(args.n, cfg.prec, cfg.segment_size, cfg.threads)
    payload = {
        "n": r.n,
        "sum_logs": r.sum_logs,
        "predicted": r.predicted,
        "remainder": r.remainder,
        "remainder_err": float(r.remainder.err),
        "bound": r.bound,
        "within_bound": r.within_bound,
    }
    _emit(out, cfg, payload)
    return EXIT_OK


def _chain_row(e: ca.CAChainEntry, prec: Precision) -> dict:
    g = None
    if e.log_n.value > 1:
        g = e.rho / ln(e.log_n, prec)
    return {
        "index": e.index,
        "factored": str(e.N),
        "added_prime": e.added_prime,
        "new_exponent": e.new_exponent,
        "critical_eps": e.critical_eps,
        "logN": e.log_n,
        "G": g,
        "tie": e.tie,
    }


def cmd_ca_chain(args, cfg: RunConfig, out: TextIO) -> int:
    if args.steps < 1:
        raise ValueError("--steps must be >= 1")
    rows = [_chain_row(e, cfg.prec) for e in ca.ca_chain(args.steps, cfg.prec)]
    _emit(out, cfg, rows, rows)
    return EXIT_OK


def _eps(text: str, prec: Precision) -> Real:
    eps = Real.exact(text.strip(), prec)
    if eps.value <= 0:
        raise DomainError("eps must be > 0")
    return eps


def cmd_ca_xk(args, cfg: RunConfig, out: TextIO) -> int:
    if args.k < 1:
        raise ValueError("--k must be >= 1")
    x = ca.solve_xk(lambda q: _eps(args.eps, q), args.k, cfg.prec)
    _emit(out, cfg, {"eps": args.eps, "k": args.k, "x_k": x, "err": float(x.err)})
    return EXIT_OK


def cmd_ca_thm4(args, cfg: RunConfig, out: TextIO) -> int:
    rep = ca.thm4_check(lambda q: _eps(args.eps, q), args.kmax, cfg.prec, exploratory=args.exploratory)
    rows = [
        {"k": m.k, "x_k": m.x_k, "bound": m.bound, "margin": m.margin, "cns_margin": m.cns_margin, "certified": m.certified}
        for m in rep.margins
    ]
    payload = {
        "eps": args.eps,
        "p": rep.p,
        "x_1": rep.x_1,
        "exploratory": rep.exploratory,
        "holds": rep.holds,
        "margins": rows,
    }
    _emit(out, cfg, payload, rows)
    return EXIT_OK if rep.holds else EXIT_AUDIT


def _report_rows(reports, extra: dict) -> list[dict]:
    return [{**extra, **r.to_json()} for r in reports]


def cmd_theorems_audit(args, cfg: RunConfig, out: TextIO) -> int:
    n = parse(args.n)
    reports = theorems.audit(n, cfg.prec)
    rows = _report_rows(reports, {"N": str(n)})
    _emit(out, cfg, {"N": str(n), "reports": [r.to_json() for r in reports]}, rows)
    return EXIT_AUDIT if theorems.implication_failures(reports) else EXIT_OK


def cmd_theorems_sweep(args, cfg: RunConfig, out: TextIO) -> int:
    if args.chain_steps < 1:
        raise ValueError("--chain-steps must be >= 1")
    entries, rows, failed = [], [], False
    for e, reports in theorems.chain_sweep(args.chain_steps, cfg.prec):
        entries.append({"index": e.index, "N": str(e.N), "reports": [r.to_json() for r in reports]})
        rows.extend(_report_rows(reports, {"index": e.index}))
        failed = failed or bool(theorems.implication_failures(reports))
    _emit(out, cfg, entries, rows)
    return EXIT_AUDIT if failed else EXIT_OK


COMMANDS = {
    ("sieve", None): cmd_sieve,
    ("robin", "verify"): cmd_robin_verify,
    ("robin", "check"): cmd_robin_check,
    ("mertens", None): cmd_mertens,
    ("ca", "chain"): cmd_ca_chain,
    ("ca", "xk"): cmd_ca_xk,
    ("ca", "thm4"): cmd_ca_thm4,
    ("theorems", "audit"): cmd_theorems_audit,
    ("theorems", "sweep"): cmd_theorems_sweep,
}


def dispatch(argv: Optional[list[str]] = None, out: TextIO = None, err: TextIO = None) -> int:
    """Run one command; returns the exit code."""
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        key = (args.command, getattr(args, "action", None))
        if key not in COMMANDS:
            raise UsageError(parser.format_usage() + "robinlab: error: missing or unknown subcommand")
        cfg = _config(args)
        return COMMANDS[key](args, cfg, out)
    except UsageError as e:
        err.write(str(e) + "\n")
        return EXIT_USAGE
    except (CapacityError, UndecidedError, TieError, NoBracketError, OverflowError) as e:
        err.write(f"robinlab: {type(e).__name__}: {e}\n")
        return EXIT_CAPACITY
    except (DomainError, PreconditionError, ValueError, ZeroDivisionError) as e:
        err.write(f"robinlab: {type(e).__name__}: {e}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(dispatch())
