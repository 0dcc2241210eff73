"""Command-line front end.

Results go to stdout and are deterministic; progress goes to stderr.
Exit status: 0 success, 1 domain failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import logging
import os
import re
import sys
import time

from . import analysis, certificates as cert_mod, sieve
from .certificates import Certificate, CertificateFormatError
from .sieve import MemoryCapError, SieveConfig, SieveError, TableFormatError

log = logging.getLogger("twosq")

_DECIMAL = re.compile(r"[0-9]+")


def u64(text: str) -> int:
    if not _DECIMAL.fullmatch(text):
        raise argparse.ArgumentTypeError(f"expected a decimal integer, got {text!r}")
    value = int(text)
    if value >= 1 << 64:
        raise argparse.ArgumentTypeError(f"{text} does not fit in 64 bits")
    return value


def gib(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number of GiB, got {text!r}") from None
    if not value > 0:
        raise argparse.ArgumentTypeError("memory cap must be positive")
    return value


def _add(p, *names):
    opts = {
        "limit": dict(type=u64, default=1 << 20, help="exclusive sieve bound (default 2^20)"),
        "k": dict(type=u64, default=2, help="max number of powers of 2 (default 2)"),
        "threads": dict(type=u64, default=os.cpu_count() or 1, help="worker threads"),
        "filter-mod": dict(type=u64, default=0, help="track only n = res (mod this); 0 = all"),
        "filter-res": dict(type=u64, default=0, help="residue kept by --filter-mod"),
        "n": dict(type=u64, required=True),
        "res": dict(type=u64, required=True),
        "mod": dict(type=u64, required=True),
        "from": dict(type=u64, default=2, dest="start", help="search start (default 2)"),
        "out": dict(default=None, help="output file"),
        "cert": dict(required=True, help="certificate file"),
        "mem-cap-gib": dict(type=gib, default=None,
                            help="refuse sieves needing more memory (env TWOSQ_MEM_CAP_GIB)"),
    }
    for name in names:
        p.add_argument(f"--{name}", **opts[name])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twosq", description="Sums of two squares and at most k powers of 2.")
    parser.add_argument("-v", "--verbose", action="store_true", help="progress on stderr")
    sub = parser.add_subparsers(dest="command", required=True)
    sieve_flags = ("limit", "k", "threads", "mem-cap-gib")
    _add(sub.add_parser("sieve", help="run the sieve, optionally saving the table"),
         *sieve_flags, "filter-mod", "filter-res", "out")
    _add(sub.add_parser("find-first", help="smallest non-representable n >= --from"),
         *sieve_flags, "filter-mod", "filter-res", "from")
    _add(sub.add_parser("certify", help="certificate of non-representability"), "n", "k", "out")
    _add(sub.add_parser("verify", help="check a certificate file"), "cert")
    _add(sub.add_parser("count", help="count non-representables in [2, limit]"), *sieve_flags)
    _add(sub.add_parser("family", help="check a residue class up to --limit"),
         "res", "mod", "k", "limit")
    _add(sub.add_parser("prove-family", help="congruence proof for a residue class"),
         "res", "mod", "k")
    _add(sub.add_parser("shift-check", help="check N-2 is representable for every k=2 failure"),
         "limit", "threads", "mem-cap-gib")
    tower = sub.add_parser("tower", help="lift a certificate, or list 2^a * n below --limit")
    tower.add_argument("--n", type=u64, default=None)
    tower.add_argument("--limit", type=u64, default=None)
    tower.add_argument("--cert", default=None)
    return parser


def _sieve(args, k=None) -> sieve.MarkTable:
    cfg = SieveConfig(
        args.limit, args.k if k is None else k,
        getattr(args, "filter_mod", 0), getattr(args, "filter_res", 0), max(1, args.threads))
    log.info("sieving limit=%d k=%d cells=%d threads=%d", cfg.limit, cfg.k,
             cfg.cell_count, cfg.workers)
    t = time.perf_counter()
    table = sieve.run_sieve(cfg, args.mem_cap_gib)
    log.info("sieve done in %.2fs", time.perf_counter() - t)
    return table


def cmd_sieve(args):
    table = _sieve(args)
    cfg = table.config
    count = sieve.unmarked_count(table, 0, cfg.limit)
    print(f"SIEVE limit={cfg.limit} k={cfg.k} filter-mod={cfg.filter_modulus} "
          f"filter-res={cfg.filter_residue} cells={cfg.cell_count} unmarked={count}")
    if args.out:
        sieve.save_table(table, args.out)
    return 0


def cmd_find_first(args):
    first = sieve.first_unmarked(_sieve(args), args.start)
    if first is None:
        print("NONE")
        return 1
    print(first)
    return 0


def cmd_certify(args):
    if args.n < 1:
        raise SieveError("--n must be >= 1")
    out = cert_mod.certify(args.n, args.k)
    if not isinstance(out, Certificate):
        powers = "".join(f" + 2^{a}" for a in out.exponents)
        print(f"REPRESENTABLE {out.n} = {out.x}^2 + {out.y}^2{powers}")
        return 1
    if args.out:
        cert_mod.save_certificate(out, args.out)
        print(f"CERTIFIED n={out.n} k={out.k} cases={len(out.cases)}")
    else:
        sys.stdout.write(cert_mod.dumps_certificate(out))
    return 0


def cmd_verify(args):
    result = cert_mod.verify_certificate(cert_mod.load_certificate(args.cert))
    print(result.diagnostic if result else f"FAIL {result.diagnostic}")
    return 0 if result else 1


def cmd_count(args):
    table = _sieve(argparse.Namespace(**{**vars(args), "limit": args.limit + 1}))
    report = analysis.density_report(args.limit, args.k, table)
    print(f"limit      {report.limit}")
    print(f"k          {report.k}")
    print(f"count      {report.nonrepresentable_count}")
    print(f"density    {float(report.density):.6e}")
    print(f"first      {' '.join(map(str, report.sample_listing[:20]))}")
    print(report.record())
    return 0


def cmd_family(args):
    result = analysis.residue_family_check(args.res, args.mod, args.k, args.limit)
    if result:
        print("HOLDS")
        return 0
    print(f"FAILS at {result.counterexample}")
    return 1


def cmd_prove_family(args):
    proof = analysis.residue_family_prove(args.res, args.mod, args.k)
    print(proof.table())
    print("PROVED" if proof else "UNPROVED")
    return 0 if proof else 1


def cmd_shift_check(args):
    result = analysis.shift_check(_sieve(argparse.Namespace(**vars(args), k=2), k=2))
    if result:
        print(f"OK ({result.checked} non-representables, 0 violations)")
        return 0
    print(f"FAIL {len(result.violations)} violations: "
          + " ".join(map(str, result.violations[:20])))
    return 1


def cmd_tower(args):
    if args.cert:
        family = cert_mod.lift_family(cert_mod.load_certificate(args.cert))
        print(f"{family.rule}: {family.conclusion}")
        return 0
    if args.n is None or args.limit is None:
        raise SieveError("tower needs --cert, or both --n and --limit")
    values, count = analysis.tower_density_listing(args.n, args.limit)
    for v in values:
        print(v)
    print(f"COUNT base={args.n} limit={args.limit} value={count}")
    return 0


COMMANDS = {
    "sieve": cmd_sieve,
    "find-first": cmd_find_first,
    "certify": cmd_certify,
    "verify": cmd_verify,
    "count": cmd_count,
    "family": cmd_family,
    "prove-family": cmd_prove_family,
    "shift-check": cmd_shift_check,
    "tower": cmd_tower,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(message)s"))
    log.handlers = [handler]
    log.propagate = False
    log.setLevel(logging.INFO if args.verbose else logging.WARNING)
    try:
        return COMMANDS[args.command](args)
    except (CertificateFormatError, TableFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (MemoryCapError, cert_mod.HypothesisNotMet) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (SieveError, ValueError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
