"""Non-representability certificates and the tower rules that lift one
certificate to the infinite family ``2**alpha * n``.

A certificate for ``(n, k)`` lists every way of subtracting at most ``k``
distinct powers of 2 from ``n`` and, for each remainder, a prime p = 3 (mod 4)
dividing it to an odd power.
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass, field
from typing import Iterable, Iterator, TextIO

from .arith import MAX_N, is_prime, two_square_sums_mod, two_squares_classify

MAX_K = 3


@dataclass(frozen=True)
class CaseRecord:
    exponents: tuple[int, ...]
    remainder: int
    obstruction: tuple[int, int]


@dataclass(frozen=True)
class Certificate:
    n: int
    k: int
    cases: tuple[CaseRecord, ...]


@dataclass(frozen=True)
class RepresentationWitness:
    n: int
    x: int
    y: int
    exponents: tuple[int, ...]

    def value(self) -> int:
        return self.x**2 + self.y**2 + sum(1 << a for a in self.exponents)


@dataclass(frozen=True)
class Verification:
    ok: bool
    diagnostic: str = ""

    def __bool__(self):
        return self.ok


class HypothesisNotMet(ValueError):
    pass


class CertificateFormatError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


RULES = {2: "mod18-tower", 1: "even-tower", 0: "doubling"}


@dataclass(frozen=True)
class FamilyStatement:
    base: Certificate
    rule: str
    conclusion: str = field(default="")


def _check_k(k: int) -> None:
    if k not in range(MAX_K + 1):
        raise ValueError(f"k must be in 0..{MAX_K}, got {k}")


def enumerate_cases(n: int, k: int) -> list[tuple[tuple[int, ...], int]]:
    """Every choice of at most ``k`` distinct exponents whose powers sum to at
    most ``n``, with the remainder left over.

    Ordered by subset size, then lexicographically on the exponents written in
    decreasing order.

    >>> enumerate_cases(1, 1)
    [((), 1), ((0,), 0)]
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    _check_k(k)
    return list(iter_cases(n, k))


def iter_cases(n: int, k: int) -> Iterator[tuple[tuple[int, ...], int]]:
    """Lazy form of :func:`enumerate_cases`, same order."""

    def rest(prefix, total, left):
        # exponents below prefix[-1], ascending; each level stays lexicographic
        if not left:
            yield prefix, n - total
            return
        for a in range(prefix[-1]):
            if total + (1 << a) > n:
                break
            yield from rest(prefix + (a,), total + (1 << a), left - 1)

    top = n.bit_length()
    yield (), n
    for j in range(1, k + 1):
        for a in range(top):
            if 1 << a > n:
                break
            yield from rest((a,), 1 << a, j - 1)


def certify(n: int, k: int) -> Certificate | RepresentationWitness:
    """Certificate that ``n`` is not x**2 + y**2 plus at most ``k`` powers of
    2, or the first representation met while building it."""
    if not 1 <= n <= MAX_N:
        raise ValueError(f"n must be in [1, 2**63], got {n}")
    cases = []
    for exps, rem in iter_cases(n, k):
        verdict = two_squares_classify(rem)
        if verdict.representable:
            x, y = verdict.witness
            return RepresentationWitness(n, x, y, exps)
        cases.append(CaseRecord(exps, rem, verdict.obstruction))
    return Certificate(n, k, tuple(cases))


def _expected_cases(n: int, k: int) -> set[tuple[int, ...]]:
    # Recomputed independently of enumerate_cases: walk exponents by value.
    found = set()

    def grow(prefix: tuple[int, ...], total: int) -> None:
        found.add(prefix)
        if len(prefix) == k:
            return
        below = prefix[-1] if prefix else n.bit_length() + 1
        for a in range(below):
            if total + (1 << a) <= n:
                grow(prefix + (a,), total + (1 << a))

    grow((), 0)
    return found


def verify_certificate(cert: Certificate) -> Verification:
    """Check coverage, remainder arithmetic and every obstruction without
    factoring anything."""
    if cert.n < 1 or cert.k not in range(MAX_K + 1):
        return Verification(False, f"bad header n={cert.n} k={cert.k}")
    expected = _expected_cases(cert.n, cert.k)
    seen = set()
    for i, case in enumerate(cert.cases):
        tag = f"case {i} (exps={_fmt_exps(case.exponents)} rem={case.remainder})"
        exps = case.exponents
        if any(a <= b for a, b in zip(exps, exps[1:])) or any(a < 0 for a in exps):
            return Verification(False, f"{tag}: exponents not strictly decreasing [coverage]")
        if exps in seen:
            return Verification(False, f"{tag}: duplicate case [coverage]")
        if exps not in expected:
            return Verification(False, f"{tag}: unexpected case [coverage]")
        seen.add(exps)
        if case.remainder != cert.n - sum(1 << a for a in exps):
            return Verification(False, f"{tag}: remainder inconsistent with exponents [remainder]")
        p, e = case.obstruction
        if p % 4 != 3:
            return Verification(False, f"{tag}: p={p} is not 3 mod 4 [obstruction]")
        if e < 1 or e % 2 == 0:
            return Verification(False, f"{tag}: even exponent e={e} [obstruction]")
        pe = p**e
        if case.remainder % pe != 0:
            return Verification(False, f"{tag}: p^e does not divide remainder [obstruction]")
        if case.remainder % (pe * p) == 0:
            return Verification(False, f"{tag}: p^(e+1) divides remainder [obstruction]")
        if p > MAX_N or not is_prime(p):
            return Verification(False, f"{tag}: p={p} is not prime [obstruction]")
    missing = sorted(expected - seen, key=lambda t: (len(t), t))
    if missing:
        return Verification(False, f"missing case exps={_fmt_exps(missing[0])} [coverage]")
    return Verification(True, f"OK ({len(cert.cases)} cases)")


def lift_family(cert: Certificate) -> FamilyStatement:
    """Apply the tower rule matching ``cert.k``.

    k=2 needs 18 | n, k=1 needs 2 | n, k=0 needs nothing.
    """
    check = verify_certificate(cert)
    if not check:
        raise HypothesisNotMet(f"certificate does not verify: {check.diagnostic}")
    n, k = cert.n, cert.k
    if k == 2:
        if n % 18:
            raise HypothesisNotMet(f"18 does not divide n={n} (n mod 18 = {n % 18})")
        # 2n-1 and 2n-1-2^b (b>=2) are 3 mod 4; 2n-3 is 6 mod 9.
        assert 3 not in two_square_sums_mod(4) and 6 not in two_square_sums_mod(9)
    elif k == 1:
        if n % 2:
            raise HypothesisNotMet(f"2 does not divide n={n}")
        assert 3 not in two_square_sums_mod(4)
    elif k != 0:
        raise HypothesisNotMet(f"no tower rule known for k={k}")
    rule = RULES[k]
    return FamilyStatement(
        cert, rule, f"2^alpha * {n} non-representable for all alpha >= 0 (k={k}, {rule})")


@dataclass(frozen=True)
class FamilyCheck:
    ok: bool
    results: dict[int, str]

    def __bool__(self):
        return self.ok


def spot_check_family(family: FamilyStatement, alphas: Iterable[int]) -> FamilyCheck:
    """Certify ``2**alpha * n`` directly for each requested alpha."""
    results = {}
    for alpha in alphas:
        m = family.base.n << alpha
        if m > MAX_N:
            results[alpha] = "out of range"
            continue
        out = certify(m, family.base.k)
        if isinstance(out, Certificate):
            results[alpha] = "certified"
        else:
            results[alpha] = f"representable: {out.x}^2+{out.y}^2+{_fmt_powers(out.exponents)}"
    return FamilyCheck(all(v == "certified" for v in results.values()), results)


def _fmt_exps(exps: tuple[int, ...]) -> str:
    return ",".join(map(str, exps)) if exps else "-"


def _fmt_powers(exps: tuple[int, ...]) -> str:
    return "+".join(f"2^{a}" for a in exps) if exps else "0"


def write_certificate(cert: Certificate, fh: TextIO) -> None:
    fh.write(f"CERT v1\nN {cert.n}\nK {cert.k}\n")
    for c in cert.cases:
        p, e = c.obstruction
        fh.write(f"CASE exps={_fmt_exps(c.exponents)} rem={c.remainder} p={p} e={e}\n")
    fh.write("END\n")


def dumps_certificate(cert: Certificate) -> str:
    buf = io.StringIO()
    write_certificate(cert, buf)
    return buf.getvalue()


def _decimal(text: str, line: int) -> int:
    if not text.isdigit() or not text.isascii():
        raise CertificateFormatError(f"expected a decimal integer, got {text!r}", line)
    return int(text)


def loads_certificate(text: str) -> Certificate:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or not lines[0].startswith("CERT "):
        raise CertificateFormatError("missing 'CERT' header", 1)
    if lines[0] != "CERT v1":
        raise CertificateFormatError(f"unsupported version {lines[0][5:]!r}", 1)
    if len(lines) < 4:
        raise CertificateFormatError("truncated certificate", len(lines))
    n = k = None
    for i, key in ((1, "N"), (2, "K")):
        head, _, val = lines[i].partition(" ")
        if head != key:
            raise CertificateFormatError(f"expected '{key} <decimal>'", i + 1)
        if key == "N":
            n = _decimal(val, i + 1)
        else:
            k = _decimal(val, i + 1)
    cases = []
    for i in range(3, len(lines)):
        ln = lines[i]
        if ln == "END":
            if i != len(lines) - 1:
                raise CertificateFormatError("trailing data after END", i + 2)
            return Certificate(n, k, tuple(cases))
        parts = ln.split(" ")
        if len(parts) != 5 or parts[0] != "CASE":
            raise CertificateFormatError(f"malformed case line {ln!r}", i + 1)
        fields = {}
        for part, key in zip(parts[1:], ("exps", "rem", "p", "e")):
            name, eq, val = part.partition("=")
            if name != key or not eq:
                raise CertificateFormatError(f"expected field '{key}=' in {ln!r}", i + 1)
            fields[key] = val
        exps = () if fields["exps"] == "-" else tuple(
            _decimal(v, i + 1) for v in fields["exps"].split(","))
        cases.append(CaseRecord(
            exps, _decimal(fields["rem"], i + 1),
            (_decimal(fields["p"], i + 1), _decimal(fields["e"], i + 1))))
    raise CertificateFormatError("missing END", len(lines))


def save_certificate(cert: Certificate, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        write_certificate(cert, fh)


def load_certificate(path: str | os.PathLike) -> Certificate:
    with open(path, encoding="utf-8", newline="") as fh:
        return loads_certificate(fh.read())
