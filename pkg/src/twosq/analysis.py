"""Counts, densities, residue-class families and the shift observation."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd

import numpy as np

from .arith import two_square_sums_mod
from .certificates import Certificate, certify
from .sieve import MarkTable, SieveError, unmarked

PROOF_MODULI = (4, 8, 9, 16, 32, 72)
MAX_SPLIT_DEPTH = 12


@dataclass(frozen=True)
class DensityReport:
    limit: int
    k: int
    nonrepresentable_count: int
    density: Fraction
    sample_listing: tuple[int, ...]

    def record(self) -> str:
        return f"COUNT limit={self.limit} k={self.k} value={self.nonrepresentable_count}"


def _require_plain(table: MarkTable, k: int | None = None) -> None:
    cfg = table.config
    if not table.sealed:
        raise SieveError("table is still building")
    if cfg.filter_modulus:
        raise SieveError("table must not use a residue filter")
    if k is not None and cfg.k != k:
        raise SieveError(f"table was built with k={cfg.k}, need k={k}")


def density_report(limit: int, k: int, table: MarkTable) -> DensityReport:
    """Non-representables in [2, limit], read off a sieve table."""
    _require_plain(table, k)
    if not 2 <= limit <= table.config.limit:
        raise SieveError(f"limit must be in [2, {table.config.limit}], got {limit}")
    found = unmarked(table, 2, min(limit + 1, table.config.limit))
    count = len(found)
    if limit == table.config.limit and isinstance(certify(limit, k), Certificate):
        # the inclusive endpoint lies just past the table
        count += 1
        found = np.append(found, limit)
    return DensityReport(limit, k, count, Fraction(count, limit - 1),
                         tuple(found[:100].tolist()))


@dataclass(frozen=True)
class FamilyCheckResult:
    holds: bool
    counterexample: int | None = None
    checked: int = 0

    def __bool__(self):
        return self.holds


def residue_family_check(residue: int, modulus: int, k: int, limit: int) -> FamilyCheckResult:
    """Certify every n = residue (mod modulus) in [2, limit); stop at the
    first representable one."""
    if not 0 <= residue < modulus:
        raise ValueError(f"need 0 <= residue < modulus, got {residue}, {modulus}")
    start = residue
    while start < 2:
        start += modulus
    checked = 0
    for n in range(start, limit, modulus):
        checked += 1
        if not isinstance(certify(n, k), Certificate):
            return FamilyCheckResult(False, n, checked)
    return FamilyCheckResult(True, None, checked)


@dataclass(frozen=True)
class ProofCase:
    fixed: tuple[int, ...]
    free: int
    free_from: int
    modulus: int | None

    def describe(self) -> str:
        terms = [f"2^{a}" for a in sorted(self.fixed, reverse=True)]
        names = "abc"[: self.free]
        terms = [f"2^{v}" for v in names] + terms
        text = "n" + "".join(f" - {t}" for t in terms)
        if self.free:
            cond = f"{', '.join(names)} >= {self.free_from}"
            text += f" ({cond}, distinct)" if self.free > 1 else f" ({cond})"
        return text


@dataclass(frozen=True)
class ResidueProof:
    success: bool
    cases: tuple[ProofCase, ...]
    failed_case: ProofCase | None = None

    def __bool__(self):
        return self.success

    def table(self) -> str:
        rows = [f"{c.describe():<40} {'mod ' + str(c.modulus) if c.modulus else 'UNRESOLVED'}"
                for c in self.cases + ((self.failed_case,) if self.failed_case else ())]
        return "\n".join(rows)


def _power_residues(fixed, free, free_from, g):
    """Every value of sum(2^fixed) + (free distinct powers >= free_from) mod g."""
    base = sum(pow(2, a, g) for a in fixed) % g
    if not free:
        return {base}
    t = (g & -g).bit_length() - 1
    odd = g >> t
    period = 1
    if odd > 1:
        while pow(2, period, odd) != 1:
            period += 1
    # past exponent t the residues repeat with this period; leave room for `free` distinct picks per class
    window = range(free_from, max(free_from, t) + free * period + 1)
    return {(base + sum(pow(2, a, g) for a in combo)) % g for combo in combinations(window, free)}


def _discharge(residue, modulus, case, moduli):
    for m in moduli:
        g = gcd(m, modulus)
        if g < 2:
            continue
        bad = two_square_sums_mod(g)
        if all((residue - s) % g not in bad
               for s in _power_residues(case.fixed, case.free, case.free_from, g)):
            return g
    return None


def residue_family_prove(residue: int, modulus: int, k: int) -> ResidueProof:
    """Try to show by congruences alone that no n = residue (mod modulus) is a
    sum of two squares and at most ``k`` powers of 2.

    Each subtraction pattern is tested against the fixed modulus list; a
    pattern that survives has its smallest free exponent split off as a
    concrete value and is retried. Prime-power moduli are tried on their own
    first, which gives the finest case split; the composite ones only come in
    if that fails. Best effort only: a failure names the first pattern it
    could not discharge.
    """
    if not 0 <= residue < modulus or modulus > 10**4:
        raise ValueError("need 0 <= residue < modulus <= 10**4")
    if k not in (0, 1, 2):
        raise ValueError(f"k must be 0, 1 or 2, got {k}")
    prime_powers = tuple(m for m in PROOF_MODULI if len(_prime_divisors(m)) == 1)
    proof = _prove(residue, modulus, k, prime_powers)
    return proof if proof else _prove(residue, modulus, k, PROOF_MODULI)


def _prime_divisors(m):
    return {p for p in range(2, m + 1) if m % p == 0 and all(p % q for q in range(2, p))}


def _prove(residue, modulus, k, moduli):
    done = []
    pending = [ProofCase((), j, 0, None) for j in range(k + 1)]
    while pending:
        case = pending.pop(0)
        g = _discharge(residue, modulus, case, moduli)
        if g is not None:
            done.append(ProofCase(case.fixed, case.free, case.free_from, g))
            continue
        if not case.free or case.free_from >= MAX_SPLIT_DEPTH:
            return ResidueProof(False, tuple(done), case)
        a = case.free_from
        pending[:0] = [
            ProofCase(case.fixed + (a,), case.free - 1, a + 1, None),
            ProofCase(case.fixed, case.free, a + 1, None),
        ]
    return ResidueProof(True, tuple(done))


@dataclass(frozen=True)
class ShiftResult:
    ok: bool
    violations: tuple[int, ...]
    checked: int

    def __bool__(self):
        return self.ok


def shift_check(table: MarkTable) -> ShiftResult:
    """For every non-representable N in [2, S) of a k=2 table, confirm N - 2
    is representable, so N is a sum of two squares and three powers of 2."""
    _require_plain(table, 2)
    bad = unmarked(table, 2)
    hit = table.cells[bad - 2] == 1
    return ShiftResult(not hit.any(), tuple(bad[hit].tolist()), len(bad))


def tower_density_listing(base: int, limit: int) -> tuple[list[int], int]:
    """All ``2**alpha * base`` below ``limit``."""
    if base < 1:
        raise ValueError(f"base must be >= 1, got {base}")
    out = []
    v = base
    while v < limit:
        out.append(v)
        v <<= 1
    return out, len(out)
