"""Exact integer arithmetic up to 2**63: primality, factorization and the
two-squares criterion."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd, isqrt

import numpy as np

MAX_N = 1 << 63
TRIAL_BOUND = 10**6
ORACLE_MAX = 10**9
RESIDUE_MAX = 10**6

# Deterministic for n < 3.3e24, which covers the whole 64-bit range.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


@dataclass(frozen=True)
class Factorization:
    n: int
    factors: tuple[tuple[int, int], ...] = ()

    def value(self) -> int:
        out = 1
        for p, e in self.factors:
            out *= p**e
        return out if self.n >= 2 else self.n

    def exponent(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0


@dataclass(frozen=True)
class TwoSquaresVerdict:
    n: int
    representable: bool
    witness: tuple[int, int] | None = None
    obstruction: tuple[int, int] | None = field(default=None)


def _check_range(n: int) -> None:
    if n < 0 or n > MAX_N:
        raise ValueError(f"n={n} outside supported range [0, 2**63]")


@lru_cache(maxsize=1)
def small_primes(bound: int = TRIAL_BOUND) -> np.ndarray:
    """All primes <= bound as an int64 array."""
    mark = np.ones(bound + 1, dtype=bool)
    mark[:2] = False
    for p in range(2, isqrt(bound) + 1):
        if mark[p]:
            mark[p * p :: p] = False
    return np.flatnonzero(mark).astype(np.int64)


@lru_cache(maxsize=1)
def _spf_table() -> list[int]:
    # smallest prime factor of every n <= TRIAL_BOUND
    spf = np.zeros(TRIAL_BOUND + 1, dtype=np.int64)
    for p in small_primes()[: np.searchsorted(small_primes(), isqrt(TRIAL_BOUND), side="right")]:
        view = spf[p * p :: p]
        view[view == 0] = p
    idx = np.flatnonzero(spf == 0)
    spf[idx] = idx
    return spf.tolist()


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for 0 <= n <= 2**63."""
    _check_range(n)
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent(n: int, rng: random.Random) -> int:
    # Pollard rho with Brent's cycle detection; returns a nontrivial divisor of composite n.
    if n % 2 == 0:
        return 2
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g


def _split_large(n: int, out: dict[int, int], rng: random.Random) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    d = _brent(n, rng)
    _split_large(d, out, rng)
    _split_large(n // d, out, rng)


def factor(n: int) -> Factorization:
    """Prime-power decomposition of ``n``.

    Trial division by the primes up to 10**6 finishes every n <= 10**12;
    larger cofactors go through Miller-Rabin and Brent's rho with a fixed seed.

    >>> factor(140).factors
    ((2, 2), (5, 1), (7, 1))
    """
    _check_range(n)
    if n < 2:
        return Factorization(n)
    found: dict[int, int] = {}
    if n <= TRIAL_BOUND:
        spf = _spf_table()
        m = n
        while m > 1:
            p = spf[m]
            found[p] = found.get(p, 0) + 1
            m //= p
        return Factorization(n, tuple(sorted(found.items())))
    m = n
    tz = (m & -m).bit_length() - 1
    if tz:
        found[2] = tz
        m >>= tz
    if m > 1:
        primes = small_primes()
        hi = np.searchsorted(primes, min(isqrt(m), TRIAL_BOUND), side="right")
        cand = primes[1:hi]
        if len(cand):
            for p in cand[np.int64(m) % cand == 0].tolist():
                e = 0
                while m % p == 0:
                    m //= p
                    e += 1
                found[p] = e
        if m > 1:
            if m <= TRIAL_BOUND * TRIAL_BOUND:
                found[m] = found.get(m, 0) + 1
            else:
                _split_large(m, found, random.Random(0x5EED))
    return Factorization(n, tuple(sorted(found.items())))


def _obstruction(fac: Factorization) -> tuple[int, int] | None:
    for p, e in fac.factors:
        if p % 4 == 3 and e % 2 == 1:
            return p, e
    return None


def _smallest_witness(n: int) -> tuple[int, int] | None:
    for x in range(isqrt(n // 2) + 1):
        r = n - x * x
        y = isqrt(r)
        if y * y == r:
            return x, y
    return None


def _prime_as_two_squares(p: int) -> tuple[int, int]:
    # Hermite-Serret: Euclid on (p, sqrt(-1) mod p) stops at the first remainder below sqrt(p).
    c = 2
    while pow(c, (p - 1) // 2, p) != p - 1:
        c += 1
    a, b = p, pow(c, (p - 1) // 4, p)
    limit = isqrt(p)
    while b > limit:
        a, b = b, a % b
    return b, isqrt(p - b * b)


def _gmul(u: tuple[int, int], v: tuple[int, int]) -> tuple[int, int]:
    return u[0] * v[0] - u[1] * v[1], u[0] * v[1] + u[1] * v[0]


def _gpow(u: tuple[int, int], e: int) -> tuple[int, int]:
    out = (1, 0)
    for _ in range(e):
        out = _gmul(out, u)
    return out


def _witness_from_factors(fac: Factorization) -> tuple[int, int]:
    """Smallest-x witness read off every Gaussian-integer representation."""
    fixed = (1, 0)
    choices = [(1, 0)]
    for p, e in fac.factors:
        if p == 2:
            fixed = _gmul(fixed, _gpow((1, 1), e))
        elif p % 4 == 3:
            fixed = _gmul(fixed, (p ** (e // 2), 0))
        else:
            a, b = _prime_as_two_squares(p)
            opts = [_gmul(_gpow((a, b), j), _gpow((a, -b), e - j)) for j in range(e + 1)]
            choices = [_gmul(c, o) for c in choices for o in opts]
    best = None
    for c in choices:
        re, im = _gmul(fixed, c)
        w = tuple(sorted((abs(re), abs(im))))
        if best is None or w < best:
            best = w
    assert best[0] ** 2 + best[1] ** 2 == fac.n
    return best


def two_squares_classify(n: int) -> TwoSquaresVerdict:
    """Decide whether n = x**2 + y**2 via the prime-factor criterion.

    On failure the smallest prime p = 3 (mod 4) with odd exponent is reported.
    On success the witness has the smallest possible x (x <= y); past 2**20 it
    is picked from the full list of representations generated by the
    Gaussian-integer factorization instead of by scanning x.
    """
    _check_range(n)
    if n == 0:
        return TwoSquaresVerdict(0, True, (0, 0))
    fac = factor(n)
    obs = _obstruction(fac)
    if obs is not None:
        return TwoSquaresVerdict(n, False, obstruction=obs)
    if n < 1 << 20:
        return TwoSquaresVerdict(n, True, witness=_smallest_witness(n))
    return TwoSquaresVerdict(n, True, witness=_witness_from_factors(fac))


def two_squares_oracle(n: int) -> TwoSquaresVerdict:
    """Brute-force cross-check: try every x <= y. Only for n <= 10**9."""
    if n < 0 or n > ORACLE_MAX:
        raise ValueError(f"oracle range is [0, {ORACLE_MAX}], got {n}")
    w = _smallest_witness(n)
    return TwoSquaresVerdict(n, w is not None, witness=w)


def _check_modulus(m: int) -> None:
    if not 2 <= m <= RESIDUE_MAX:
        raise ValueError(f"modulus must lie in [2, {RESIDUE_MAX}], got {m}")


def squares_mod(m: int) -> frozenset[int]:
    _check_modulus(m)
    x = np.arange(m, dtype=np.int64)
    return frozenset(np.unique(x * x % m).tolist())


def two_square_sums_mod(m: int) -> frozenset[int]:
    """Residues of x**2 + y**2 modulo m."""
    sq = np.fromiter(squares_mod(m), dtype=np.int64)
    hit = np.zeros(m, dtype=bool)
    for s in sq:
        hit[(s + sq) % m] = True
    return frozenset(np.flatnonzero(hit).tolist())
