"""Brute-force references that share no code with the package."""

from itertools import combinations


def two_square_set(limit):
    """{x*x + y*y < limit} by direct enumeration."""
    out = set()
    x = 0
    while x * x < limit:
        y = 0
        while y <= x and x * x + y * y < limit:
            out.add(x * x + y * y)
            y += 1
        x += 1
    return out


def power_sums(limit, k):
    """Sums of at most k distinct powers of 2 below limit (0 included)."""
    exps = [a for a in range(limit.bit_length() + 1) if 1 << a < limit]
    sums = set()
    for j in range(k + 1):
        for combo in combinations(exps, j):
            s = sum(1 << a for a in combo)
            if s < limit:
                sums.add(s)
    return sorted(sums)


def nonrepresentable(limit, k):
    """Every n in [0, limit) that is not x^2 + y^2 plus at most k powers of 2."""
    squares = two_square_set(limit)
    sums = power_sums(limit, k)
    out = []
    for n in range(limit):
        if not any(n - s in squares for s in sums if s <= n):
            out.append(n)
    return out


def is_prime_naive(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True
