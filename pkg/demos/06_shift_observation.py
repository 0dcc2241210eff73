"""
Three powers of 2
=================

If N fails with two powers but N - 2 succeeds, then N succeeds with three.
Check this for every failure below the sieve limit and report densities.
"""

from twosq import SieveConfig, density_report, run_sieve, shift_check, tower_density_listing, N0

limit = 2**22
table = run_sieve(SieveConfig(limit + 1, 2))
print(shift_check(table))

for k in (0, 1, 2):
    rep = density_report(limit, k, table if k == 2 else run_sieve(SieveConfig(limit + 1, k)))
    print(rep.record(), f"density={float(rep.density):.3e}", rep.sample_listing[:6])

# the family 2^alpha * N0 grows only like log N
values, count = tower_density_listing(N0, 2**50)
print(count, values[-1])
