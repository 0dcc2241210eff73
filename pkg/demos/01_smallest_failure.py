"""
The first integer that needs three powers of 2
==============================================

Sieve every n < 2**20 for k = 0, 1, 2 powers of 2 on top of a sum of two
squares and look at what is left over.
"""

import time

from twosq import SieveConfig, first_unmarked, run_sieve, unmarked, unmarked_count

limit = 2**20

for k in (0, 1, 2):
    t = time.perf_counter()
    table = run_sieve(SieveConfig(limit, k))
    took = time.perf_counter() - t
    left = unmarked_count(table, 2, limit)
    print(f"k={k}: {left:7d} integers in [2, 2^20) not representable   "
          f"first={first_unmarked(table, 2)}   ({took:.2f}s)")

# with two powers of 2 a single survivor remains below 2^20
print(unmarked(table, 2).tolist())
