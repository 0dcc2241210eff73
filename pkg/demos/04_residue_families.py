"""
Whole residue classes that fail
===============================

No n = 23 (mod 72) is a sum of two squares and at most one power of 2. The
congruence argument splits on which power is subtracted; each case is killed
by a single small modulus.
"""

from twosq import residue_family_check, residue_family_prove, two_square_sums_mod

for m in (4, 8, 9):
    print(f"x^2 + y^2 mod {m}: {sorted(two_square_sums_mod(m))}")

proof = residue_family_prove(23, 72, 1)
print(proof.table())

# direct certification agrees up to 10^6
print(residue_family_check(23, 72, 1, 10**6))

# with two powers the class breaks at once: 23 = 3^2 + 2^2 + 2^3 + 2^1
print(residue_family_check(23, 72, 2, 10**6))

# so 1 / 72 of all integers need at least two powers
print(f"{1 / 72:.4%}")
