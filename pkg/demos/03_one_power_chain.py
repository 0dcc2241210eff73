"""
One power of 2: the 142 chain
=============================

142 fails with at most one power of 2. Every remainder 142 - 2**a carries a
prime 3 (mod 4) to an odd power; being even, 142 starts an infinite tower.
"""

from twosq import certify, factor, lift_family, spot_check_family

cert = certify(142, 1)
for case in cert.cases:
    p, e = case.obstruction
    fac = " * ".join(f"{q}^{f}" if f > 1 else str(q) for q, f in factor(case.remainder).factors)
    sub = f"142 - 2^{case.exponents[0]}" if case.exponents else "142"
    print(f"{sub:>10} = {case.remainder:3d} = {fac:<14} obstruction {p}")

family = lift_family(cert)
print(family.rule, spot_check_family(family, range(12)).ok)

# odd starting points are allowed too, but the even-tower rule needs 2 | n
print(type(certify(71, 1)).__name__)
