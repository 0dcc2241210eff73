"""
A certificate for N0 = 1 151 121 374 334
========================================

Subtract every sum of at most two distinct powers of 2 and exhibit a prime
3 (mod 4) to an odd power in each remainder. Then lift the certificate to the
whole family 2**alpha * N0.
"""

from twosq import N0, certify, dumps_certificate, lift_family, spot_check_family, verify_certificate

cert = certify(N0, 2)
print(f"{len(cert.cases)} cases")

# the file format, first few and last lines
lines = dumps_certificate(cert).splitlines()
print("\n".join(lines[:8] + ["..."] + lines[-2:]))

# the verifier re-derives coverage and checks each obstruction without factoring
print(verify_certificate(cert).diagnostic)

# 18 | N0, so the mod-18 tower rule applies
family = lift_family(cert)
print(family.conclusion)

# and direct certification of 2 N0, 4 N0, 8 N0 agrees
print(spot_check_family(family, [1, 2, 3]).results)
