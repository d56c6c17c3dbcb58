"""Record gaps of the sums of two squares up to X, by the factorization
criterion rather than lattice marking.

For each prime p = 3 mod 4, adding +1, -1, +1, ... over the multiples of
p, p^2, p^3, ... leaves 1 exactly where p divides n to an odd power, so
n >= 1 is a sum of two squares iff the accumulated count is zero.
"""
import sys

import numpy as np

X = int(sys.argv[1]) if len(sys.argv) > 1 else 10**7
LIMIT = X + 1000

composite = np.zeros(LIMIT + 1, dtype=bool)
composite[:2] = True
for p in range(2, int(LIMIT**0.5) + 1):
    if not composite[p]:
        composite[p * p :: p] = True
primes = np.nonzero(~composite)[0]

odd = np.zeros(LIMIT + 1, dtype=np.int32)
for p in primes[primes % 4 == 3]:
    q, sign = int(p), 1
    while q <= LIMIT:
        odd[q::q] += sign
        sign = -sign
        q *= int(p)

members = np.nonzero(odd[1:] == 0)[0] + 1
print("s_lo,s_hi,gap")
best = 0
for lo, hi in zip(members[:-1], members[1:]):
    if hi > X:
        break
    if hi - lo > best:
        best = hi - lo
        print(f"{lo},{hi},{best}")
