"""
Phi_101 over the integers
=========================

About a minute on one core.  Prints the order, the prime count, the height
bound and the size of the largest coefficient, then reduces modulo a
256-bit prime with the explicit CRT.
"""

import time

from modularpoly.modpoly import compute, compute_detailed

t0 = time.time()
r = compute_detailed(101, log=print)
print(r.order.summary())
print(f"bound {r.bound_bits:.0f} bits, largest coefficient {r.poly.max_bits()} bits, "
      f"{len(r.primes)} primes, {time.time() - t0:.0f}s")

m = 2 ** 256 - 189
t0 = time.time()
Pm = compute(101, m=m)
print(f"mod 2^256 - 189: {time.time() - t0:.0f}s, agrees:", Pm == r.poly.reduce(m))
