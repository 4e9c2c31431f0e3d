"""
Small modular polynomials three ways
====================================

Phi_l for small l from the q-expansion oracle, from isogeny volcanoes, and
checked against an actual isogeny over a finite field.
"""

import random

from modularpoly.modpoly import compute_detailed, random_isogenous_pair
from modularpoly.oracle import j_qexp, phi_qexp

# the j-function starts 1/q + 744 + 196884 q + ...
J = j_qexp(6)
print("j =", " + ".join(f"{J[k]} q^{k}" for k in range(-1, 4)), "+ ...")

# Phi_3 from comparing q-expansions
P3 = phi_qexp(3)
print("Phi_3 has", len(P3.coeffs), "stored terms, largest", P3.max_bits(), "bits")

# the same polynomial from the volcano algorithm and the CRT
r = compute_detailed(3)
print("order used:", r.order.summary(), "| primes:", len(r.primes))
print("identical to the oracle:", r.poly == P3)

# Phi_3 vanishes on the j-invariants of 3-isogenous curves
p, j1, j2 = random_isogenous_pair(3, random.Random(1))
print(f"over F_{p}: Phi_3({j1}, {j2}) =", P3.evaluate(j1, j2, p))
