"""
Smaller invariants
==================

Phi_l^gamma2 is sparse (a + l b = l + 1 mod 3) and cubes back to Phi_l.
Phi_l^f for the Weber function is sparser still (l a + b = l + 1 mod 24).
"""

from modularpoly.modpoly import compute, phi_from_gamma2
from modularpoly.oracle import phi_qexp

l = 11
G = compute(l, "gamma2")
F = compute(l, "weber_f")
P = compute(l)

print(f"Phi_{l}: {len(P.coeffs)} terms, {P.max_bits()} bits")
print(f"Phi_{l}^gamma2: {len(G.coeffs)} terms, {G.max_bits()} bits")
print(f"Phi_{l}^f: {len(F.coeffs)} terms, {F.max_bits()} bits")
print("X^l Y^l coefficient of Phi^f:", F[(l, l)])
print("gamma2 reconstruction equals Phi_l:", phi_from_gamma2(G) == P == phi_qexp(l))
print(F.to_text())
