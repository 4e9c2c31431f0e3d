"""Classical modular polynomials via isogeny volcanoes and the CRT.

Computes Phi_l and the gamma2 and Weber-f variants over Z, modulo an
integer m, or modulo single primes p.
"""

__version__ = "0.1.0"
