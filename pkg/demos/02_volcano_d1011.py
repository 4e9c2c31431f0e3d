"""
7-volcanoes over F_12517 for D = -1011
======================================

The class group has order 12 and a prime above 7 has order 3 in it, so the
surface falls into 4 cycles of length 3.  Each surface curve has 6 floor
children, 72 floor curves in all.
"""

from modularpoly.modpoly import inspect_volcano, volcano_dot
from modularpoly.oracle import phi_qexp
from modularpoly.ffpoly import FpPoly, roots

info = inspect_volcano(7, 12517, -1011)
print("t, v =", info["t"], info["v"], "| h(O) =", info["h_O"], "| h(R) =", info["h_R"])
print("surface cycles:", info["surface_cycles"])
print("sibling group sizes:", sorted({len(g) for g in info["floor_groups"]}))

# once Phi_7 is known, count roots: l+1 on the surface, exactly one on the floor
P7 = phi_qexp(7)
p = info["p"]
count = lambda j: len(roots(FpPoly(P7.in_x(j, p), p)))
print("roots at surface nodes:", sorted({count(j) for j in info["surface"]}))
print("roots at floor nodes:", sorted({count(j) for g in info["floor_groups"] for j in g}))

with open("volcano_l7_p12517.dot", "w") as fh:
    fh.write(volcano_dot(info))
print("graph written to volcano_l7_p12517.dot")
