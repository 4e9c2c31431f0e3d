"""CM torsor enumeration on the surface and floor of l-volcanoes over F_p."""

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .arith import kronecker, fundamental_discriminant
from .ec import TwistMismatch, curve_with_trace, point_of_order_l, velu
from .quadform import compose, identity, prime_form, reduce


class VolcanoError(Exception):
    """The volcano over this prime does not have the expected shape."""


@dataclass
class TorsorEnumeration:
    """elements[i] is the node reached from the start by the class presentation.table[i]
    (or by its inverse, uniformly for all i)."""

    level: str
    elements: list
    presentation: object
    index: dict = field(init=False, repr=False)

    def __post_init__(self):
        self.index = {e: i for i, e in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise VolcanoError(f"duplicate element in the {self.level} enumeration")

    def __len__(self):
        return len(self.elements)


@dataclass
class CyclePartition:
    cycles: list
    kind: str

    @property
    def lengths(self):
        return [len(c) for c in self.cycles]


def _matrix(phi, p):
    return phi if isinstance(phi, np.ndarray) else phi.matrix_mod(p)


def cm_step(j_prev, j_cur, phi, p):
    """Next node on an isogeny path; at the start (j_prev None) the smaller of the two roots."""
    M = _matrix(phi, p)
    if j_prev is None:
        rts = np.zeros(2, np.int64)
        c = K.neighbours(M, j_cur, p, rts)
        if c not in (1, 2):
            raise VolcanoError(f"{c} roots at path start")
        return int(rts[0])
    r = K.step(M, j_prev, j_cur, p)
    if r < 0:
        raise VolcanoError("no unique continuation of the path")
    return int(r)


def _check_ramified(g):
    if compose(g, g) != identity(g.discriminant):
        raise ValueError("only ramified generators may follow the first one")


def enumerate_torsor(start, presentation, phis, p, level="surface"):
    """Enumerate the torsor from `start` following the presentation.

    The first generator is walked as a cycle with its modular polynomial.
    Every later generator must have order two (a ramified prime); its action
    is the unique root of its modular polynomial, so no orientation is
    needed.  `phis` maps generator norms to dense matrices mod p."""
    rels = presentation.relative_orders
    if not rels:
        return TorsorEnumeration(level, [start], presentation)
    n0, r0 = presentation.norms[0], rels[0]
    out = np.zeros(r0, np.int64)
    if K.walk(phis[n0], start, -1, r0, p, out) != K.OK:
        raise VolcanoError(f"walk with norm {n0} failed")
    if r0 >= 3 and K.step(phis[n0], out[r0 - 2], out[r0 - 1], p) != start:
        raise VolcanoError(f"cycle with norm {n0} does not close")
    elems = out
    for g, n, r in zip(presentation.generators[1:], presentation.norms[1:], rels[1:]):
        _check_ramified(g)
        if r != 2:
            raise ValueError("unsupported presentation shape")
        nb = np.zeros_like(elems)
        if K.unique_neighbours(phis[n], elems, p, nb) >= 0:
            raise VolcanoError(f"no unique neighbour for ramified norm {n}")
        elems = np.concatenate([elems, nb])
    return TorsorEnumeration(level, [int(x) for x in elems], presentation)


def _orbits(perm):
    seen = [False] * len(perm)
    out = []
    for i in range(len(perm)):
        if seen[i]:
            continue
        cyc, k = [], i
        while not seen[k]:
            seen[k] = True
            cyc.append(k)
            k = perm[k]
        out.append(cyc)
    return out


def surface_cycles(enum, l):
    """Partition of the surface into cycles of the class of a prime above l."""
    pres = enum.presentation
    perm = pres.translation(prime_form(pres.D, l))
    cycles = [[enum.elements[i] for i in c] for c in _orbits(perm)]
    return CyclePartition(cycles, "l")


def floor_cycles(enum_R, gen2, l=None):
    """Sibling groups: cycles of the kernel generator of cl(R) -> cl(O).

    gen2 is the unreduced norm l^2 form unless l is passed explicitly."""
    pres = enum_R.presentation
    dk, _ = fundamental_discriminant(pres.D)
    perm = pres.translation(reduce(gen2))
    orbits = _orbits(perm)
    l = l or math.isqrt(gen2.a)
    want = l - kronecker(dk, l)
    if any(len(c) != want for c in orbits):
        raise VolcanoError("sibling cycle length mismatch")
    return CyclePartition([[enum_R.elements[i] for i in c] for c in orbits], "l2")


def descend_to_floor(j, l, p, t, rng, surface, max_tries=24):
    """An l-isogenous neighbour of the surface node j that is not on the surface."""
    try:
        E = curve_with_trace(j, p, t, rng)
    except TwistMismatch as exc:
        raise VolcanoError(str(exc)) from None
    for _ in range(max_tries):
        try:
            P = point_of_order_l(E, t, l, rng)
        except TwistMismatch as exc:
            raise VolcanoError(str(exc)) from None
        j2 = velu(E, P, l).j_invariant()
        if j2 not in surface:
            return j2
    raise VolcanoError("descent keeps landing on the surface")
