"""Phi_l^g modulo CRT primes from isogeny volcanoes, assembled over Z or mod m."""

import math
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .arith import factor, fundamental_discriminant, is_prime, kronecker
from .bivariate import BivariatePoly, canonical_invariant, file_name, support_allowed
from .classpoly import find_surface_root, hilbert_class_poly
from .crt import CrtAccumulator
from .ec import INF, curve_with_trace, scalar_mul, velu
from .ffpoly import FpPoly, cube_root, roots
from .primes import (HeightBudget, PrimeSpec, height_bound, prime_ok,
                     select_primes_heuristic, select_primes_randomized)
from .quadform import (class_number, class_number_formula, class_number_table, form_order,
                       kerphi_generator, polycyclic_presentation, prime_form, reduce)
from .volcano import (VolcanoError, _orbits, descend_to_floor, enumerate_torsor, floor_cycles,
                      surface_cycles)

# norms used to walk the torsors, and ramified norms allowed as a second generator
WALK_NORMS = {"j": (3, 5, 7), "gamma2": (3, 5, 7), "weber_f": (5, 7, 11, 13)}
RAMIFIED_NORMS = {"j": (2, 3, 5, 7, 11, 13), "gamma2": (2, 5, 7, 11, 13), "weber_f": (5, 7, 11, 13)}
INSPECT_NORMS = (2, 3, 5, 7, 11, 13)
FALLBACK_NORMS = (3, 5, 7, 11, 13)
SMOOTH_BOUND = 256
RETRIES = 3
GUARD_PRIMES = 2
SPARE_FRACTION = 0.05
BOOTSTRAP_MAX_L = 13


def nodes_needed(l, invariant):
    if invariant == "gamma2":
        return -(-(l + 1) // 3) + 1
    return l + 2


# -- small modular polynomials for walking ------------------------------------

class PhiStore:
    """Modular polynomials over Z keyed by (invariant, l), with an optional disk cache.

    Bootstrap: Phi_l for l <= 13 from the q-expansion oracle, gamma2 and
    Weber polynomials for l <= 13 from the evaluation-interpolation oracle,
    anything larger from compute() itself."""

    def __init__(self, cache_dir=None):
        self.cache_dir = cache_dir
        self._mem = {}
        self._mats = {}

    def path(self, invariant, l):
        if not self.cache_dir:
            return None
        return os.path.join(self.cache_dir, "modpoly", file_name(invariant), f"l{l}.txt")

    def get(self, invariant, l):
        invariant = canonical_invariant(invariant)
        key = (invariant, l)
        if key in self._mem:
            return self._mem[key]
        path = self.path(invariant, l)
        P = None
        if path and os.path.exists(path):
            try:
                P = BivariatePoly.load(path)
            except (ValueError, KeyError):
                P = None
            if P is not None and (P.l != l or P.invariant != invariant or P.modulus
                                  or P.check_structure()):
                P = None
        if P is None:
            P = self._bootstrap(invariant, l)
            if path:
                os.makedirs(os.path.dirname(path), exist_ok=True)
                P.save(path)
        self._mem[key] = P
        return P

    def _bootstrap(self, invariant, l):
        from . import oracle
        if l <= BOOTSTRAP_MAX_L:
            if invariant == "j":
                return oracle.phi_qexp(l)
            return oracle.eval_interp_phi(invariant, l)
        return compute(l, invariant, store=self)

    def matrix(self, invariant, l, p):
        key = (invariant, l, p)
        M = self._mats.get(key)
        if M is None:
            if len(self._mats) > 64:
                self._mats.clear()
            M = self._mats[key] = self.get(invariant, l).matrix_mod(p)
        return M


_DEFAULT_STORE = None


def default_store():
    global _DEFAULT_STORE
    if _DEFAULT_STORE is None:
        _DEFAULT_STORE = PhiStore(os.environ.get("MODULARPOLY_CACHE"))
    return _DEFAULT_STORE


# -- choice of the order O ------------------------------------------------------

@dataclass
class OrderSelection:
    l: int
    invariant: str
    D: int
    d_K: int
    u: int
    h_O: int
    h_R: int
    l0: int
    l1: int = None
    pres_O: object = field(default=None, repr=False, compare=False)
    pres_R: object = field(default=None, repr=False, compare=False)
    gen2: object = field(default=None, repr=False, compare=False)
    cache_dir: str = field(default=None, repr=False, compare=False)
    _plan: dict = field(default=None, repr=False, compare=False)
    _H: object = field(default=None, repr=False, compare=False)

    @property
    def norms(self):
        return tuple(sorted(set(self.pres_O.norms) | set(self.pres_R.norms)))

    @property
    def D_R(self):
        return self.l * self.l * self.D

    def class_poly(self):
        if self._H is None:
            self._H = hilbert_class_poly(self.D, self.cache_dir)
        return self._H

    def plan(self):
        """Index permutations shared by all primes: surface l-neighbours and sibling groups."""
        if self._plan is None:
            k = kronecker(self.D, self.l)
            perms = []
            if k >= 0:
                f = prime_form(self.D, self.l)
                perms.append(self.pres_O.translation(f))
                if k == 1:
                    perms.append(self.pres_O.translation(f.inverse()))
            groups = _orbits(self.pres_R.translation(reduce(self.gen2)))
            want = self.l - kronecker(self.d_K, self.l)
            if any(len(g) != want for g in groups):
                raise ValueError("kernel generator has the wrong order")
            group_of = [0] * self.h_R
            for gi, g in enumerate(groups):
                for i in g:
                    group_of[i] = gi
            self._plan = {"surface": perms, "groups": groups, "group_of": group_of}
        return self._plan

    def summary(self):
        gens = ",".join(map(str, self.norms))
        return f"D={self.D} h(O)={self.h_O} h(R)={self.h_R} norms={gens}"


def _smooth(n, b):
    return all(q <= b for q, _ in factor(n).factors) if n > 1 else True


def _shape_ok(D, h, l0, l1):
    """Presentation with norms [l0] or [l0, l1] covering cl(D) in the supported shape."""
    try:
        pres = polycyclic_presentation(D, primes=[l0] if l1 is None else [l0, l1],
                                       ordered=True, h=h)
    except ValueError:
        return None
    want = 1 if l1 is None else 2
    if len(pres.relative_orders) != want or (l1 is not None and pres.relative_orders[1] != 2):
        return None
    return pres


def _invariant_ok(D, invariant):
    if invariant == "gamma2":
        return D % 3 != 0
    if invariant == "weber_f":
        return D % 8 == 1 and D % 3 != 0
    return True


def build_order(D, l, invariant="j", b=SMOOTH_BOUND, need=None, table=None, cache_dir=None,
                walk_norms=None, avoid=()):
    """OrderSelection for discriminant D if it qualifies, else None.

    Norms in `avoid` (primes dividing v for a fixed prime) are never used."""
    invariant = canonical_invariant(invariant)
    walk_norms = walk_norms or WALK_NORMS[invariant]
    d_K, u = fundamental_discriminant(D)
    if d_K in (-3, -4) or u % l == 0 or not _invariant_ok(D, invariant) or not _smooth(u, b):
        return None
    if table is not None and len(table) > -d_K:
        h, hK = int(table[-D]), int(table[-d_K])
    else:
        h, hK = class_number_formula(D), class_number(d_K)
    if hK > b or (need and h < need):
        return None
    h_R = h * (l - kronecker(d_K, l))
    D_R = l * l * D
    ram = [q for q in RAMIFIED_NORMS[invariant]
           if q != l and d_K % q == 0 and u % q != 0 and q not in avoid]
    for l0 in walk_norms:
        if l0 == l or l0 in avoid or kronecker(D, l0) != 1 or u % l0 == 0:
            continue
        pO = _find_shape(D, h, l0, ram)
        pR = pO and _find_shape(D_R, h_R, l0, ram)
        if pO and pR:
            extra = [n for n in pO.norms[1:] + pR.norms[1:]]
            return OrderSelection(l, invariant, D, d_K, u, h, h_R, l0, extra[0] if extra else None,
                                  pO, pR, kerphi_generator(D, l), cache_dir)
    return None


def _find_shape(D, h, l0, ram):
    o = form_order(reduce(prime_form(D, l0)), h)
    if o == h:
        return _shape_ok(D, h, l0, None)
    if 2 * o == h:
        for q in ram:
            pres = _shape_ok(D, h, l0, q)
            if pres:
                return pres
    return None


def select_order(l, invariant="j", b=SMOOTH_BOUND, cache_dir=None):
    """The qualifying order of smallest class number (then smallest |D|)."""
    invariant = canonical_invariant(invariant)
    if l % 2 == 0:
        raise ValueError("l must be odd")
    need = nodes_needed(l, invariant)
    X = max(4000, 16 * need * need)
    for _ in range(6):
        h = class_number_table(X)
        ns = np.nonzero(h >= need)[0]
        order = np.lexsort((ns, h[ns]))
        for n in ns[order]:
            sel = build_order(-int(n), l, invariant, b, need, h, cache_dir)
            if sel is not None:
                return sel
        X *= 4
    sel = fallback_order(l, invariant, cache_dir=cache_dir)
    if sel is not None:
        return sel
    raise ValueError(f"no suitable order found for l={l}, invariant={invariant}")


def fallback_order(l, invariant="j", max_n=12, cache_dir=None):
    """First order of discriminant -7 * 3^(2n) with enough classes and a supported presentation."""
    invariant = canonical_invariant(invariant)
    need = nodes_needed(l, invariant)
    for n in range(1, max_n + 1):
        D = -7 * 9 ** n
        if 4 * 3 ** (n - 1) < need:
            continue
        sel = build_order(D, l, invariant, need=need, cache_dir=cache_dir,
                          walk_norms=FALLBACK_NORMS)
        if sel is not None:
            return sel
    return None


# -- one prime -------------------------------------------------------------------

def _psi_roots(j, p):
    """Roots of (X^24 - 16)^3 - X^24 j in F_p."""
    c = [0] * 73
    c[72], c[48], c[24], c[0] = 1, -48 % p, (768 - j) % p, -4096 % p
    return roots(FpPoly(c, p))


def weber_j(x, p):
    """J(x) = (x^24 - 16)^3 / x^24, the j-invariant above a Weber value x."""
    x24 = pow(x, 24, p)
    return pow(x24 - 16, 3, p) * pow(x24, -1, p) % p


def _interpolate(xs, rows, p):
    """Interpolate each column of rows (node-major) through xs; result[k] lists Y-coefficients."""
    vals = np.ascontiguousarray(np.asarray(rows, np.int64).T)
    C, ok = K.interpolate_many(np.asarray(xs, np.int64), vals, p)
    if not ok:
        raise VolcanoError("interpolation nodes are not distinct")
    return C


def _check_matrix(M, l, invariant, p):
    n = l + 1
    if M[n, 0] != 1 or M[n, 1:].any():
        raise VolcanoError("result is not monic of degree l+1")
    if not np.array_equal(M, M.T):
        raise VolcanoError("result is not symmetric")
    for a in range(n + 1):
        for b in range(n + 1):
            if M[a, b] and not support_allowed(invariant, l, a, b):
                raise VolcanoError("result violates the sparsity pattern")


def _neighbour_rows(sel, surf, floor_lookup, floor_elems, children, scale=1, p=None):
    """Roots of Phi(X, x_i) for each node: surface neighbours then siblings."""
    plan = sel.plan()
    rows = []
    for i, child in enumerate(children):
        k = floor_lookup.get(child)
        if k is None:
            raise VolcanoError("descended node is missing from the floor enumeration")
        sib = [floor_elems[q] for q in plan["groups"][plan["group_of"][k]]]
        if scale != 1:
            sib = [(scale * y) % p for y in sib]
        rows.append([surf[perm[i]] for perm in plan["surface"]] + sib)
    return rows


def _phi_matrix(l, spec, sel, store, rng, direct_gamma2=False):
    p, t = spec.p, spec.t
    inv = sel.invariant
    if p >= K.MAX_KERNEL_P:
        raise ValueError("prime too large for the word-size kernels")
    if not prime_ok(p, inv):
        raise ValueError(f"p={p} does not satisfy the congruence for {inv}")
    j0 = find_surface_root(sel.class_poly(), p, seed=rng.getrandbits(32))
    if inv == "weber_f":
        return _phi_matrix_weber(l, spec, sel, store, rng, j0)
    direct = inv == "gamma2" and direct_gamma2 and all(n in (5, 7, 11, 13) for n in sel.norms)
    space = "gamma2" if direct else "j"
    phis = {n: store.matrix(space, n, p) for n in sel.norms}
    need = nodes_needed(l, inv)
    start = cube_root(j0, p) if direct else j0
    surf = enumerate_torsor(start, sel.pres_O, phis, p).elements
    surf_j = [pow(x, 3, p) for x in surf] if direct else surf
    sset = set(surf_j)
    children = [descend_to_floor(surf_j[i], l, p, t, rng, sset) for i in range(need)]
    fstart = cube_root(children[0], p) if direct else children[0]
    floor = enumerate_torsor(fstart, sel.pres_R, phis, p, "floor")
    if direct:
        children = [cube_root(c, p) for c in children]
    rows = _neighbour_rows(sel, surf, floor.index, floor.elements, children)
    if inv == "j":
        coeffs = K.products_from_roots(np.asarray(rows, np.int64), p)
        M = _interpolate(surf[:need], coeffs, p)
        M = np.ascontiguousarray(M[:, : l + 2])
        _check_matrix(M, l, inv, p)
        return M
    # gamma2: the nodes and roots live in cube-root space; interpolate phi*_k in j
    if not direct:
        rows = [[cube_root(x, p) for x in r] for r in rows]
        g = [cube_root(x, p) for x in surf[:need]]
    else:
        g = surf[:need]
    js = [pow(x, 3, p) for x in g]
    if 0 in g:
        raise VolcanoError("interpolation node with invariant 0")
    coeffs = K.products_from_roots(np.asarray(rows, np.int64), p)
    n = l + 1
    cs = [(n - l * k) % 3 for k in range(n + 1)]
    scaled = np.empty_like(coeffs)
    for i, gi in enumerate(g):
        ginv = pow(gi, -1, p)
        pw = [1, ginv, ginv * ginv % p]
        for k in range(n + 1):
            scaled[i, k] = int(coeffs[i, k]) * pw[cs[k]] % p
    C = _interpolate(js, scaled, p)
    M = np.zeros((n + 1, n + 1), np.int64)
    for k in range(n + 1):
        for e in range(C.shape[1]):
            c = int(C[k, e])
            if c:
                d = 3 * e + cs[k]
                if d > n:
                    raise VolcanoError("gamma2 coefficient beyond degree l+1")
                M[k, d] = c
    _check_matrix(M, l, inv, p)
    return M


def _phi_matrix_weber(l, spec, sel, store, rng, j0):
    p, t = spec.p, spec.t
    phis = {n: store.matrix("weber_f", n, p) for n in sel.norms}
    xs = _psi_roots(j0, p)
    if len(xs) != 2:
        raise VolcanoError(f"{len(xs)} Weber roots above a surface node")
    surf = enumerate_torsor(xs[0], sel.pres_O, phis, p).elements
    surf_j = [weber_j(x, p) for x in surf]
    sset = set(surf_j)
    if len(sset) != len(surf):
        raise VolcanoError("J is not injective on the surface")
    need = nodes_needed(l, "weber_f")
    children = [descend_to_floor(surf_j[i], l, p, t, rng, sset) for i in range(need)]
    ys = _psi_roots(children[0], p)
    if len(ys) != 2:
        raise VolcanoError(f"{len(ys)} Weber roots above a floor node")
    floor = enumerate_torsor(ys[0], sel.pres_R, phis, p, "floor")
    lookup = {weber_j(y, p): i for i, y in enumerate(floor.elements)}
    if len(lookup) != len(floor.elements):
        raise VolcanoError("J is not injective on the floor")
    nodes = surf[:need]
    rows = _neighbour_rows(sel, surf, lookup, floor.elements, children)
    nsurf = len(sel.plan()["surface"])
    # the X^l coefficient is -(sum of roots); its Y^l coefficient decides the relative sign
    a_part = [[(-sum(r[:nsurf])) % p] for r in rows]
    b_part = [[(-sum(r[nsurf:])) % p] for r in rows]
    alpha = int(_interpolate(nodes, a_part, p)[0, l])
    beta = int(_interpolate(nodes, b_part, p)[0, l])
    good = [s for s in (1, -1) if (alpha + s * beta + 1) % p == 0]
    if len(good) != 1:
        raise VolcanoError("Weber sign test is ambiguous")
    s = good[0]
    if s == -1:
        rows = [r[:nsurf] + [(-y) % p for y in r[nsurf:]] for r in rows]
    coeffs = K.products_from_roots(np.asarray(rows, np.int64), p)
    M = np.ascontiguousarray(_interpolate(nodes, coeffs, p)[:, : l + 2])
    _check_matrix(M, l, "weber_f", p)
    return M


def _matrix_to_poly(M, l, invariant, p):
    n = l + 1
    coeffs = {(a, b): int(M[a, b]) for a in range(n + 1) for b in range(a + 1) if M[a, b]}
    return BivariatePoly(l, invariant, coeffs, p)


def phi_mod_p(l, spec, order, invariant=None, store=None, rng=None, direct_gamma2=False):
    """Phi_l^g mod spec.p; retried with fresh randomness, VolcanoError after the retry budget."""
    invariant = canonical_invariant(invariant or order.invariant)
    if invariant != order.invariant:
        raise ValueError("order was selected for a different invariant")
    store = store or default_store()
    rng = rng or random.Random(spec.p)
    err = None
    for _ in range(RETRIES):
        try:
            M = _phi_matrix(l, spec, order, store, rng, direct_gamma2)
            return _matrix_to_poly(M, l, invariant, spec.p)
        except VolcanoError as exc:
            err = exc
    raise err


# -- all primes ------------------------------------------------------------------

@dataclass
class ComputeResult:
    poly: BivariatePoly
    order: OrderSelection
    primes: list
    discarded: list
    bound_bits: float
    seconds: float


_CTX = {}


def _init_worker(ctx):
    _CTX.clear()
    _CTX.update(ctx)


def _prime_job(spec):
    ctx = _CTX
    rng = random.Random(f"{ctx['seed']}:{spec.p}")
    for _ in range(RETRIES):
        try:
            M = _phi_matrix(ctx["l"], spec, ctx["order"], ctx["store"], rng, ctx["direct"])
        except VolcanoError:
            continue
        return spec, [int(M[a, b]) for a, b in ctx["keys"]]
    return spec, None


def coefficient_keys(l, invariant):
    n = l + 1
    return [(a, b) for a in range(n + 1) for b in range(a + 1) if support_allowed(invariant, l, a, b)]


def _pick_primes(l, order, needed, selector, seed, extra):
    inv = order.invariant
    if selector == "heuristic":
        return select_primes_heuristic(l, order.D, needed, inv, extra=extra)
    if selector == "randomized":
        return select_primes_randomized(l, order.D, needed, inv, extra=extra,
                                        rng=random.Random(seed), avoid_v=order.norms)
    raise ValueError(f"unknown prime selector {selector!r}")


def compute_detailed(l, invariant="j", m=None, seed=0, selector="heuristic", threads=1,
                     store=None, order=None, cache_dir=None, direct_gamma2=False, log=None):
    """Phi_l^g over Z (m None) or modulo m by the explicit CRT, with run statistics."""
    t0 = time.time()
    invariant = canonical_invariant(invariant)
    if m is not None and m < 1:
        raise ValueError("modulus must be positive")
    store = store or (PhiStore(cache_dir) if cache_dir else default_store())
    order = order or select_order(l, invariant, cache_dir=cache_dir)
    order.plan()
    for n in order.norms:
        store.get("gamma2" if invariant == "gamma2" and direct_gamma2 else
                  ("weber_f" if invariant == "weber_f" else "j"), n)
    explicit = m is not None
    bound = height_bound(l, invariant)
    needed = HeightBudget(l, invariant, bound).needed_bits(explicit)
    base = _pick_primes(l, order, needed, selector, seed, 0)
    extra = GUARD_PRIMES + math.ceil(SPARE_FRACTION * len(base))
    keys = coefficient_keys(l, invariant)
    ctx = {"l": l, "order": order, "store": store, "seed": seed, "keys": keys,
           "direct": direct_gamma2}
    results, discarded, done = {}, [], set()
    chosen = None
    pool = None
    threads = max(1, int(threads or 1))
    if threads > 1:
        pool = ProcessPoolExecutor(threads, initializer=_init_worker, initargs=(ctx,))
    else:
        _init_worker(ctx)
    try:
        while chosen is None:
            picked = _pick_primes(l, order, needed, selector, seed, extra)
            pos = {s.p: i for i, s in enumerate(picked)}
            specs = [s for s in picked if s.p not in done]
            if not specs:
                raise RuntimeError("prime selection produced no new primes")
            batch = max(threads * 4, 1)
            for i in range(0, len(specs), batch):
                chunk = specs[i: i + batch]
                done.update(s.p for s in chunk)
                out = pool.map(_prime_job, chunk) if pool else map(_prime_job, chunk)
                for spec, res in out:
                    if res is None:
                        discarded.append(spec.p)
                    else:
                        results[spec.p] = (spec, res)
                chosen = _choose(results, pos, needed)
                if log:
                    log(f"{len(results)} primes done, {len(discarded)} discarded")
                if chosen is not None:
                    break
            extra *= 2
    finally:
        if pool:
            pool.shutdown()
    base_specs, guard_specs = chosen
    vals = []
    for use in (base_specs, base_specs + guard_specs):
        acc = CrtAccumulator([s.p for s in use], "explicit" if explicit else "exact", m)
        for s in use:
            acc.update(s.p, results[s.p][1])
        vals.append(acc.finalize())
    if vals[0] != vals[1]:
        raise ArithmeticError("CRT result changed when the guard primes were added")
    poly = BivariatePoly(l, invariant, dict(zip(keys, vals[1])), m or 0)
    if poly.check_structure():
        raise ArithmeticError(f"computed polynomial fails checks: {poly.check_structure()}")
    return ComputeResult(poly, order, base_specs + guard_specs, discarded, bound,
                         time.time() - t0)


def _choose(results, pos, needed):
    """Base primes (in selection order) exceeding the bit budget, then the guard primes."""
    ordered = sorted((s for s, _ in results.values()), key=lambda s: pos[s.p])
    bits, base = 0.0, []
    for i, spec in enumerate(ordered):
        if bits > needed:
            guards = ordered[i: i + GUARD_PRIMES]
            if len(guards) < GUARD_PRIMES:
                return None
            return base, guards
        base.append(spec)
        bits += math.log2(spec.p)
    return None


def compute(l, invariant="j", m=None, **kwargs):
    """Phi_l^g over Z, or modulo m when m is given."""
    return compute_detailed(l, invariant, m, **kwargs).poly


# -- Phi_l from Phi_l^gamma2 ---------------------------------------------------

def _bmul(f, g, m):
    out = {}
    for (a, b), c in f.items():
        for (x, y), d in g.items():
            k = (a + x, b + y)
            out[k] = out.get(k, 0) + c * d
    if m:
        out = {k: v % m for k, v in out.items()}
    return {k: v for k, v in out.items() if v}


def _bshift(f, da, db, scale=1):
    return {(a + da, b + db): scale * c for (a, b), c in f.items()}


def phi_from_gamma2(phi_g2):
    """Phi_l from Phi_l^gamma2 by writing Phi^gamma2 = A + B + C with
    A = P0(x^3, y^3) y^b, B = P1 xy, C = P2 x^2 y^(2-b) and taking A^3 + B^3 + C^3 - 3ABC."""
    G = phi_g2
    if G.invariant != "gamma2":
        raise ValueError("expected a gamma2 polynomial")
    l, m = G.l, G.modulus
    if not G.coeffs:
        return BivariatePoly(l, "j", {}, m)
    b = 2 if l % 3 == 1 else 0
    shifts = {0: b, 1: 1, 2: 2 - b}
    P = [{}, {}, {}]
    for (a, d), c in G.full().items():
        i = a % 3
        e = d - shifts[i]
        if e < 0 or e % 3:
            raise ValueError(f"term X^{a} Y^{d} does not fit the gamma2 splitting")
        P[i][(a // 3, e // 3)] = c
    P0, P1, P2 = P
    cube = lambda f: _bmul(_bmul(f, f, m), f, m)
    terms = [_bshift(cube(P0), 0, b), _bshift(cube(P1), 1, 1),
             _bshift(_bmul(_bmul(P0, P1, m), P2, m), 1, 1, -3), _bshift(cube(P2), 2, 2 - b)]
    out = {}
    for t in terms:
        for k, v in t.items():
            out[k] = out.get(k, 0) + v
    if m:
        out = {k: v % m for k, v in out.items()}
    out = {k: v for k, v in out.items() if v}
    if any(out.get((y, x), 0) != v for (x, y), v in out.items()):
        raise ArithmeticError("reconstructed polynomial is not symmetric")
    return BivariatePoly(l, "j", {k: v for k, v in out.items() if k[0] >= k[1]}, m)


# -- volcano inspection -------------------------------------------------------

def spec_from_prime(p, l, D):
    """PrimeSpec for p with 4p = t^2 - v^2 l^2 D and t = 2 mod l, smallest v."""
    v = 1
    while v * v * l * l * -D <= 4 * p:
        r = 4 * p + v * v * l * l * D
        t = math.isqrt(r)
        if t * t == r and v % l:
            for tt in (t, -t):
                s = PrimeSpec(p, tt, v, l, D)
                if s.check():
                    return s
        v += 1
    raise ValueError(f"p={p} does not satisfy the norm equation for l={l}, D={D}")


def inspect_volcano(l, p, D, seed=0, store=None):
    """Surface cycles, sibling groups and parent links of the l-volcanoes over F_p."""
    spec = spec_from_prime(p, l, D)
    avoid = tuple(q for q in INSPECT_NORMS if spec.v % q == 0)
    sel = build_order(D, l, "j", walk_norms=INSPECT_NORMS, avoid=avoid)
    if sel is None:
        raise ValueError(f"D={D} has no supported presentation for l={l}")
    store = store or default_store()
    rng = random.Random(f"{seed}:{p}")
    phis = {n: store.matrix("j", n, p) for n in sel.norms}
    j0 = find_surface_root(sel.class_poly(), p, seed=rng.getrandbits(32))
    surf = enumerate_torsor(j0, sel.pres_O, phis, p)
    sset = set(surf.elements)
    children = [descend_to_floor(j, l, p, spec.t, rng, sset) for j in surf.elements]
    floor = enumerate_torsor(children[0], sel.pres_R, phis, p, "floor")
    plan = sel.plan()
    cyc = surface_cycles(surf, l) if kronecker(D, l) >= 0 else None
    groups = floor_cycles(floor, sel.gen2, l)
    parent = {}
    for j, c in zip(surf.elements, children):
        gi = plan["group_of"][floor.index[c]]
        if parent.setdefault(gi, j) != j:
            raise VolcanoError("sibling group with two parents")
    return {
        "l": l, "p": p, "D": D, "t": spec.t, "v": spec.v,
        "d_K": sel.d_K, "h_O": sel.h_O, "h_R": sel.h_R, "norms": list(sel.norms),
        "kronecker": kronecker(sel.d_K, l),
        "surface": surf.elements,
        "surface_cycles": cyc.cycles if cyc else [],
        "floor_groups": groups.cycles,
        "parents": [parent[i] for i in range(len(groups.cycles))],
    }


def volcano_dot(info):
    """Graphviz rendering of an inspect_volcano result."""
    lines = [f'graph volcano_l{info["l"]}_p{info["p"]} {{']
    for cyc in info["surface_cycles"]:
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            if a != b:
                lines.append(f'  "{a}" -- "{b}" [color=blue];')
    for par, grp in zip(info["parents"], info["floor_groups"]):
        for c in grp:
            lines.append(f'  "{par}" -- "{c}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- random isogenous pairs -------------------------------------------------------

def random_isogenous_pair(l, rng, bits=40, max_disc=400):
    """(p, j, j') with j' = j(E/<P>) for a random CM curve E over a random prime p."""
    while True:
        n = rng.randrange(7, max_disc)
        D = -n
        if D % 4 not in (0, 1):
            continue
        d_K, _ = fundamental_discriminant(D)
        if d_K in (-3, -4) or class_number(D) > 12:
            continue
        t = rng.randrange(2 ** (bits // 2 - 1), 2 ** (bits // 2))
        v = rng.randrange(1, 8)
        p4 = t * t - v * v * D
        if p4 % 4:
            continue
        p = p4 // 4
        if (p + 1 - t) % l or p % l == 0 or not is_prime(p) or D % p == 0:
            continue
        H = hilbert_class_poly(D).mod(p)
        rts = roots(H, seed=rng.getrandbits(32)) if H.degree > 1 else [(-H.c[0]) % p]
        rts = [r for r in rts if r not in (0, 1728 % p)]
        if not rts:
            continue
        j = rng.choice(rts)
        E = curve_with_trace(j, p, t, rng)
        N = p + 1 - t
        mcof = N
        while mcof % l == 0:
            mcof //= l
        for _ in range(64):
            P = scalar_mul(mcof, E.random_point(rng), E)
            if P is INF:
                continue
            while scalar_mul(l, P, E) is not INF:
                P = scalar_mul(l, P, E)
            return p, j, velu(E, P, l).j_invariant()


def weber_root_pairs(P, rng, count, bits=30):
    """Random (p, x, y) with Phi^f(x, y) = 0 over fresh primes p = 11 mod 12."""
    out = []
    while len(out) < count:
        p = rng.randrange(2 ** (bits - 1), 2 ** bits) | 1
        if p % 12 != 11 or not is_prime(p):
            continue
        for _ in range(8):
            x = rng.randrange(1, p)
            ys = [y for y in roots(FpPoly(P.in_x(x, p), p)) if y]
            if ys:
                out.append((p, x, rng.choice(ys)))
                break
    return out
