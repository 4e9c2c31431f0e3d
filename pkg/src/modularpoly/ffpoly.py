"""Dense polynomials over prime fields F_p, p < 2^63.

Coefficient lists run from low to high degree.  Multiplication above a
degree threshold packs coefficients into one big integer (Kronecker
substitution) so that the heavy lifting is a single GMP product.
"""

import random

import gmpy2

from .arith import is_prime

SCHOOLBOOK_CUTOFF = 64


class PrimeField:
    __slots__ = ("p",)

    def __init__(self, p, check=True):
        if check and (p <= 3 or p >= 1 << 63 or not is_prime(p)):
            raise ValueError(f"{p} is not a prime in (3, 2^63)")
        self.p = p

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(self.p)

    def __repr__(self):
        return f"GF({self.p})"

    def inv(self, a):
        return pow(a, -1, self.p)


def _strip(c):
    while c and c[-1] == 0:
        c.pop()
    return c


class FpPoly:
    """Immutable-by-convention dense polynomial over F_p."""

    __slots__ = ("p", "c")

    def __init__(self, coeffs, p):
        if isinstance(p, PrimeField):
            p = p.p
        self.p = p
        self.c = _strip([x % p for x in coeffs])

    @classmethod
    def _raw(cls, c, p):
        f = cls.__new__(cls)
        f.p, f.c = p, _strip(c)
        return f

    @property
    def field(self):
        return PrimeField(self.p, check=False)

    @property
    def degree(self):
        return len(self.c) - 1

    def is_zero(self):
        return not self.c

    def lc(self):
        return self.c[-1] if self.c else 0

    def __eq__(self, other):
        return isinstance(other, FpPoly) and self.p == other.p and self.c == other.c

    def __repr__(self):
        return f"FpPoly({self.c}, p={self.p})"

    def __call__(self, x):
        r, p = 0, self.p
        for a in reversed(self.c):
            r = (r * x + a) % p
        return r

    def _check(self, g):
        if self.p != g.p:
            raise ValueError("field mismatch")

    def __add__(self, g):
        self._check(g)
        a, b = self.c, g.c
        if len(a) < len(b):
            a, b = b, a
        p = self.p
        return FpPoly._raw([(x + y) % p for x, y in zip(a, b)] + a[len(b):], p)

    def __neg__(self):
        return FpPoly._raw([(-x) % self.p for x in self.c], self.p)

    def __sub__(self, g):
        return self + (-g)

    def __mul__(self, g):
        return poly_mul(self, g)

    def __divmod__(self, g):
        return poly_divmod(self, g)

    def __mod__(self, g):
        return poly_divmod(self, g)[1]

    def __floordiv__(self, g):
        return poly_divmod(self, g)[0]

    def scale(self, s):
        p = self.p
        return FpPoly._raw([x * s % p for x in self.c], p)

    def monic(self):
        if not self.c:
            return self
        return self.scale(pow(self.c[-1], -1, self.p))

    def derivative(self):
        p = self.p
        return FpPoly._raw([i * x % p for i, x in enumerate(self.c)][1:], p)


# -- multiplication --------------------------------------------------------

def _school(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return [x % p for x in out]


def _slot_bytes(p, n):
    bits = 2 * p.bit_length() + max(n, 1).bit_length() + 1
    return (bits + 7) // 8


def _pack(c, nb):
    return gmpy2.from_binary(b"\x01\x01" + b"".join(x.to_bytes(nb, "little") for x in c)) if c else gmpy2.mpz(0)


def _unpack(z, nb, count, p):
    raw = gmpy2.to_binary(z)[2:]
    raw = raw + bytes(nb * count - len(raw)) if len(raw) < nb * count else raw
    return [int.from_bytes(raw[i:i + nb], "little") % p for i in range(0, nb * count, nb)]


def _kron(a, b, p):
    if not a or not b:
        return []
    nb = _slot_bytes(p, min(len(a), len(b)))
    z = _pack(a, nb) * _pack(b, nb) if a is not b else _pack(a, nb) ** 2
    return _unpack(z, nb, len(a) + len(b) - 1, p)


def _mul_lists(a, b, p):
    if min(len(a), len(b)) <= SCHOOLBOOK_CUTOFF:
        return _school(a, b, p)
    return _kron(a, b, p)


def poly_mul(f, g):
    """Product f*g; Kronecker substitution above the schoolbook cutoff."""
    f._check(g)
    return FpPoly._raw(_mul_lists(f.c, g.c, f.p), f.p)


# -- division --------------------------------------------------------------

def _school_divmod(a, b, p):
    a = list(a)
    db = len(b) - 1
    inv = pow(b[-1], -1, p)
    if len(a) <= db:
        return [], a
    q = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        coef = a[i] * inv % p
        if coef:
            q[i - db] = coef
            for j in range(db + 1):
                a[i - db + j] = (a[i - db + j] - coef * b[j]) % p
    return q, a[:db]


def _series_inverse(b, n, p):
    """First n terms of 1/b as a power series (b[0] != 0), Newton iteration."""
    g = [pow(b[0], -1, p)]
    k = 1
    while k < n:
        k = min(2 * k, n)
        e = _mul_lists(b[:k], g, p)[:k]
        e = [(-x) % p for x in e]
        e[0] = (e[0] + 2) % p
        g = _mul_lists(g, e, p)[:k]
    return g


class Reducer:
    """Remainder modulo a fixed polynomial m using a precomputed reversed inverse."""

    def __init__(self, m):
        self.m, self.p = m, m.p
        self.d = m.degree
        if self.d < 1:
            raise ValueError("modulus must have positive degree")
        rev = m.c[::-1]
        self.fast = self.d > SCHOOLBOOK_CUTOFF
        if self.fast:
            self.rinv = _series_inverse(rev, self.d + 1, self.p)

    def rem(self, a):
        d, p = self.d, self.p
        if len(a) <= d:
            return list(a)
        if not self.fast:
            return _school_divmod(a, self.m.c, p)[1]
        k = len(a) - d  # quotient length
        if k > d + 1:
            return _school_divmod(a, self.m.c, p)[1]
        ra = a[::-1][:k]
        q = _mul_lists(ra, self.rinv[:k], p)[:k][::-1]
        qm = _mul_lists(q, self.m.c, p)
        r = [(x - y) % p for x, y in zip(a[:d], qm[:d])]
        return _strip(r)

    def quo_rem(self, a):
        d, p = self.d, self.p
        if len(a) <= d:
            return [], list(a)
        if not self.fast or len(a) - d > d + 1:
            return _school_divmod(a, self.m.c, p)
        k = len(a) - d
        q = _mul_lists(a[::-1][:k], self.rinv[:k], p)[:k][::-1]
        qm = _mul_lists(q, self.m.c, p)
        return q, _strip([(x - y) % p for x, y in zip(a[:d], qm[:d])])


def poly_divmod(f, g):
    f._check(g)
    if g.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    if f.degree < g.degree:
        return FpPoly._raw([], f.p), f
    if g.degree > SCHOOLBOOK_CUTOFF and f.degree - g.degree > SCHOOLBOOK_CUTOFF:
        lc_inv = pow(g.lc(), -1, f.p)
        red = Reducer(g.scale(lc_inv))
        q, r = red.quo_rem(f.c)
        return FpPoly._raw([x * lc_inv % f.p for x in q], f.p), FpPoly._raw(r, f.p)
    q, r = _school_divmod(f.c, g.c, f.p)
    return FpPoly._raw(q, f.p), FpPoly._raw(r, f.p)


def poly_gcd(f, g):
    """Monic gcd (Euclid)."""
    f._check(g)
    a, b, p = f.c, g.c, f.p
    while b:
        a, b = b, _strip(_school_divmod(a, b, p)[1])
    return FpPoly._raw(a, p).monic()


# -- powering and roots ----------------------------------------------------

def powmod(base, e, m):
    """base^e mod m by left-to-right square-and-multiply."""
    red = Reducer(m.monic())
    p = m.p
    b = red.rem(base.c)
    r = [1]
    for bit in bin(e)[2:]:
        r = red.rem(_mul_lists(r, r, p))
        if bit == "1":
            r = red.rem(_mul_lists(r, b, p))
    return FpPoly._raw(r, p)


def frobenius_powmod(f):
    """X^p mod f."""
    if f.degree < 1:
        raise ValueError("need deg f >= 1")
    red = Reducer(f.monic())
    p = f.p
    r = [1]
    for bit in bin(p)[2:]:
        r = red.rem(_mul_lists(r, r, p))
        if bit == "1":
            r = red.rem([0] + r)
    return FpPoly._raw(r, p)


def _split(g, rng, out):
    p = g.p
    if g.degree == 0:
        return
    if g.degree == 1:
        out.append((-g.c[0]) * pow(g.c[1], -1, p) % p)
        return
    if g.degree == 2 and p > 2:
        from .arith import sqrt_mod
        c0, c1 = g.c[0], g.c[1]  # monic
        s = sqrt_mod(c1 * c1 - 4 * c0, p)
        h = pow(2, -1, p)
        out.extend({(-c1 + s) * h % p, (-c1 - s) * h % p})
        return
    while True:
        a = rng.randrange(p)
        h = powmod(FpPoly([a, 1], p), (p - 1) // 2, g)
        h = h - FpPoly([1], p)
        d = poly_gcd(g, h)
        if 0 < d.degree < g.degree:
            _split(d, rng, out)
            _split(g // d, rng, out)
            return


def roots(f, seed=0):
    """Distinct roots of f in F_p, ascending."""
    if f.is_zero():
        raise ValueError("zero polynomial")
    if f.degree < 1:
        return []
    p = f.p
    f = f.monic()
    xp = frobenius_powmod(f)
    g = poly_gcd(f, xp - FpPoly([0, 1], p))
    out = []
    _split(g, random.Random(seed), out)
    return sorted(set(out))


# -- product trees and interpolation --------------------------------------

def _subproduct_tree(xs, p):
    level = [[(-x) % p, 1] for x in xs]
    tree = [level]
    while len(level) > 1:
        nxt = [_mul_lists(level[i], level[i + 1], p) for i in range(0, len(level) - 1, 2)]
        if len(level) % 2:
            nxt.append(level[-1])
        level = nxt
        tree.append(level)
    return tree


def product_from_roots(rts, p):
    """Monic polynomial with the given multiset of roots (balanced product tree)."""
    if isinstance(p, PrimeField):
        p = p.p
    if not rts:
        return FpPoly._raw([1], p)
    return FpPoly._raw(list(_subproduct_tree([r % p for r in rts], p)[-1][0]), p)


def _rem(a, m, p):
    if len(a) < len(m):
        return list(a)
    if len(m) - 1 > SCHOOLBOOK_CUTOFF and len(a) - len(m) > SCHOOLBOOK_CUTOFF:
        return Reducer(FpPoly._raw(list(m), p)).quo_rem(a)[1]
    return _school_divmod(a, m, p)[1]


def multipoint_eval(f, xs):
    """Values f(x) for all x in xs, by remaindering down a subproduct tree."""
    p = f.p
    if not xs:
        return []
    tree = _subproduct_tree([x % p for x in xs], p)
    rems = [_rem(f.c, tree[-1][0], p)]
    for depth in range(len(tree) - 2, -1, -1):
        level = tree[depth]
        nxt = []
        for i, r in enumerate(rems):
            for k in (2 * i, 2 * i + 1):
                if k < len(level):
                    nxt.append(_rem(r, level[k], p))
        rems = nxt
    return [r[0] if r else 0 for r in rems]


def interpolate(points, p):
    """The polynomial of degree < n through n points with distinct abscissae."""
    if isinstance(p, PrimeField):
        p = p.p
    xs = [x % p for x, _ in points]
    if len(set(xs)) != len(xs):
        raise ValueError("duplicate abscissa")
    if not points:
        return FpPoly._raw([], p)
    tree = _subproduct_tree(xs, p)
    m = FpPoly._raw(list(tree[-1][0]), p)
    dm = multipoint_eval(m.derivative(), xs)
    level = [[y * pow(d, -1, p) % p] for (_, y), d in zip(points, dm)]
    for depth in range(len(tree) - 1):
        polys = tree[depth]
        nxt = []
        for i in range(0, len(level) - 1, 2):
            a = _mul_lists(level[i], polys[i + 1], p)
            b = _mul_lists(level[i + 1], polys[i], p)
            if len(a) < len(b):
                a, b = b, a
            nxt.append([(x + y) % p for x, y in zip(a, b)] + a[len(b):])
        if len(level) % 2:
            nxt.append(level[-1])
        level = nxt
    return FpPoly(level[0], p)


def cube_root(x, p):
    """The unique cube root of x in F_p for p = 2 mod 3."""
    if isinstance(p, PrimeField):
        p = p.p
    if p % 3 != 2:
        raise ValueError("cube roots are unique only for p = 2 mod 3")
    return pow(x % p, (2 * p - 1) // 3, p)


def any_root(f, seed=0):
    """One root of f in F_p (the smallest after following smaller split factors), or None."""
    if f.degree < 1:
        return None
    p = f.p
    f = f.monic()
    g = poly_gcd(f, frobenius_powmod(f) - FpPoly([0, 1], p))
    rng = random.Random(seed)
    while g.degree > 1:
        a = rng.randrange(p)
        h = powmod(FpPoly([a, 1], p), (p - 1) // 2, g) - FpPoly([1], p)
        d = poly_gcd(g, h)
        if 0 < d.degree < g.degree:
            e = g // d
            g = d if d.degree <= e.degree else e
    if g.degree < 1:
        return None
    return (-g.c[0]) % p
