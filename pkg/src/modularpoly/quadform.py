"""Binary quadratic forms of negative discriminant and class group arithmetic."""

import math
from dataclasses import dataclass

import numpy as np

from .arith import fundamental_discriminant, kronecker, primes_up_to, factor


class QuadForm(tuple):
    """The form a x^2 + b x y + c y^2, stored as the tuple (a, b, c)."""

    def __new__(cls, a, b, c):
        return tuple.__new__(cls, (a, b, c))

    a = property(lambda self: self[0])
    b = property(lambda self: self[1])
    c = property(lambda self: self[2])

    @property
    def discriminant(self):
        return self[1] * self[1] - 4 * self[0] * self[2]

    def is_primitive(self):
        return math.gcd(math.gcd(self[0], self[1]), self[2]) == 1

    def is_reduced(self):
        a, b, c = self
        if not (abs(b) <= a <= c):
            return False
        return b >= 0 if (abs(b) == a or a == c) else True

    def inverse(self):
        return reduce(QuadForm(self[0], -self[1], self[2]))

    def __repr__(self):
        return f"QuadForm{tuple(self)}"


def identity(D):
    """The principal form of discriminant D."""
    b = D % 2
    return QuadForm(1, b, (b * b - D) // 4)


def reduce(f):
    a, b, c = f
    if b * b - 4 * a * c >= 0:
        raise ValueError("reduction needs a negative discriminant")
    if a <= 0:
        raise ValueError("form must be positive definite")
    while True:
        if not (-a < b <= a):
            # normalize b into (-a, a]
            k = (a - b) // (2 * a)
            c = a * k * k + b * k + c
            b = b + 2 * a * k
        if a > c:
            a, b, c = c, -b, a
            continue
        if a == c and b < 0:
            b = -b
        return QuadForm(a, b, c)


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def compose(f, g):
    """Gaussian composition followed by reduction."""
    a1, b1, c1 = f
    a2, b2, c2 = g
    D = b1 * b1 - 4 * a1 * c1
    if b2 * b2 - 4 * a2 * c2 != D:
        raise ValueError("discriminant mismatch")
    s = (b1 + b2) // 2
    g1, u1, v1 = _xgcd(a1, a2)
    e, u2, w = _xgcd(g1, s)
    u, v = u2 * u1, u2 * v1
    A = a1 * a2 // (e * e)
    B = (u * a1 * b2 + v * a2 * b1 + w * (b1 * b2 + D) // 2) // e
    B %= 2 * A
    C = (B * B - D) // (4 * A)
    return reduce(QuadForm(A, B, C))


def power(f, n):
    D = f.discriminant
    if n < 0:
        f, n = f.inverse(), -n
    r = identity(D)
    while n:
        if n & 1:
            r = compose(r, f)
        f = compose(f, f)
        n >>= 1
    return r


def _check_disc(D):
    if D >= 0 or D % 4 not in (0, 1):
        raise ValueError(f"{D} is not a negative discriminant")


def reduced_forms(D):
    """All reduced primitive forms of discriminant D, sorted by (a, b)."""
    _check_disc(D)
    out = []
    amax = math.isqrt(-D // 3)
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            if (b - D) % 2:
                continue
            n = b * b - D
            if n % (4 * a):
                continue
            c = n // (4 * a)
            if c < a or (b < 0 and a == c):
                continue
            if math.gcd(math.gcd(a, b), c) == 1:
                out.append(QuadForm(a, b, c))
    return out


def class_number(D):
    """Number of reduced primitive forms of discriminant D."""
    return len(reduced_forms(D))


def class_number_formula(D):
    """h(D) from h(d_K), the conductor u and the local factors at primes dividing u."""
    dk, u = fundamental_discriminant(D)
    h = class_number(dk)
    num, den = h * u, 1
    for q, _ in factor(u).factors:
        num *= q - kronecker(dk, q)
        den *= q
    w = {-3: 3, -4: 2}.get(dk, 1)  # unit index [O_K^* : O^*]
    if u == 1:
        w = 1
    assert num % (den * w) == 0
    return num // (den * w)


def class_number_table(X):
    """Array h with h[n] = h(-n) for every discriminant -n with 3 <= n <= X (0 elsewhere).

    Counts reduced primitive forms for all discriminants at once."""
    h = np.zeros(X + 1, np.int64)
    amax = math.isqrt(X // 3)
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            # c >= a, |D| = 4ac - b^2 <= X
            cmax = (X + b * b) // (4 * a)
            if cmax < a:
                continue
            c = np.arange(a, cmax + 1, dtype=np.int64)
            if b < 0:
                c = c[c > a]
            n = 4 * a * c - b * b
            g = np.gcd(np.gcd(a, abs(b)), c)
            np.add.at(h, n[g == 1], 1)
    return h


def conductor(D):
    return fundamental_discriminant(D)[1]


def prime_form(D, l0):
    """The form (l0, b, c) of discriminant D with the smallest b >= 0."""
    _check_disc(D)
    if kronecker(D, l0) == -1:
        raise ValueError(f"{l0} is inert in discriminant {D}")
    if conductor(D) % l0 == 0:
        raise ValueError(f"{l0} divides the conductor of {D}")
    for b in range(0, 2 * l0):
        if (b * b - D) % (4 * l0) == 0:
            return QuadForm(l0, b, (b * b - D) // (4 * l0))
    raise ValueError("no prime form")  # unreachable for valid input


def form_order(f, h):
    """Order of f in a group of order h (exponent checks on the prime factors of h)."""
    D = f.discriminant
    one = identity(D)
    f = reduce(f)
    if power(f, h) != one:
        raise ValueError("h is not a multiple of the order")
    n = h
    for q, e in factor(h).factors:
        for _ in range(e):
            if power(f, n // q) == one:
                n //= q
            else:
                break
    return n


@dataclass
class Presentation:
    """Polycyclic presentation of cl(D) with its exponent-vector table.

    Table index i corresponds to the exponent vector whose mixed-radix value
    (first generator least significant) is i, and table[i] is the reduced
    form alpha_1^x_1 ... alpha_k^x_k."""

    D: int
    generators: list
    norms: list
    relative_orders: list
    power_relations: list
    table: list

    def __post_init__(self):
        self.index = {f: i for i, f in enumerate(self.table)}

    @property
    def order(self):
        return len(self.table)

    def vector(self, i):
        x = []
        for r in self.relative_orders:
            x.append(i % r)
            i //= r
        return tuple(x)

    def index_of_vector(self, x):
        i, m = 0, 1
        for xi, r in zip(x, self.relative_orders):
            i += (xi % r) * m
            m *= r
        return i

    def dlog(self, f):
        """Table index of the class of f."""
        return self.index[reduce(f)]

    def mul(self, i, f):
        """Table index of table[i] * f."""
        return self.index[compose(self.table[i], f)]

    def translation(self, f):
        """Permutation i -> index(table[i] * f) as a list."""
        return [self.index[compose(t, f)] for t in self.table]

    def to_text(self):
        lines = [f"PRESENTATION D={self.D} h={self.order}"]
        for g, r, s in zip(self.generators, self.relative_orders, self.power_relations):
            lines.append(f"{g.a} {g.b} {g.c} {r} " + " ".join(map(str, s)))
        return "\n".join(lines) + "\n"


def polycyclic_presentation(D, excluded=(), primes=None, prime_cap=None, h=None, ordered=False):
    """Presentation from prime forms of ascending norm, greedily.

    `primes` restricts the candidate norms (tried in the given order when
    `ordered` is set); otherwise all primes up to the cap are tried.
    Primes that are inert, divide the conductor or lie in
    `excluded` are skipped."""
    _check_disc(D)
    if h is None:
        h = class_number(D)
    u = conductor(D)
    if primes is None:
        cap = prime_cap or max(1000, math.isqrt(-D) * 4)
        primes = primes_up_to(cap)
    one = identity(D)
    table = [one]
    index = {one: 0}
    gens, norms, rels, pows = [], [], [], []
    for q in (primes if ordered else sorted(primes)):
        if len(table) == h:
            break
        if q in excluded or kronecker(D, q) == -1 or u % q == 0:
            continue
        g = reduce(prime_form(D, q))
        cur, r = g, 1
        while cur not in index:
            cur = compose(cur, g)
            r += 1
        if r == 1:
            continue
        s_idx = index[cur]
        size = len(table)
        new = list(table)
        gp = one
        for k in range(1, r):
            gp = compose(gp, g)
            new.extend(compose(t, gp) for t in table)
        table = new
        index = {f: i for i, f in enumerate(table)}
        if len(index) != len(table):
            raise ArithmeticError("presentation table is not injective")
        rels.append(r)
        # power relation: g^r equals the element with this vector
        svec = []
        i = s_idx
        for rr in rels[:-1]:
            svec.append(i % rr)
            i //= rr
        pows.append(tuple(svec) + (0,))
        gens.append(g)
        norms.append(q)
        assert len(table) == size * r
    if len(table) != h:
        raise ValueError(f"presentation of cl({D}) incomplete: {len(table)} of {h}")
    return Presentation(D, gens, norms, rels, pows, table)


def kerphi_generator(D_O, l):
    """A form (l^2, b, c) of discriminant l^2 D_O generating the kernel of cl(R) -> cl(O)."""
    if l % 2 == 0:
        raise ValueError("l must be odd")
    _check_disc(D_O)
    dk, u = fundamental_discriminant(D_O)
    if u % l == 0:
        raise ValueError("l divides the conductor")
    DR = l * l * D_O
    target = l - kronecker(dk, l)
    hR = class_number_formula(DR)
    norm_w = (D_O * D_O - D_O) // 4  # N(w) for w = (D + sqrt D)/2
    for i in range(l):
        c = norm_w + i * D_O + i * i
        if c % l == 0:
            continue
        f = QuadForm(l * l, l * (D_O + 2 * i), c)
        assert f.discriminant == DR
        if form_order(f, hR) == target:
            return f
    raise ValueError("no kernel generator found")
