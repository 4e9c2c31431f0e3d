"""Short Weierstrass curves over F_p, order-l points and Velu isogenies."""

from dataclasses import dataclass

from .arith import smallest_nonresidue, sqrt_mod

INF = None  # the point at infinity; affine points are (x, y) tuples


class TwistMismatch(Exception):
    """No point of order l found: the curve is probably the wrong twist."""


@dataclass(frozen=True)
class Curve:
    A: int
    B: int
    p: int

    def __post_init__(self):
        if (4 * self.A ** 3 + 27 * self.B ** 2) % self.p == 0:
            raise ValueError("singular curve")

    def j_invariant(self):
        p = self.p
        a3 = 4 * pow(self.A, 3, p)
        return 1728 * a3 * pow(a3 + 27 * self.B * self.B, -1, p) % p

    def contains(self, P):
        if P is INF:
            return True
        x, y = P
        return (y * y - x * x * x - self.A * x - self.B) % self.p == 0

    def twist(self):
        c = smallest_nonresidue(self.p)
        p = self.p
        return Curve(c * c * self.A % p, pow(c, 3, p) * self.B % p, p)

    def random_point(self, rng):
        p = self.p
        while True:
            x = rng.randrange(p)
            y = sqrt_mod(x * x * x + self.A * x + self.B, p)
            if y is not None:
                return (x, y if rng.random() < 0.5 else (-y) % p)


def curve_from_j(j, p):
    """y^2 = x^3 + 3k x + 2k with k = j / (1728 - j)."""
    j %= p
    if j == 0 or j == 1728 % p:
        raise ValueError("j = 0 and j = 1728 are not supported")
    k = j * pow(1728 - j, -1, p) % p
    return Curve(3 * k % p, 2 * k % p, p)


def add(P, Q, E):
    if P is INF:
        return Q
    if Q is INF:
        return P
    p = E.p
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if (y1 + y2) % p == 0:
            return INF
        lam = (3 * x1 * x1 + E.A) * pow(2 * y1, -1, p) % p
    else:
        lam = (y2 - y1) * pow(x2 - x1, -1, p) % p
    x3 = (lam * lam - x1 - x2) % p
    return (x3, (lam * (x1 - x3) - y1) % p)


group_law = add


def neg(P, E):
    return INF if P is INF else (P[0], (-P[1]) % E.p)


def scalar_mul(n, P, E):
    if n < 0:
        return scalar_mul(-n, neg(P, E), E)
    R = INF
    for bit in bin(n)[2:]:
        R = add(R, R, E)
        if bit == "1":
            R = add(R, P, E)
    return R


def point_of_order_l(E, t, l, rng, max_failures=32):
    """A random point of exact order l on E, where #E(F_p) = p + 1 - t.

    The cofactor strips the whole l-part of the group order, so the point is
    uniform on E[l] even when the l-Sylow subgroup has a cyclic factor of
    order l^2 or more (the number of tries then scales with that factor)."""
    N = E.p + 1 - t
    if N % l:
        raise ValueError("l does not divide p + 1 - t")
    m, k = N, 0
    while m % l == 0:
        m //= l
        k += 1
    tries = max_failures * l ** max(k - 2, 0)
    for _ in range(tries):
        P = scalar_mul(m, E.random_point(rng), E)
        if P is not INF and scalar_mul(l, P, E) is INF:
            return P
    raise TwistMismatch(f"no point of order {l} after {tries} tries")


def has_order(E, N, rng, trials=2):
    """Whether N kills random points of E (a cheap test that #E(F_p) = N)."""
    return all(scalar_mul(N, E.random_point(rng), E) is INF for _ in range(trials))


def velu(E, P, l):
    """Codomain of the isogeny with kernel <P>, P of odd prime order l."""
    if l % 2 == 0:
        raise ValueError("l must be odd")
    p = E.p
    t = w = 0
    Q = P
    for _ in range((l - 1) // 2):
        if Q is INF:
            raise ValueError("P has order smaller than l")
        qx, qy = Q
        s = (6 * qx * qx + 2 * E.A) % p
        u = (4 * qy * qy + s * qx) % p
        t += s
        w += u
        Q = add(Q, P, E)
    return Curve((E.A - 5 * t) % p, (E.B - 7 * w) % p, p)


def curve_with_trace(j, p, t, rng):
    """The twist of the curve with invariant j whose group has order p + 1 - t."""
    E = curve_from_j(j, p)
    if has_order(E, p + 1 - t, rng):
        return E
    E = E.twist()
    if has_order(E, p + 1 - t, rng):
        return E
    raise TwistMismatch(f"no twist of j={j} has trace {t}")


def isogenous_j(j, l, p, t, rng):
    """j-invariant of a random l-isogenous curve, for the twist with trace t."""
    E = curve_with_trace(j, p, t, rng)
    return velu(E, point_of_order_l(E, t, l, rng), l).j_invariant()
