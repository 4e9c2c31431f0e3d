"""Independent small-l modular polynomials from q-expansions and numerical interpolation."""

import math
import random
from dataclasses import dataclass

import mpmath

from .bivariate import BivariatePoly, support_allowed
from .classpoly import _eta_series
from .crt import CrtAccumulator
from .ffpoly import _mul_lists
from .arith import is_prime
from .primes import height_bound

ORACLE_MAX_L = 13


# -- integer and modular power series (lists, low to high) -------------------

def _zmul(a, b, n=None):
    """Exact product of integer series, truncated to n terms (Kronecker with a bias)."""
    if not a or not b:
        return []
    if n is not None:
        a, b = a[:n], b[:n]
    size = len(a) + len(b) - 1
    bound = min(len(a), len(b)) * max(map(abs, a)) * max(map(abs, b))
    nb = (bound.bit_length() + 2 + 7) // 8
    k = 8 * nb

    def pack(c):
        pos = int.from_bytes(b"".join((x if x > 0 else 0).to_bytes(nb, "little") for x in c), "little")
        neg = int.from_bytes(b"".join((-x if x < 0 else 0).to_bytes(nb, "little") for x in c), "little")
        return pos - neg

    z = pack(a) * pack(b)
    half = 1 << (k - 1)
    bias = int.from_bytes(half.to_bytes(nb, "little") * size, "little")
    raw = (z + bias).to_bytes(nb * size + 1, "little")
    out = [int.from_bytes(raw[i * nb:(i + 1) * nb], "little") - half for i in range(size)]
    return out[:n] if n is not None else out


class _Ring:
    """Series arithmetic either over Z (p = 0) or modulo a prime p."""

    def __init__(self, p=0):
        self.p = p

    def mul(self, a, b, n):
        if self.p:
            return _mul_lists(a[:n], b[:n], self.p)[:n]
        return _zmul(a, b, n)

    def norm(self, a):
        return [x % self.p for x in a] if self.p else a

    def add(self, a, b):
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, x in enumerate(b):
            out[i] += x
        return self.norm(out)


def _pentagonal(n):
    """prod (1 - q^k) to n terms."""
    e = [0] * n
    e[0] = 1
    k = 1
    while True:
        s = -1 if k % 2 else 1
        g1, g2 = k * (3 * k - 1) // 2, k * (3 * k + 1) // 2
        if g1 >= n:
            break
        e[g1] += s
        if g2 < n:
            e[g2] += s
        k += 1
    return e


def _partitions(n, p=0):
    """1 / prod (1 - q^k) to n terms via the pentagonal recurrence."""
    pk = [0] * n
    pk[0] = 1
    gens = []
    k = 1
    while True:
        g1, g2 = k * (3 * k - 1) // 2, k * (3 * k + 1) // 2
        if g1 >= n:
            break
        s = 1 if k % 2 else -1
        gens.append((g1, s))
        if g2 < n:
            gens.append((g2, s))
        k += 1
    gens.sort()
    for m in range(1, n):
        acc = 0
        for g, s in gens:
            if g > m:
                break
            acc += s * pk[m - g]
        pk[m] = acc % p if p else acc
    return pk


def _spread(a, step, n):
    """a(q^step) to n terms."""
    out = [0] * n
    for i, x in enumerate(a):
        if i * step >= n:
            break
        out[i * step] = x
    return out


def _pow24(ring, a, n):
    a2 = ring.mul(a, a, n)
    a3 = ring.mul(a2, a, n)
    a6 = ring.mul(a3, a3, n)
    a12 = ring.mul(a6, a6, n)
    return ring.mul(a12, a12, n)


def _jq(n, p=0):
    """q * j(q) to n terms, from x = f_2^24 = 4096 q prod (1 + q^k)^24 and j = (x + 16)^3 / x."""
    ring = _Ring(p)
    parts = _partitions(n, p)
    pent = ring.norm(_pentagonal(n))
    # prod (1 + q^k) = E(q^2) / E(q);  1 / prod (1 + q^k) = E(q) / E(q^2)
    dist = ring.mul(_spread(pent, 2, n), parts, n)
    inv_dist = ring.mul(pent, _spread(parts, 2, n), n)
    P = _pow24(ring, dist, n)
    Pinv = _pow24(ring, inv_dist, n)
    # q j = 1/P + 768 q + 196608 q^2 P + 2^24 q^3 P^2
    out = list(Pinv)
    if n > 1:
        out[1] += 768
    for i, x in enumerate(P[: max(0, n - 2)]):
        out[i + 2] += 196608 * x
    P2 = ring.mul(P, P, max(0, n - 3)) if n > 3 else []
    for i, x in enumerate(P2):
        out[i + 3] += (1 << 24) * x
    return ring.norm(out)


@dataclass
class IntSeries:
    """Truncated Laurent series sum c_k q^((val + k) / den), known below `prec`."""

    val: int
    coeffs: list
    den: int = 1

    @property
    def prec(self):
        return self.val + len(self.coeffs)

    def __getitem__(self, e):
        i = e - self.val
        if i < 0:
            return 0
        if i >= len(self.coeffs):
            raise IndexError("coefficient beyond truncation order")
        return self.coeffs[i]


def j_qexp(terms):
    """j(q) = 1/q + 744 + 196884 q + ..., with `terms` coefficients starting at q^-1."""
    if terms < 2:
        raise ValueError("need at least two terms")
    return IntSeries(-1, _jq(terms))


def j_qexp_eisenstein(terms):
    """j = E4^3 / Delta, an independent route used for cross-checks."""
    n = terms
    sig3 = [0] * n
    for d in range(1, n):
        for m in range(d, n, d):
            sig3[m] += d ** 3
    E4 = [1] + [240 * s for s in sig3[1:]]
    E4c = _zmul(_zmul(E4, E4, n), E4, n)
    # Delta / q = prod (1 - q^k)^24; its inverse is (sum p(k) q^k)^24
    ring = _Ring(0)
    inv = _pow24(ring, _partitions(n), n)
    return IntSeries(-1, _zmul(E4c, inv, n))


# -- Phi_l from power sums of the conjugates -----------------------------------

def _laurent_mul(a, va, b, vb, upto, p):
    """Product of Laurent series (lists with valuations) truncated at exponent `upto`."""
    n = upto - (va + vb) + 1
    if n <= 0:
        return [], va + vb
    return _mul_lists(a[:n], b[:n], p)[:n], va + vb


def _phi_mod_p_qexp(l, p):
    K = l + 1
    cap = lambda i: l * (l + 2 - i) + 1  # exponent up to which S_i is needed
    T = l * cap(1) + K + 2
    jq = _jq(T, p)
    pows = [[1] + [0] * (T - 1), jq]  # (q j)^i
    for _ in range(2, K + 1):
        pows.append(_mul_lists(pows[-1], jq, p)[:T])
    # S_i = j(q^l)^i + l * sum_m c^(i)_{lm} q^m, with c^(i)_n the coefficient of q^n in j^i
    S = {}
    for i in range(1, K + 1):
        hi = cap(i)
        val = -l * i
        s = [0] * (hi - val + 1)
        for n in range(-i, hi // l + 1):  # part j(q^l)^i
            s[l * n - val] = (s[l * n - val] + pows[i][n + i]) % p
        m0 = -((i) // l)
        for m in range(m0, hi + 1):
            idx = l * m + i
            if 0 <= idx < T:
                s[m - val] = (s[m - val] + l * pows[i][idx]) % p
        S[i] = (s, val)
    R = lambda k: l * (K - k)
    e = {0: ([1], 0)}
    for k in range(1, K + 1):
        upto = R(k)
        acc = {}
        for i in range(1, k + 1):
            ea, va = e[k - i]
            sb, vb = S[i]
            prod, v = _laurent_mul(ea, va, sb, vb, upto, p)
            sign = 1 if i % 2 else -1
            for t, x in enumerate(prod):
                acc[v + t] = (acc.get(v + t, 0) + sign * x) % p
        lo = min(acc)
        inv_k = pow(k, -1, p)
        e[k] = ([acc.get(x, 0) * inv_k % p for x in range(lo, upto + 1)], lo)
    # write e_k as a polynomial in j by peeling poles
    coeffs = {}
    for k in range(K + 1):
        ser, v = e[k]
        res = {v + t: x for t, x in enumerate(ser) if x}
        top = R(k)
        poly = [0] * (K + 1)
        for d in range(K, -1, -1):
            c = res.get(-d, 0)
            if c == 0:
                continue
            poly[d] = c
            # subtract c * j^d = c * q^-d * (q j)^d for exponents up to top
            for t in range(0, top + d + 1):
                x = pows[d][t]
                if x:
                    ex = t - d
                    res[ex] = (res.get(ex, 0) - c * x) % p
        if any(x % p for ex, x in res.items() if ex <= top):
            raise ArithmeticError(f"q-expansion of e_{k} is not a polynomial in j mod {p}")
        sign = -1 if k % 2 else 1
        for d, c in enumerate(poly):
            if c:
                coeffs[(K - k, d)] = sign * c % p
    return coeffs


def _oracle_primes(count, floor):
    ps, x = [], (1 << 62) - 1
    while len(ps) < count:
        if is_prime(x) and x > floor:
            ps.append(x)
        x -= 2
    return ps


def phi_qexp(l):
    """Phi_l over Z for l <= 13, by power sums mod word-size primes and CRT."""
    if l > ORACLE_MAX_L or l < 2 or not is_prime(l):
        raise ValueError("oracle supports primes l <= 13")
    bits = height_bound(l, "j") + 2
    n = int(bits // 61) + 2
    primes = _oracle_primes(n + 1, 2 * l + 2)
    residues = {p: _phi_mod_p_qexp(l, p) for p in primes}
    keys = sorted({(a, b) for r in residues.values() for (a, b) in r if a >= b})
    results = []
    for use in (primes[:n], primes):
        acc = CrtAccumulator(use)
        for p in use:
            acc.update(p, [residues[p].get(k, 0) for k in keys])
        results.append(acc.finalize())
    if results[0] != results[1]:
        raise ArithmeticError("oracle CRT is not stable under an extra prime")
    for p in primes:
        r = residues[p]
        if any(r.get((a, b), 0) != r.get((b, a), 0) for (a, b) in r):
            raise ArithmeticError("oracle result is not symmetric")
    return BivariatePoly(l, "j", dict(zip(keys, results[0])))


# -- numerical evaluation of gamma2 and Weber f ------------------------------

def weber_f_eval(tau, precision=None):
    """f(tau) = zeta48^-1 eta((tau+1)/2) / eta(tau)."""
    with mpmath.workprec(precision or mpmath.mp.prec):
        tau = mpmath.mpc(tau)
        eps = mpmath.mpf(2) ** (-mpmath.mp.prec - 16)
        # eta(z) = e^(pi i z / 12) E(e^(2 pi i z))
        z2 = (tau + 1) / 2
        num = mpmath.exp(mpmath.pi * 1j * z2 / 12) * _eta_series(mpmath.exp(2j * mpmath.pi * z2), eps)
        den = mpmath.exp(mpmath.pi * 1j * tau / 12) * _eta_series(mpmath.exp(2j * mpmath.pi * tau), eps)
        return mpmath.exp(-mpmath.pi * 1j / 24) * num / den


def gamma2_eval(tau, precision=None):
    """gamma2 = (f^24 - 16) / f^8, the cube root of j with integral expansion."""
    with mpmath.workprec(precision or mpmath.mp.prec):
        f = weber_f_eval(tau)
        f8 = f ** 8
        return (f8 ** 3 - 16) / f8


def _template(invariant, l):
    """Unknown monomials (a, b), a >= b, of the monic symmetric template."""
    K = l + 1
    out = []
    for a in range(K + 1):
        for b in range(a + 1):
            if (a, b) == (K, 0):
                continue
            if a == K and b > 0:
                continue  # degree l+1 only in the monic term X^(l+1) (and Y^(l+1))
            if support_allowed(invariant, l, a, b):
                out.append((a, b))
    return out


def _solve_samples(invariant, l, mons, prec, rng):
    func = gamma2_eval if invariant == "gamma2" else weber_f_eval
    K = l + 1
    nsamp = 2 * (l + 2) * (l + 1)
    with mpmath.workprec(prec):
        rows, rhs = [], []
        ybase = 1 / mpmath.sqrt(l)
        for _ in range(nsamp):
            x = mpmath.mpf(rng.uniform(-0.5, 0.5))
            y = ybase * mpmath.mpf(rng.uniform(0.9, 1.3))
            tau = mpmath.mpc(x, y)
            X, Y = func(tau), func(l * tau)
            pX = [mpmath.mpc(1)]
            pY = [mpmath.mpc(1)]
            for _ in range(K):
                pX.append(pX[-1] * X)
                pY.append(pY[-1] * Y)
            row = []
            for a, b in mons:
                v = pX[a] * pY[b]
                if a != b:
                    v += pX[b] * pY[a]
                row.append(v)
            r = -(pX[K] + pY[K])
            # real and imaginary parts give two real equations
            rows.append([v.real for v in row])
            rhs.append(r.real)
            rows.append([v.imag for v in row])
            rhs.append(r.imag)
        A = mpmath.matrix(rows)
        bvec = mpmath.matrix(rhs)
        # column scaling for conditioning
        scale = []
        for c in range(A.cols):
            s = max(abs(A[r, c]) for r in range(A.rows)) or mpmath.mpf(1)
            scale.append(s)
            for r in range(A.rows):
                A[r, c] /= s
        sol, res = mpmath.qr_solve(A, bvec)
        out, margin = {}, mpmath.mpf(0)
        for (a, b), s, x in zip(mons, scale, sol):
            v = x / s
            n = int(mpmath.nint(v))
            margin = max(margin, abs(v - n))
            if n:
                out[(a, b)] = n
        return out, float(margin)


def eval_interp_phi(invariant, l, precision=None, seed=0):
    """Phi_l^g for g in {gamma2, weber_f} by least squares on sampled values, then rounding."""
    if invariant not in ("gamma2", "weber_f"):
        raise ValueError("invariant must be gamma2 or weber_f")
    level = 3 if invariant == "gamma2" else 48
    if math.gcd(l, level) != 1 or l > ORACLE_MAX_L or not is_prime(l):
        raise ValueError("l must be a prime <= 13 coprime to the level")
    mons = _template(invariant, l)
    K = l + 1
    hb = height_bound(l, invariant)
    # monomials reach |g|^(2K); sampled |g| ~ exp(2 pi sqrt(l)/3) at worst
    growth = 2 * K * (2 * math.pi * math.sqrt(l) / 3 + 4) / math.log(2)
    prec = precision or int(4 * (hb + growth)) + 256
    rng = random.Random(seed)
    for _ in range(4):
        first, m1 = _solve_samples(invariant, l, mons, prec, rng)
        second, m2 = _solve_samples(invariant, l, mons, prec, rng)
        if m1 < 0.25 and m2 < 0.25 and first == second:
            first[(K, 0)] = 1
            return BivariatePoly(l, invariant, first)
        prec *= 2
    raise ArithmeticError(f"eval-interp oracle did not converge for {invariant}, l={l}")
