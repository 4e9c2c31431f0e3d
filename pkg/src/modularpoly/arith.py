"""Integer helpers: primality, factoring, Kronecker symbols, square roots."""

import math
import random
from dataclasses import dataclass, field

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _mr_round(n, d, s, a):
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n):
    """Miller-Rabin; deterministic below 2^64 (first 12 prime bases)."""
    if n < 2:
        return False
    for q in _SMALL_PRIMES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if n < 1 << 64:
        return all(_mr_round(n, d, s, a) for a in _SMALL_PRIMES)
    # 64 random rounds bound the error by 4^-64 = 2^-128
    rng = random.Random(n)
    return all(_mr_round(n, d, s, rng.randrange(2, n - 1)) for _ in range(64))


def next_prime(n):
    """Smallest prime >= n."""
    n = max(n, 2)
    while not is_prime(n):
        n += 1
    return n


def primes_up_to(n):
    """List of primes <= n (simple sieve)."""
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i::i] = bytearray(len(range(i * i, n + 1, i)))
    return [i for i in range(n + 1) if sieve[i]]


@dataclass(frozen=True)
class FactoredInteger:
    value: int
    factors: tuple = field(default=())  # ((prime, exponent), ...) ascending

    @property
    def omega(self):
        return len(self.factors)

    def as_dict(self):
        return dict(self.factors)


def _pollard_brent(n, rng):
    if n % 2 == 0:
        return 2
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


_TRIAL_PRIMES = None


def factor(n):
    """Factor n >= 1: trial division up to 2^20, then Pollard rho."""
    global _TRIAL_PRIMES
    if n < 1:
        raise ValueError("factor expects n >= 1")
    if _TRIAL_PRIMES is None:
        _TRIAL_PRIMES = primes_up_to(1 << 20)
    value, out = n, {}
    for q in _TRIAL_PRIMES:
        if q * q > n:
            break
        if n % q == 0:
            e = 0
            while n % q == 0:
                n //= q
                e += 1
            out[q] = e
    stack = [n] if n > 1 else []
    rng = random.Random(value)
    while stack:
        m = stack.pop()
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        r = math.isqrt(m)
        if r * r == m:
            stack += [r, r]
            continue
        d = _pollard_brent(m, rng)
        stack += [d, m // d]
    return FactoredInteger(value, tuple(sorted(out.items())))


def omega_test(v):
    """True (reject) iff v has more than (ln(ln v + 3))^2 distinct prime factors."""
    if v < 1:
        raise ValueError("v must be positive")
    if v == 1:
        return False
    return factor(v).omega > math.log(math.log(v) + 3) ** 2


def jacobi(a, n):
    if n <= 0 or n % 2 == 0:
        raise ValueError("Jacobi symbol needs odd positive n")
    a %= n
    s = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                s = -s
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            s = -s
        a %= n
    return s if n == 1 else 0


def kronecker(D, n):
    """Kronecker symbol (D|n)."""
    if n == 0:
        return 1 if abs(D) == 1 else 0
    s = 1
    if n < 0:
        n = -n
        if D < 0:
            s = -s
    e = (n & -n).bit_length() - 1
    n >>= e
    if e:
        if D % 2 == 0:
            return 0
        if e % 2 and D % 8 in (3, 5):
            s = -s
    if n == 1:
        return s
    return s * jacobi(D, n)


def sqrt_mod(a, p):
    """A square root of a mod odd prime p (Tonelli-Shanks); None if a is a non-residue."""
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def smallest_nonresidue(p):
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    return z


def fundamental_discriminant(D):
    """Split a discriminant D as u^2 * d_K; returns (d_K, u)."""
    if D % 4 not in (0, 1):
        raise ValueError(f"{D} is not a discriminant")
    u = 1
    for q, e in factor(abs(D)).factors:
        u *= q ** (e // 2)
    d = D // (u * u)
    if d % 4 != 1:
        # d squarefree part is 2 or 3 mod 4; a factor 2 of u belongs to d_K
        d *= 4
        u //= 2
    return d, u


def is_discriminant(D):
    return D % 4 in (0, 1)
