"""numba kernels for the per-prime hot loops.

All arithmetic is on int64 with a floating-point quotient estimate for
the modular product, which is exact for p < 2^50.
"""

import numpy as np
from numba import njit

MAX_KERNEL_P = 1 << 50

# walk status codes
OK = 0
BAD_START = 1
BAD_STEP = 2


@njit(cache=True, inline="always")
def mulmod(a, b, p, pinv):
    q = np.int64(np.float64(a) * np.float64(b) * pinv)
    r = a * b - q * p
    if r < 0:
        r += p
    elif r >= p:
        r -= p
    return r


@njit(cache=True)
def powmod(a, e, p, pinv):
    r = np.int64(1)
    a = a % p
    while e > 0:
        if e & 1:
            r = mulmod(r, a, p, pinv)
        a = mulmod(a, a, p, pinv)
        e >>= 1
    return r


@njit(cache=True)
def invmod(a, p):
    t, nt, r, nr = np.int64(0), np.int64(1), p, a % p
    while nr != 0:
        q = r // nr
        t, nt = nt, t - q * nt
        r, nr = nr, r - q * nr
    if t < 0:
        t += p
    return t


@njit(cache=True)
def sqrtmod(a, p, pinv):
    """Square root of a quadratic residue a (Tonelli-Shanks); -1 if none."""
    a = a % p
    if a == 0:
        return np.int64(0)
    if powmod(a, (p - 1) // 2, p, pinv) != 1:
        return np.int64(-1)
    if p % 4 == 3:
        return powmod(a, (p + 1) // 4, p, pinv)
    q = p - 1
    s = 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = np.int64(2)
    while powmod(z, (p - 1) // 2, p, pinv) != p - 1:
        z += 1
    m = s
    c = powmod(z, q, p, pinv)
    t = powmod(a, q, p, pinv)
    r = powmod(a, (q + 1) // 2, p, pinv)
    while t != 1:
        i = 0
        t2 = t
        while t2 != 1:
            t2 = mulmod(t2, t2, p, pinv)
            i += 1
        b = c
        for _ in range(m - i - 1):
            b = mulmod(b, b, p, pinv)
        m = i
        c = mulmod(b, b, p, pinv)
        t = mulmod(t, c, p, pinv)
        r = mulmod(r, b, p, pinv)
    return r


@njit(cache=True)
def _sqr_rem(r, d, m, p, pinv, buf):
    """r <- r^2 mod m for monic m of degree d; r has length d."""
    for i in range(2 * d - 1):
        buf[i] = 0
    for i in range(d):
        if r[i] != 0:
            for j in range(d):
                buf[i + j] = (buf[i + j] + mulmod(r[i], r[j], p, pinv)) % p
    for i in range(2 * d - 2, d - 1, -1):
        c = buf[i]
        if c != 0:
            for k in range(d):
                buf[i - d + k] = (buf[i - d + k] - mulmod(c, m[k], p, pinv)) % p
    for i in range(d):
        r[i] = buf[i]


@njit(cache=True)
def _shift_rem(r, d, m, p, pinv):
    """r <- X*r mod m."""
    top = r[d - 1]
    for i in range(d - 1, 0, -1):
        r[i] = r[i - 1]
    r[0] = 0
    if top != 0:
        for k in range(d):
            r[k] = (r[k] - mulmod(top, m[k], p, pinv)) % p


@njit(cache=True)
def _xpow_mod(e, m, d, p, pinv):
    """X^e mod monic m of degree d >= 1, as a length-d vector."""
    r = np.zeros(d, np.int64)
    buf = np.zeros(2 * d, np.int64)
    if d == 1:
        r[0] = powmod((-m[0]) % p, e, p, pinv)
        return r
    r[0] = 1
    nbits = 0
    t = e
    while t > 0:
        nbits += 1
        t >>= 1
    for b in range(nbits - 1, -1, -1):
        _sqr_rem(r, d, m, p, pinv, buf)
        if (e >> b) & 1:
            _shift_rem(r, d, m, p, pinv)
    return r


@njit(cache=True)
def _gcd(a, da, b, db, p, pinv):
    """Monic gcd of a (deg da) and b (deg db); returns (g, deg g). Inputs clobbered."""
    while db >= 0:
        inv = invmod(b[db], p)
        while da >= db:
            c = mulmod(a[da], inv, p, pinv)
            if c != 0:
                for k in range(db + 1):
                    a[da - db + k] = (a[da - db + k] - mulmod(c, b[k], p, pinv)) % p
            da -= 1
            while da >= 0 and a[da] == 0:
                da -= 1
        a, b = b, a
        da, db = db, da
    if da >= 0:
        inv = invmod(a[da], p)
        for k in range(da + 1):
            a[k] = mulmod(a[k], inv, p, pinv)
    return a, da


@njit(cache=True)
def split_roots(f, df, p, pinv, out):
    """Distinct F_p-roots of monic f if there are at most two; returns the count, or -1."""
    while df > 0 and f[df] == 0:
        df -= 1
    if df <= 0:
        return 0
    m = f[: df + 1].copy()
    inv = invmod(m[df], p)
    for k in range(df + 1):
        m[k] = mulmod(m[k], inv, p, pinv)
    if df == 1:
        out[0] = (p - m[0]) % p
        return 1
    xp = _xpow_mod(p, m, df, p, pinv)
    g = np.zeros(df + 1, np.int64)
    for k in range(df):
        g[k] = xp[k]
    g[1] = (g[1] - 1) % p
    dg = df - 1
    while dg >= 0 and g[dg] == 0:
        dg -= 1
    if dg < 0:
        # f divides X^p - X: splits completely
        h, dh = m.copy(), df
    else:
        h, dh = _gcd(m.copy(), df, g, dg, p, pinv)
    if dh == 0:
        return 0
    if dh == 1:
        out[0] = (p - h[0]) % p
        return 1
    if dh == 2:
        b = h[1]
        c = h[0]
        disc = (mulmod(b, b, p, pinv) - mulmod(4 % p, c, p, pinv)) % p
        s = sqrtmod(disc, p, pinv)
        if s < 0:
            return -1
        i2 = invmod(2, p)
        r1 = mulmod((p - b + s) % p, i2, p, pinv)
        r2 = mulmod((2 * p - b - s) % p, i2, p, pinv)
        if r1 == r2:
            out[0] = r1
            return 1
        if r1 < r2:
            out[0] = r1
            out[1] = r2
        else:
            out[0] = r2
            out[1] = r1
        return 2
    return -1


@njit(cache=True)
def eval_second(phi, y, p, pinv, out):
    """out[a] = sum_b phi[a, b] y^b (Phi(X, y) as a polynomial in X)."""
    n = phi.shape[0]
    for a in range(n):
        acc = np.int64(0)
        for b in range(n - 1, -1, -1):
            acc = (mulmod(acc, y, p, pinv) + phi[a, b]) % p
        out[a] = acc


@njit(cache=True)
def _divide_linear(f, df, r, p, pinv):
    """f <- f / (X - r) in place (exact division assumed); returns new degree."""
    carry = np.int64(0)
    for k in range(df, -1, -1):
        c = (f[k] + mulmod(carry, r, p, pinv)) % p
        f[k] = carry
        carry = c
    # carry is the remainder f(r)
    return df - 1, carry


@njit(cache=True)
def walk(phi, start, second, length, p, out):
    """Path j_0 = start, j_1, ... of isogenies given by phi (dense, mod p).

    With second < 0 the first step takes the smaller of the (at most two)
    roots.  Each later step divides out the previous node and requires a
    unique root.  Returns a status code."""
    pinv = 1.0 / p
    n = phi.shape[0]
    f = np.zeros(n, np.int64)
    rts = np.zeros(2, np.int64)
    out[0] = start
    if length <= 1:
        return OK
    if second >= 0:
        out[1] = second
    else:
        eval_second(phi, start, p, pinv, f)
        c = split_roots(f, n - 1, p, pinv, rts)
        if c < 1:
            return BAD_START
        out[1] = rts[0]
    for i in range(2, length):
        eval_second(phi, out[i - 1], p, pinv, f)
        d, rem = _divide_linear(f, n - 1, out[i - 2], p, pinv)
        if rem != 0:
            return BAD_STEP
        c = split_roots(f, d, p, pinv, rts)
        if c != 1:
            return BAD_STEP
        out[i] = rts[0]
    return OK


@njit(cache=True)
def step(phi, prev, cur, p):
    """One walk step; returns the next node or -1.  prev < 0 means path start."""
    pinv = 1.0 / p
    n = phi.shape[0]
    f = np.zeros(n, np.int64)
    rts = np.zeros(2, np.int64)
    eval_second(phi, cur, p, pinv, f)
    d = n - 1
    if prev >= 0:
        d, rem = _divide_linear(f, d, prev, p, pinv)
        if rem != 0:
            return np.int64(-1)
        if split_roots(f, d, p, pinv, rts) != 1:
            return np.int64(-1)
        return rts[0]
    c = split_roots(f, d, p, pinv, rts)
    if c < 1:
        return np.int64(-1)
    return rts[0]


@njit(cache=True)
def products_from_roots(rts, p):
    """Row i of the result holds the coefficients of prod_k (X - rts[i, k])."""
    pinv = 1.0 / p
    n, m = rts.shape
    out = np.zeros((n, m + 1), np.int64)
    for i in range(n):
        out[i, 0] = 1
        for k in range(m):
            r = (p - rts[i, k]) % p
            # multiply by (X + r) where r = -root
            for e in range(k + 1, 0, -1):
                out[i, e] = (out[i, e - 1] + mulmod(out[i, e], r, p, pinv)) % p
            out[i, 0] = mulmod(out[i, 0], r, p, pinv)
    return out


@njit(cache=True)
def interpolate_many(xs, vals, p):
    """Coefficients of the interpolants through (xs[i], vals[k, i]) for every row k."""
    pinv = 1.0 / p
    n = xs.shape[0]
    # M(Y) = prod (Y - x_i)
    M = np.zeros(n + 1, np.int64)
    M[0] = 1
    for i in range(n):
        r = (p - xs[i]) % p
        for e in range(i + 1, 0, -1):
            M[e] = (M[e - 1] + mulmod(M[e], r, p, pinv)) % p
        M[0] = mulmod(M[0], r, p, pinv)
    # L[i] = w_i * M / (Y - x_i)
    L = np.zeros((n, n), np.int64)
    for i in range(n):
        carry = np.int64(0)
        q = np.zeros(n + 1, np.int64)
        for k in range(n, -1, -1):
            c = (M[k] + mulmod(carry, xs[i], p, pinv)) % p
            q[k] = carry
            carry = c
        w = np.int64(1)
        for j in range(n):
            if j != i:
                w = mulmod(w, (xs[i] - xs[j]) % p, p, pinv)
        if w == 0:
            return L, False
        w = invmod(w, p)
        for k in range(n):
            L[i, k] = mulmod(q[k], w, p, pinv)
    K = vals.shape[0]
    out = np.zeros((K, n), np.int64)
    for k in range(K):
        for i in range(n):
            v = vals[k, i]
            if v != 0:
                for e in range(n):
                    out[k, e] = (out[k, e] + mulmod(v, L[i, e], p, pinv)) % p
    return out, True


@njit(cache=True)
def neighbours(phi, y, p, out):
    """Distinct roots of phi(X, y) in out (at most two); returns the count or -1."""
    pinv = 1.0 / p
    n = phi.shape[0]
    f = np.zeros(n, np.int64)
    eval_second(phi, y, p, pinv, f)
    return split_roots(f, n - 1, p, pinv, out)


@njit(cache=True)
def unique_neighbours(phi, ys, p, out):
    """out[i] = the unique root of phi(X, ys[i]); returns the first failing index or -1."""
    pinv = 1.0 / p
    n = phi.shape[0]
    f = np.zeros(n, np.int64)
    rts = np.zeros(2, np.int64)
    for i in range(ys.shape[0]):
        eval_second(phi, ys[i], p, pinv, f)
        if split_roots(f, n - 1, p, pinv, rts) != 1:
            return i
        out[i] = rts[0]
    return -1
