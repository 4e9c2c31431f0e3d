"""Chinese remaindering of coefficient vectors: exact lift over Z, or explicit mod m.

Residue vectors are sequences of integers, one entry per coefficient."""

GUARD_BITS = 64


def _product_tree(xs):
    tree = [list(xs)]
    while len(tree[-1]) > 1:
        lv = tree[-1]
        tree.append([lv[i] * lv[i + 1] if i + 1 < len(lv) else lv[i] for i in range(0, len(lv), 2)])
    return tree


def _cofactors(primes):
    """M and the list of M / p_i, by descending a product tree."""
    tree = _product_tree(primes)
    M = tree[-1][0]
    down = [1]
    for depth in range(len(tree) - 2, -1, -1):
        lv = tree[depth]
        nxt = []
        for i, c in enumerate(down):
            left, right = 2 * i, 2 * i + 1
            if right < len(lv):
                nxt.append(c * lv[right])
                nxt.append(c * lv[left])
            else:
                nxt.append(c)
        down = nxt
    return M, down


class CrtAccumulator:
    """Streaming CRT state for one coefficient vector per prime."""

    def __init__(self, primes, mode="exact", m=None, ncoeffs=None):
        primes = [int(p) for p in primes]
        if len(set(primes)) != len(primes):
            raise ValueError("duplicate primes")
        if mode not in ("exact", "explicit"):
            raise ValueError("mode must be 'exact' or 'explicit'")
        if mode == "explicit" and (m is None or m < 1):
            raise ValueError("explicit mode needs a modulus m >= 1")
        self.mode, self.m = mode, m
        self.primes = primes
        self.M, self.Mi = _cofactors(primes)
        self.ai = [pow(Mi % p, -1, p) if p > 1 else 0 for Mi, p in zip(self.Mi, primes)]
        self.pos = {p: i for i, p in enumerate(primes)}
        self.done = set()
        self.ncoeffs = ncoeffs
        # fixed-point bits for s = sum c_i a_i / p_i
        self.frac_bits = GUARD_BITS + max(1, len(primes)).bit_length() + 3
        if mode == "exact":
            self.residues = {}
        else:
            self.Mi_mod_m = [Mi % m for Mi in self.Mi]
            self.C = None
            self.S = None

    def update(self, p, residues):
        p = int(p)
        if p not in self.pos:
            raise ValueError(f"{p} is not one of the CRT primes")
        if p in self.done:
            raise ValueError(f"prime {p} already updated")
        res = [int(x) % p for x in residues]
        if self.ncoeffs is None:
            self.ncoeffs = len(res)
        elif len(res) != self.ncoeffs:
            raise ValueError("coefficient count mismatch")
        self.done.add(p)
        i = self.pos[p]
        if self.mode == "exact":
            self.residues[p] = res
            return
        a, m, F = self.ai[i], self.m, self.frac_bits
        w = self.Mi_mod_m[i]
        if self.C is None:
            self.C = [0] * self.ncoeffs
            self.S = [0] * self.ncoeffs
        C, S = self.C, self.S
        for k, c in enumerate(res):
            if c:
                ca = c * a % p
                C[k] = (C[k] + ca * w) % m
                S[k] += (ca << F) // p  # truncation error < 1 unit per prime

    def finalize(self):
        if len(self.done) != len(self.primes):
            raise ValueError("not all primes have been updated")
        if self.mode == "exact":
            return self._finalize_exact()
        return self._finalize_explicit()

    def _finalize_exact(self):
        M, half = self.M, self.M // 2
        n = self.ncoeffs or 0
        acc = [0] * n
        for p, Mi, a in zip(self.primes, self.Mi, self.ai):
            res = self.residues[p]
            for k, c in enumerate(res):
                if c:
                    acc[k] += (c * a % p) * Mi
        out = []
        for x in acc:
            x %= M
            out.append(x - M if x > half else x)
        return out

    def _finalize_explicit(self):
        m, M, F = self.m, self.M, self.frac_bits
        n = self.ncoeffs or 0
        if self.C is None:
            return [0] * n
        one = 1 << F
        slack = 2 * len(self.primes) + 2  # accumulated truncation, in units of 2^-F
        Mm = M % m
        out = []
        for C, S in zip(self.C, self.S):
            r = (S + (one >> 1)) >> F  # r = round(s)
            # rounding is ambiguous only if s is within the error bound of a half-integer
            if abs(abs(S - r * one) - (one >> 1)) <= slack:
                raise ArithmeticError("explicit CRT: s too close to a half-integer")
            out.append((C - r * Mm) % m)
        return out


def precompute(primes, mode="exact", m=None):
    return CrtAccumulator([getattr(p, "p", p) for p in primes], mode, m)


def update(acc, p, residues):
    acc.update(p, residues)


def finalize(acc):
    return acc.finalize()


def crt_lift(residues_by_prime):
    """Symmetric lift of one integer from {p: residue}."""
    acc = CrtAccumulator(list(residues_by_prime))
    for p, r in residues_by_prime.items():
        acc.update(p, [r])
    return acc.finalize()[0]
