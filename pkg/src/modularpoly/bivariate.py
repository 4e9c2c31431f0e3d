"""Symmetric bivariate polynomials and the MODPOLY v1 text format."""

import numpy as np

INVARIANTS = ("j", "gamma2", "weber_f")
_FILE_NAMES = {"j": "j", "gamma2": "gamma2", "weber_f": "weber-f"}
_FROM_FILE = {v: k for k, v in _FILE_NAMES.items()}


def canonical_invariant(name):
    name = _FROM_FILE.get(name, name)
    if name not in INVARIANTS:
        raise ValueError(f"unknown invariant {name!r}")
    return name


def support_allowed(invariant, l, a, b):
    """Whether X^a Y^b may carry a nonzero coefficient."""
    if invariant == "gamma2":
        return (a + l * b - l - 1) % 3 == 0
    if invariant == "weber_f":
        return (l * a + b - l - 1) % 24 == 0
    return True


class BivariatePoly:
    """Phi(X, Y) = sum c[a, b] X^a Y^b with c[a, b] = c[b, a], stored for a >= b.

    modulus 0 means integer coefficients (signed); otherwise coefficients
    are residues in [0, modulus)."""

    def __init__(self, l, invariant, coeffs, modulus=0):
        self.l = l
        self.invariant = canonical_invariant(invariant)
        self.modulus = modulus
        self.coeffs = {}
        for (a, b), c in coeffs.items():
            if a < b:
                a, b = b, a
            if modulus:
                c %= modulus
            if c:
                self.coeffs[(a, b)] = c

    def __getitem__(self, ab):
        a, b = ab
        return self.coeffs.get((a, b) if a >= b else (b, a), 0)

    def __eq__(self, other):
        return (isinstance(other, BivariatePoly) and self.l == other.l
                and self.invariant == other.invariant and self.modulus == other.modulus
                and self.coeffs == other.coeffs)

    def __repr__(self):
        return f"BivariatePoly(l={self.l}, inv={self.invariant}, mod={self.modulus}, terms={len(self.coeffs)})"

    @property
    def degree(self):
        return max((a for a, _ in self.coeffs), default=-1)

    def full(self):
        """All terms including mirrored ones, as a dict."""
        out = {}
        for (a, b), c in self.coeffs.items():
            out[(a, b)] = c
            out[(b, a)] = c
        return out

    def reduce(self, m):
        if self.modulus and self.modulus % m:
            raise ValueError("cannot reduce to a modulus not dividing the current one")
        return BivariatePoly(self.l, self.invariant, self.coeffs, m)

    def evaluate(self, x, y, m=None):
        m = m or self.modulus
        s = 0
        for (a, b), c in self.coeffs.items():
            if m:
                t = c * pow(x, a, m) * pow(y, b, m)
                if a != b:
                    t += c * pow(x, b, m) * pow(y, a, m)
                s = (s + t) % m
            else:
                t = c * x ** a * y ** b
                if a != b:
                    t += c * x ** b * y ** a
                s += t
        return s

    def matrix_mod(self, p):
        """Dense (n+1) x (n+1) int64 coefficient matrix mod p, row a column b."""
        n = self.l + 1
        M = np.zeros((n + 1, n + 1), np.int64)
        for (a, b), c in self.coeffs.items():
            M[a, b] = M[b, a] = c % p
        return M

    def in_x(self, y, m):
        """Coefficients (low to high) of Phi(X, y) mod m."""
        n = self.degree
        out = [0] * (n + 1)
        for (a, b), c in self.coeffs.items():
            out[a] = (out[a] + c * pow(y, b, m)) % m
            if a != b:
                out[b] = (out[b] + c * pow(y, a, m)) % m
        return out

    def max_bits(self):
        return max((abs(c).bit_length() for c in self.coeffs.values()), default=0)

    # -- text format --------------------------------------------------------

    def to_text(self):
        head = f"MODPOLY v1 inv={_FILE_NAMES[self.invariant]} l={self.l} mod={self.modulus}\n"
        body = "".join(f"{a} {b} {c}\n" for (a, b), c in sorted(self.coeffs.items()))
        return head + body

    @classmethod
    def from_text(cls, text):
        lines = text.splitlines()
        if not lines:
            raise ValueError("empty polynomial file")
        head = lines[0].split()
        if head[:2] != ["MODPOLY", "v1"] or len(head) != 5:
            raise ValueError("bad MODPOLY header")
        fields = dict(kv.split("=", 1) for kv in head[2:])
        l, m = int(fields["l"]), int(fields["mod"])
        inv = canonical_invariant(fields["inv"])
        coeffs, last = {}, None
        for ln in lines[1:]:
            if not ln.strip():
                continue
            parts = ln.split()
            if len(parts) != 3:
                raise ValueError(f"malformed line {ln!r}")
            a, b, c = map(int, parts)
            if a < b or (last is not None and (a, b) <= last):
                raise ValueError("terms must satisfy a >= b and be sorted by (a, b)")
            if c == 0 or (m and not 0 <= c < m):
                raise ValueError(f"bad coefficient on line {ln!r}")
            last = (a, b)
            coeffs[(a, b)] = c
        return cls(l, inv, coeffs, m)

    def save(self, path):
        with open(path, "w") as fh:
            fh.write(self.to_text())

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_text(fh.read())

    # -- structural checks --------------------------------------------------

    def check_structure(self):
        """List of failed structural properties (empty when all pass)."""
        bad = []
        n = self.l + 1
        one = 1
        if self[(n, 0)] != one:
            bad.append("monic")
        if any(a > n for a, _ in self.coeffs):
            bad.append("degree")
        if any(not support_allowed(self.invariant, self.l, a, b) for a, b in self.coeffs):
            bad.append("sparsity")
        return bad


def file_name(invariant):
    """Name of the invariant in file headers and cache paths."""
    return _FILE_NAMES[canonical_invariant(invariant)]
