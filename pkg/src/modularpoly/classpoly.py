"""Hilbert class polynomials by complex-analytic evaluation of j at CM points."""

import os
from dataclasses import dataclass

import mpmath

from .ffpoly import FpPoly, PrimeField, any_root
from .quadform import reduced_forms


def _eta_series(q, eps):
    """sum_n (-1)^n q^(n(3n-1)/2) over all integers n (pentagonal numbers)."""
    s = mpmath.mpc(1)
    q3 = q * q * q
    t1 = q        # q^(n(3n-1)/2)
    qn = q        # q^n
    step = q3 * q  # q^(3n+1), ratio to the next t1
    sign = -1
    aq = abs(q)
    while True:
        t = t1 * (1 + qn)  # exponents n(3n-1)/2 and n(3n+1)/2
        s += t if sign > 0 else -t
        if abs(t1) < eps or aq == 0:
            return s
        t1 *= step
        step *= q3
        qn *= q
        sign = -sign


def weber_f24(tau):
    """f(tau)^24 = q^(-1/2) * (E(-q^(1/2)) / E(q))^24 with E the pentagonal series."""
    tau = mpmath.mpc(tau)
    if tau.imag <= 0:
        raise ValueError("tau must lie in the upper half plane")
    eps = mpmath.mpf(2) ** (-mpmath.mp.prec - 16)
    qh = mpmath.exp(mpmath.pi * 1j * tau)  # q^(1/2)
    q = qh * qh
    ratio = _eta_series(-qh, eps) / _eta_series(q, eps)
    return ratio ** 24 / qh


def eval_j(tau, prec=None):
    """j(tau) via (f^24 - 16)^3 / f^24."""
    with mpmath.workprec(prec or mpmath.mp.prec):
        if prec is not None and prec < 64:
            raise ValueError("precision below 64 bits")
        x = weber_f24(tau)
        return (x - 16) ** 3 / x


@dataclass(frozen=True)
class ClassPolynomial:
    D: int
    coefficients: tuple  # low to high, monic

    @property
    def degree(self):
        return len(self.coefficients) - 1

    def mod(self, p):
        return FpPoly(list(self.coefficients), p)

    def to_text(self):
        return f"CLASSPOLY D={self.D} h={self.degree}\n" + "".join(f"{c}\n" for c in self.coefficients)

    @classmethod
    def from_text(cls, text):
        lines = text.split()
        if lines[0] != "CLASSPOLY":
            raise ValueError("not a class polynomial file")
        D = int(lines[1].split("=")[1])
        h = int(lines[2].split("=")[1])
        coeffs = tuple(int(x) for x in lines[3:])
        if len(coeffs) != h + 1 or coeffs[-1] != 1:
            raise ValueError("class polynomial file is inconsistent")
        return cls(D, coeffs)


def precision_estimate(D, forms=None):
    forms = forms or reduced_forms(D)
    s = sum(mpmath.mpf(1) / f.a for f in forms)
    return int(mpmath.pi * mpmath.sqrt(-D) * s / mpmath.log(2)) + 64


def _mul_real(a, b):
    out = [mpmath.mpf(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _try_build(D, forms, prec):
    with mpmath.workprec(prec):
        sq = mpmath.sqrt(mpmath.mpf(-D))
        seen = set(forms)
        poly = [mpmath.mpf(1)]
        for a, b, c in forms:
            if b < 0 and (a, -b, c) in seen:
                continue  # conjugate of (a, -b, c), handled there
            tau = mpmath.mpc(-b, sq) / (2 * a)
            j = eval_j(tau)
            if b > 0 and (a, -b, c) in seen:
                poly = _mul_real(poly, [abs(j) ** 2, -2 * j.real, mpmath.mpf(1)])
            else:
                poly = _mul_real(poly, [-j.real, mpmath.mpf(1)])
        coeffs, margin = [], mpmath.mpf(0)
        for x in poly:
            r = int(mpmath.nint(x))
            margin = max(margin, abs(x - r))
            coeffs.append(r)
        return coeffs, float(margin)


def hilbert_class_poly(D, cache_dir=None):
    """H_D in Z[X], from the product over reduced forms of (X - j(tau_f))."""
    if D >= -4 or D % 4 not in (0, 1):
        raise ValueError("need a discriminant D < -4")
    path = None
    if cache_dir:
        path = os.path.join(cache_dir, "classpoly", f"D{-D}.txt")
        if os.path.exists(path):
            with open(path) as fh:
                H = ClassPolynomial.from_text(fh.read())
            if H.D == D and H.degree == len(reduced_forms(D)):
                return H
    forms = reduced_forms(D)
    prec = precision_estimate(D, forms)
    for _ in range(6):
        coeffs, margin = _try_build(D, forms, prec)
        if margin < 0.25 and coeffs[-1] == 1:
            break
        prec *= 2
    else:
        raise ArithmeticError(f"rounding margin not reached for H_{D}")
    H = ClassPolynomial(D, tuple(coeffs))
    if path:
        os.makedirs(os.path.dirname(path), exist_ok=True)
        with open(path, "w") as fh:
            fh.write(H.to_text())
    return H


def find_surface_root(H, p, seed=0):
    """A root of H mod p."""
    if isinstance(p, PrimeField):
        p = p.p
    f = H.mod(p)
    if f.degree == 1:
        return (-f.c[0]) % p
    r = any_root(f, seed)
    if r is None:
        raise ValueError(f"H_{H.D} has no root mod {p}")
    return r
