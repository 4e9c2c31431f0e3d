"""Height bounds and selection of CRT primes p with 4p = t^2 - v^2 l^2 D."""

import math
import random
from dataclasses import dataclass

from .arith import is_prime, omega_test

WEBER_GUARD_BITS = 64
LN2 = math.log(2)


@dataclass(frozen=True)
class PrimeSpec:
    p: int
    t: int
    v: int
    l: int
    D: int

    def check(self):
        p, t, v, l, D = self.p, self.t, self.v, self.l, self.D
        return (4 * p == t * t - v * v * l * l * D and t % l == 2 % l and v % l != 0
                and D % p != 0 and is_prime(p) and p % l == 1)


@dataclass(frozen=True)
class HeightBudget:
    l: int
    invariant: str
    bound_bits: float

    def needed_bits(self, explicit):
        return self.bound_bits + (2 if explicit else 1)


def height_bound(l, invariant="j"):
    """Bound on the logarithmic height of Phi_l^g, converted to bits."""
    if invariant == "j":
        nats = 6 * l * math.log(l) + 17 * l
    elif invariant == "gamma2":
        nats = 2 * l * math.log(l) + 8 * l
    elif invariant == "weber_f":
        nats = l * math.log(l) / 12 + l / 5
        if l <= 2400:
            g2 = (2 * l * math.log(l) + 8 * l) / 6
            return max(nats, g2) / LN2 + WEBER_GUARD_BITS
    else:
        raise ValueError(f"unknown invariant {invariant!r}")
    return nats / LN2


def prime_ok(p, invariant):
    """Extra congruence conditions on p required by the invariant."""
    if invariant == "gamma2":
        return p % 3 == 2
    if invariant == "weber_f":
        return p % 12 == 11
    return True


def _check_invariant(l, D, invariant):
    # both variants need p = 2 mod 3, impossible when 3 divides l or D
    if invariant != "j" and (l == 3 or D % 3 == 0):
        raise ValueError(f"{invariant} needs 3 to divide neither l nor D")


def default_v(D):
    return 2 if D % 8 == 1 else 1


def select_primes_heuristic(l, D, needed_bits, invariant="j", extra=0, v=None, t_cap=None):
    """Primes from t = 2 mod l ascending with fixed v, until their bits exceed needed_bits.

    `extra` further primes are appended after the budget is met."""
    _check_invariant(l, D, invariant)
    if v is None:
        v = default_v(D)
    if v % l == 0:
        raise ValueError("l must not divide v")
    t = 2
    if (t - v * D) % 2:
        t += l
    t_cap = t_cap or 10 ** 4 * l * max(64, int(needed_bits))
    out, bits, after, done = [], 0.0, 0, False
    while True:
        p4 = t * t - v * v * l * l * D
        p = p4 // 4
        if p4 % 4 == 0 and D % p and prime_ok(p, invariant) and is_prime(p):
            out.append(PrimeSpec(p, t, v, l, D))
            if done:
                after += 1
            else:
                bits += math.log2(p)
                done = bits > needed_bits
            if done and after >= extra:
                return out
        t += 2 * l
        if t > t_cap:
            raise ValueError(f"no prime set found for D={D} below t={t_cap}")


def select_primes_randomized(l, D, needed_bits, invariant="j", extra=0, rng=None,
                             avoid_v=(), max_rounds=64):
    """Randomized selection with (t, v) drawn uniformly from a growing box.

    The loop count per box is ceil(2 n log x).  v values divisible by a prime
    in `avoid_v` are skipped so that a single presentation stays valid."""
    _check_invariant(l, D, invariant)
    rng = rng or random.Random(0)
    bound_nats = needed_bits * LN2
    n = bound_nats / math.log(l * l * abs(D) / 4)
    n = max(n, 2.0)
    x = 4 * l * l * abs(D) * n * math.log(n)
    S, specs, b = set(), [], 0.0
    done, after = False, 0
    for _ in range(max_rounds):
        T = 2 * math.sqrt(x)
        V = 2 * math.sqrt(x) / (l * math.sqrt(abs(D)))
        amax = int((T - 2) // l)
        vmax = int(V)
        if vmax >= 1 and amax >= 0:
            for _ in range(math.ceil(2 * n * math.log(x))):
                v = rng.randint(1, vmax)
                t = rng.randint(0, amax) * l + 2
                if v % l == 0 or (t - v * D) % 2:
                    continue
                if any(v % q == 0 for q in avoid_v):
                    continue
                if omega_test(v):
                    continue
                p4 = t * t - v * v * l * l * D
                p = p4 // 4
                if p4 % 4 or p in S or D % p == 0 or not prime_ok(p, invariant) or not is_prime(p):
                    continue
                S.add(p)
                specs.append(PrimeSpec(p, t, v, l, D))
                if done:
                    after += 1
                else:
                    b += math.log(p)
                    done = b > bound_nats
                if done and after >= extra:
                    return specs
        x *= 2
    raise RuntimeError("randomized prime selection did not terminate")
