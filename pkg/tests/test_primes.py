import math
import random

import pytest
from hypothesis import given, strategies as st

from modularpoly.arith import is_prime, omega_test
from modularpoly.modpoly import select_order
from modularpoly.primes import (PrimeSpec, height_bound, select_primes_heuristic,
                                select_primes_randomized)


def test_height_bounds():
    assert abs(height_bound(101) - 6511) <= 3
    assert abs(height_bound(211) - 14949) <= 3
    l = 1009
    assert height_bound(l, "gamma2") == pytest.approx((2 * l * math.log(l) + 8 * l) / math.log(2))


def test_weber_bound_is_guarded_below_range():
    for l in (5, 13, 101):
        assert height_bound(l, "weber_f") >= height_bound(l, "gamma2") / 6


@given(st.sampled_from([3, 5, 7, 11, 13, 31]), st.sampled_from([-23, -71, -239, -1011, -5103]),
       st.sampled_from(["j", "gamma2", "weber_f"]))
def test_heuristic_primes_are_valid(l, D, inv):
    if (l == 3 or D % 3 == 0) and inv != "j":
        with pytest.raises(ValueError):
            select_primes_heuristic(l, D, 300, inv)
        return
    specs = select_primes_heuristic(l, D, 300, inv, extra=2)
    assert all(s.check() for s in specs)
    assert len({s.p for s in specs}) == len(specs)
    ps = [s.p for s in specs]
    assert ps == sorted(ps)
    assert sum(math.log2(p) for p in ps[:-2]) > 300
    if inv == "gamma2":
        assert all(p % 3 == 2 for p in ps)
    if inv == "weber_f":
        assert all(p % 12 == 11 for p in ps)


def test_heuristic_matches_exhaustive_scan():
    l = 11
    D = select_order(l, "j").D
    v = 2 if D % 8 == 1 else 1
    scan = []
    for t in range(2, 10 ** 6, l):
        if (t * t - v * v * l * l * D) % 4:
            continue
        p = (t * t - v * v * l * l * D) // 4
        if is_prime(p) and D % p:
            scan.append(p)
        if len(scan) == 3:
            break
    got = [s.p for s in select_primes_heuristic(l, D, 1000)]
    assert got[:3] == scan


def test_spec_check_rejects_bad_certificates():
    good = select_primes_heuristic(5, -23, 10)[0]
    assert good.check()
    assert not PrimeSpec(good.p + 2, good.t, good.v, good.l, good.D).check()
    assert not PrimeSpec(good.p, good.t, 5, good.l, good.D).check()


@pytest.mark.parametrize("l,D", [(5, -23), (7, -71)])
def test_randomized_outputs_lie_in_the_box(l, D):
    specs = select_primes_randomized(l, D, 200, rng=random.Random(3))
    assert len({s.p for s in specs}) == len(specs)
    assert sum(math.log2(s.p) for s in specs) > 200
    for s in specs:
        assert s.check()
        assert s.t % l == 2 and (s.t - s.v * D) % 2 == 0
        assert not omega_test(s.v)
    # the final box bounds every draw
    tmax = max(s.t for s in specs)
    vmax = max(s.v for s in specs)
    valid = set()
    for v in range(1, vmax + 1):
        for t in range(2, tmax + 1, l):
            p4 = t * t - v * v * l * l * D
            if v % l and p4 % 4 == 0 and is_prime(p4 // 4) and not omega_test(v):
                valid.add((t, v, p4 // 4))
    assert {(s.t, s.v, s.p) for s in specs} <= valid


def test_randomized_respects_avoided_norms():
    specs = select_primes_randomized(5, -1011, 300, rng=random.Random(0), avoid_v=(3, 7))
    assert all(s.v % 3 and s.v % 7 for s in specs)
