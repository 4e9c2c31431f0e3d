import random

import pytest
from hypothesis import given, strategies as st

from modularpoly.ec import (INF, Curve, TwistMismatch, add, curve_from_j, neg, point_of_order_l,
                            scalar_mul, velu)
from modularpoly.oracle import phi_qexp


def _points(E):
    p = E.p
    return [(x, y) for x in range(p) for y in range(p) if (y * y - x ** 3 - E.A * x - E.B) % p == 0]


def test_curve_from_j():
    E = curve_from_j(1, 5)
    assert (E.A, E.B) == (4, 1)
    with pytest.raises(ValueError):
        curve_from_j(1728, 101)


@given(st.integers(2, 10006))
def test_j_round_trip(j):
    p = 10007
    if j in (0, 1728):
        return
    assert curve_from_j(j, p).j_invariant() == j


def test_group_law_on_small_curve():
    E = Curve(1, 1, 13)
    pts = _points(E) + [INF]
    n = len(pts)
    rng = random.Random(0)
    for _ in range(1000):
        P, Q, R = (rng.choice(pts) for _ in range(3))
        assert add(add(P, Q, E), R, E) == add(P, add(Q, R, E), E)
    for P in pts:
        assert add(P, INF, E) == P
        assert add(P, neg(P, E), E) is INF
        assert scalar_mul(n, P, E) is INF


def test_order_five_curve():
    # exhaustive scan for a curve over F_7 with exactly 5 points
    for A in range(7):
        for B in range(7):
            if (4 * A ** 3 + 27 * B ** 2) % 7 == 0:
                continue
            E = Curve(A, B, 7)
            if len(_points(E)) + 1 == 5:
                assert all(scalar_mul(5, P, E) is INF for P in _points(E))
                return
    pytest.fail("no curve of order 5 over F_7")


def test_velu_three_isogeny_over_f199():
    p, rng, phi3 = 199, random.Random(1), phi_qexp(3)
    found = 0
    for A in range(1, 40):
        for B in range(1, 40):
            try:
                E = Curve(A, B, p)
            except ValueError:
                continue
            N = len(_points(E)) + 1
            if N % 3:
                continue
            P = point_of_order_l(E, p + 1 - N, 3, rng)
            assert P is not INF and scalar_mul(3, P, E) is INF
            E2 = velu(E, P, 3)
            assert phi3.evaluate(E.j_invariant(), E2.j_invariant(), p) == 0
            found += 1
            if found >= 5:
                return
    assert found


def test_wrong_twist_raises():
    p, rng = 199, random.Random(2)
    for A in range(1, 30):
        E = Curve(A, 1, p)
        N = len(_points(E)) + 1
        t = p + 1 - N
        if N % 3 == 0 and (p + 1 + t) % 3:
            with pytest.raises(TwistMismatch):
                point_of_order_l(E.twist(), t, 3, rng)
            return
    pytest.fail("no suitable curve")
