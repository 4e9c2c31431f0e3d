import random

import pytest
from hypothesis import given, strategies as st

from modularpoly.arith import next_prime
from modularpoly.crt import crt_lift, finalize, precompute, update


def _primes(n, start, rng):
    out, p = [], start
    while len(out) < n:
        p = next_prime(p + rng.randint(1, 1000))
        out.append(p)
    return out


def test_small_examples():
    acc = precompute([5, 7])
    assert acc.M == 35 and acc.Mi == [7, 5] and acc.ai == [3, 3]
    update(acc, 5, [3])
    update(acc, 7, [4])
    assert finalize(acc) == [-17]
    acc = precompute([5, 7], "explicit", 10)
    update(acc, 7, [4])
    update(acc, 5, [3])
    assert finalize(acc) == [3]
    acc = precompute([13])
    assert acc.Mi == [1] and acc.ai == [1]


def test_errors():
    with pytest.raises(ValueError):
        precompute([5, 5])
    acc = precompute([5, 7])
    update(acc, 5, [1])
    with pytest.raises(ValueError):
        update(acc, 5, [1])
    with pytest.raises(ValueError):
        finalize(acc)


def test_cofactor_inverses():
    rng = random.Random(1)
    ps = _primes(200, 2 ** 40, rng)
    acc = precompute(ps)
    assert all(a * Mi % p == 1 for a, Mi, p in zip(acc.ai, acc.Mi, ps))


@given(st.lists(st.integers(-2 ** 200, 2 ** 200), min_size=1, max_size=20),
       st.integers(2, 2 ** 64), st.randoms(use_true_random=False))
def test_plant_and_recover(cs, m, rnd):
    ps = _primes(6, 2 ** 40, random.Random(len(cs)))
    ex, mm = precompute(ps), precompute(ps, "explicit", m)
    order = list(ps)
    rnd.shuffle(order)
    for p in order:
        update(ex, p, [c % p for c in cs])
        update(mm, p, [c % p for c in cs])
    assert finalize(ex) == cs
    assert finalize(mm) == [c % m for c in cs]


def test_explicit_matches_exact_in_bulk():
    rng = random.Random(7)
    ps = _primes(12, 2 ** 50, rng)
    cs = [rng.randint(-2 ** 500, 2 ** 500) for _ in range(10 ** 4)]
    m = rng.getrandbits(64) | 1
    ex, mm = precompute(ps), precompute(ps, "explicit", m)
    for p in ps:
        res = [c % p for c in cs]
        update(ex, p, res)
        update(mm, p, res)
    exact = finalize(ex)
    assert exact == cs
    assert finalize(mm) == [c % m for c in exact]


def test_zero_coefficients():
    ps = [101, 103, 107]
    for mode, m in (("exact", None), ("explicit", 97)):
        acc = precompute(ps, mode, m)
        for p in ps:
            update(acc, p, [0, 0])
        assert finalize(acc) == [0, 0]


def test_crt_lift():
    assert crt_lift({5: 3, 7: 4}) == -17
