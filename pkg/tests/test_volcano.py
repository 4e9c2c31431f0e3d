import random

import numpy as np
import pytest

from conftest import oracle_j
from modularpoly.arith import kronecker
from modularpoly.classpoly import hilbert_class_poly
from modularpoly.ffpoly import FpPoly, roots
from modularpoly.modpoly import inspect_volcano
from modularpoly.quadform import polycyclic_presentation
from modularpoly.volcano import VolcanoError, cm_step, enumerate_torsor

D1011 = dict(l=7, D=-1011, p=12517)


def _root_count(P, j, p):
    return len(roots(FpPoly(P.in_x(j, p), p)))


@pytest.fixture(scope="module")
def d1011(store):
    return inspect_volcano(D1011["l"], D1011["p"], D1011["D"], store=store)


def test_d1011_counts(d1011):
    assert d1011["h_O"] == 12 and d1011["h_R"] == 72
    assert len(d1011["surface"]) == 12
    assert sorted(map(len, d1011["surface_cycles"])) == [3] * 4
    assert sorted(map(len, d1011["floor_groups"])) == [6] * 12
    floor = [j for g in d1011["floor_groups"] for j in g]
    assert len(set(floor)) == 72
    assert not set(floor) & set(d1011["surface"])
    assert d1011["h_R"] == d1011["h_O"] * (d1011["l"] - kronecker(d1011["d_K"], d1011["l"]))


def test_d1011_post_hoc_root_counts(d1011):
    l, p = d1011["l"], d1011["p"]
    P = oracle_j(l)
    for j in d1011["surface"]:
        assert _root_count(P, j, p) == l + 1
    for g in d1011["floor_groups"]:
        for j in g:
            assert _root_count(P, j, p) == 1


def test_d1011_cycles_and_parents_are_isogenous(d1011):
    l, p = d1011["l"], d1011["p"]
    P = oracle_j(l)
    for cyc in d1011["surface_cycles"]:
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            assert P.evaluate(a, b, p) == 0
    assert sorted(d1011["parents"]) == sorted(d1011["surface"])
    for par, g in zip(d1011["parents"], d1011["floor_groups"]):
        assert all(P.evaluate(par, j, p) == 0 for j in g)


def test_enumeration_independent_of_start(d1011, store):
    other = inspect_volcano(D1011["l"], D1011["p"], D1011["D"], seed=9, store=store)
    assert sorted(other["surface"]) == sorted(d1011["surface"])
    assert (sorted(j for g in other["floor_groups"] for j in g)
            == sorted(j for g in d1011["floor_groups"] for j in g))
    assert sorted(map(sorted, other["floor_groups"])) == sorted(map(sorted, d1011["floor_groups"]))


def test_other_d1011_primes(store):
    for p in (13441, 37507):
        info = inspect_volcano(7, p, -1011, store=store)
        assert sorted(map(len, info["floor_groups"])) == [6] * 12


def test_d23_three_elements(store):
    # 4 * 59 = 12^2 + 23 * 2^2; since 2 divides v the 2-volcano has a floor,
    # so the walk uses norm 3 and 2-adjacency is checked afterwards
    p = 59
    pres = polycyclic_presentation(-23, excluded={2})
    H = hilbert_class_poly(-23)
    start = roots(H.mod(p))[0]
    enum = enumerate_torsor(start, pres, {3: store.matrix("j", 3, p)}, p)
    assert sorted(enum.elements) == roots(H.mod(p))
    P2 = oracle_j(2)
    e = enum.elements
    assert all(P2.evaluate(e[i], e[(i + 1) % 3], p) == 0 for i in range(3))


def test_class_number_one():
    pres = polycyclic_presentation(-7)
    enum = enumerate_torsor(-3375 % 211, pres, {}, 211)
    assert enum.elements == [-3375 % 211]


def test_cm_step(store):
    p = 59
    M = store.matrix("j", 3, p)
    rts = roots(hilbert_class_poly(-23).mod(p))
    a = cm_step(None, rts[0], M, p)
    assert a in rts and a != rts[0]
    b = cm_step(rts[0], a, M, p)
    assert b in rts and b not in (a, rts[0])
    assert cm_step(a, b, M, p) == rts[0]


def test_cm_step_rejects_wrong_level(store):
    p = 12517
    M = store.matrix("j", 5, p)
    P5 = oracle_j(5)
    rng = random.Random(0)
    for _ in range(200):
        j = rng.randrange(2, p)
        if _root_count(P5, j, p) not in (1, 2):
            with pytest.raises(VolcanoError):
                cm_step(None, j, M, p)
            return
    pytest.fail("no node with an invalid neighbour count found")


def test_duplicate_detection(store):
    pres = polycyclic_presentation(-23, excluded={2})
    p = 59
    M = np.array(store.matrix("j", 3, p))
    P3 = oracle_j(3)
    bad = next(j for j in range(2, p) if _root_count(P3, j, p) != 2)
    with pytest.raises(VolcanoError):
        enumerate_torsor(bad, pres, {3: M}, p)
