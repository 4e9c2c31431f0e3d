"""End-to-end acceptance criteria, one reported PASS/FAIL line each."""

import json
import random
import time

import pytest

from conftest import oracle_j
from modularpoly.arith import is_prime, kronecker
from modularpoly.bivariate import BivariatePoly, support_allowed
from modularpoly.cli import main
from modularpoly.ffpoly import FpPoly, roots
from modularpoly.modpoly import (compute_detailed, inspect_volcano, phi_from_gamma2,
                                 random_isogenous_pair, weber_root_pairs)
from modularpoly.primes import height_bound

COMPUTED = {}
RUNS = []


@pytest.fixture
def report(capsys):
    """Call with (number, title, ok, detail); prints one line and asserts."""
    def emit(n, title, ok, detail=""):
        with capsys.disabled():
            print(f"\n[criterion {n}] {'PASS' if ok else 'FAIL'}: {title} {detail}".rstrip())
        assert ok, f"criterion {n} failed: {detail}"
    return emit


def _compute(l, inv="j", m=None, store=None, **kw):
    key = (l, inv, m, tuple(sorted(kw.items())))
    if key not in COMPUTED:
        r = compute_detailed(l, inv, m, store=store, **kw)
        RUNS.append(r)
        COMPUTED[key] = r
    return COMPUTED[key]


def _kronecker_ok(P):
    l = P.l
    want = {(l + 1, 0): 1, (l, l): -1, (1, 1): -1}
    return all((P[k] - want.get(k, 0)) % l == 0 for k in set(P.coeffs) | set(want))


def _root_count(P, j, p):
    return len(roots(FpPoly(P.in_x(j, p), p)))


def _J(x, p):
    x24 = pow(x, 24, p)
    return pow(x24 - 16, 3, p) * pow(x24, -1, p) % p


def test_criterion_1_oracle_equivalence(store, report):
    t0 = time.time()
    bad = [l for l in (3, 5, 7, 11, 13) if _compute(l, store=store).poly != oracle_j(l)]
    dt = time.time() - t0
    report(1, "compute equals the q-expansion oracle for l in {3,5,7,11,13}",
           not bad and dt < 60, f"(mismatch={bad}, {dt:.1f}s)")


def test_criterion_2_l101_size(store, report):
    t0 = time.time()
    r = _compute(101, store=store)
    dt = time.time() - t0
    bits, bound = r.poly.max_bits(), height_bound(101)
    ok = bits == 5751 and abs(bound - 6511) <= 3 and abs(r.bound_bits - 6511) <= 3 and dt < 600
    report(2, "l=101 largest coefficient 5751 bits, height bound 6511 +- 3",
           ok, f"(max_bits={bits}, bound={bound:.1f}, D={r.order.D}, h={r.order.h_O}, "
               f"primes={len(r.primes)}, {dt:.0f}s)")


def test_criterion_3_kronecker_congruence(store, report):
    ls = [l for l in range(3, 62) if is_prime(l)] + [101]
    bad = [l for l in ls if not _kronecker_ok(_compute(l, store=store).poly)]
    report(3, "Phi_l = (X^l - Y)(X - Y^l) mod l for every prime l <= 61 and l = 101",
           not bad, f"({len(ls)} values of l, failures={bad})")


def test_criterion_4_explicit_crt(store, report):
    m = 2 ** 256 - 189
    exact = _compute(31, store=store).poly
    modm = _compute(31, m=m, store=store).poly
    report(4, "l=31 mod 2^256-189 equals the integer result reduced",
           modm == exact.reduce(m), f"({len(modm.coeffs)} coefficients)")


def test_criterion_5_gamma2(store, report):
    bad = []
    for l in (5, 7, 11, 13):
        G = _compute(l, "gamma2", store=store).poly
        if not all(support_allowed("gamma2", l, a, b) for a, b in G.coeffs):
            bad.append((l, "sparsity"))
        if phi_from_gamma2(G) != _compute(l, store=store).poly:
            bad.append((l, "reconstruction"))
    report(5, "gamma2 sparsity and reconstruction of Phi_l for l in {5,7,11,13}",
           not bad, f"(failures={bad})")


def test_criterion_6_weber(store, report):
    bad, pairs = [], 0
    rng = random.Random(2026)
    for l in (5, 7, 11, 13):
        F = _compute(l, "weber_f", store=store).poly
        if not all(support_allowed("weber_f", l, a, b) for a, b in F.coeffs):
            bad.append((l, "sparsity"))
        if F[(l, l)] != -1:
            bad.append((l, "X^lY^l"))
        phi = _compute(l, store=store).poly
        for p, x, y in weber_root_pairs(F, rng, 100):
            assert p % 12 == 11 and F.evaluate(x, y, p) == 0
            pairs += 1
            if phi.evaluate(_J(x, p), _J(y, p), p):
                bad.append((l, "vanishing", p))
    report(6, "Weber sparsity, X^lY^l = -1 and Phi_l(J(x), J(y)) = 0 on root pairs",
           not bad and pairs == 400, f"(pairs={pairs}, failures={bad[:5]})")


def test_criterion_7_volcano_structure(store, cache_dir, report, capsys):
    bad, checked = [], 0
    for l, nprimes in ((7, 6), (13, 6), (31, 3)):
        r = _compute(l, store=store)
        phi = r.poly
        for spec in r.primes[:nprimes]:
            info = inspect_volcano(l, spec.p, spec.D, store=store)
            floor = [j for g in info["floor_groups"] for j in g]
            kr = kronecker(info["d_K"], l)
            if len(info["surface"]) != info["h_O"] or len(floor) != info["h_R"]:
                bad.append((l, spec.p, "counts"))
            if info["h_R"] != info["h_O"] * (l - kr):
                bad.append((l, spec.p, "index"))
            if any(_root_count(phi, j, spec.p) != l + 1 for j in info["surface"]):
                bad.append((l, spec.p, "surface roots"))
            if any(_root_count(phi, j, spec.p) != 1 for j in floor):
                bad.append((l, spec.p, "floor roots"))
            checked += 1
    code = main(["inspect", "--l", "7", "--p", "12517", "--D", "-1011", "--cache", cache_dir])
    info = json.loads(capsys.readouterr().out)
    c = info["counts"]
    d1011 = (code == 0 and info["h_O"] == 12 and info["h_R"] == 72 and c["floor"] == 72
            and c["surface_cycle_lengths"] == [3] * 4 and c["sibling_group_sizes"] == [6]
            and len(info["floor_groups"]) == 12)
    report(7, "volcano counts and post hoc root counts per prime, D=-1011 instance via inspect",
           not bad and d1011, f"(primes={checked}, failures={bad[:5]}, d1011={d1011})")


def test_criterion_8_isogeny_vanishing(store, report):
    rng = random.Random(8)
    bad = []
    for l in (3, 5, 7):
        phi = _compute(l, store=store).poly
        for _ in range(100):
            p, j1, j2 = random_isogenous_pair(l, rng)
            if phi.evaluate(j1, j2, p):
                bad.append((l, p, j1, j2))
    report(8, "Phi_l(j(E), j(E')) = 0 on 100 Velu pairs for each l in {3,5,7}",
           not bad, f"(failures={bad[:3]})")


def test_criterion_9_las_vegas(tmp_path, cache_dir, report, capsys):
    outs = []
    for seed in ("1", "2"):
        path = tmp_path / f"phi31_{seed}.txt"
        code = main(["compute", "--l", "31", "--inv", "j", "--seed", seed, "--threads", "1",
                     "--cache", cache_dir, "--out", str(path)])
        outs.append((code, path.read_text() if code == 0 else None))
    capsys.readouterr()
    same = outs[0][0] == outs[1][0] == 0 and outs[0][1] == outs[1][1]
    randomized = compute_detailed(31, seed=3, selector="randomized", cache_dir=cache_dir)
    RUNS.append(randomized)
    same = same and BivariatePoly.from_text(outs[0][1]) == randomized.poly
    # every compute run above re-derives the result with the guard primes
    # included and raises if anything changes; reaching here means none did
    report(9, "seed-independent output for l=31; guard primes never changed a result",
           same, f"(guarded runs={len(RUNS) + 2})")
