import random

import mpmath
import pytest

from conftest import oracle_j, oracle_other
from modularpoly.bivariate import support_allowed
from modularpoly.classpoly import eval_j
from modularpoly.ec import Curve
from modularpoly.modpoly import phi_from_gamma2
from modularpoly.oracle import (eval_interp_phi, gamma2_eval, j_qexp, j_qexp_eisenstein,
                                phi_qexp, weber_f_eval)

PHI2 = {(3, 0): 1, (2, 2): -1, (2, 1): 1488, (2, 0): -162000, (1, 1): 40773375,
        (1, 0): 8748000000, (0, 0): -157464000000000}


def test_j_coefficients():
    J = j_qexp(30)
    assert (J[-1], J[0], J[1], J[2]) == (1, 744, 196884, 21493760)
    assert J.coeffs == j_qexp_eisenstein(30).coeffs
    with pytest.raises(IndexError):
        J[40]


def test_phi2_classical():
    P = phi_qexp(2)
    assert dict(P.coeffs) == PHI2


def test_phi2_vanishes_on_two_isogenies_over_f1009():
    p, P, count = 1009, phi_qexp(2), 0
    rng = random.Random(0)
    while count < 50:
        A, B = rng.randrange(p), rng.randrange(p)
        if (4 * A ** 3 + 27 * B ** 2) % p == 0:
            continue
        E = Curve(A, B, p)
        for x in range(p):
            if (x ** 3 + A * x + B) % p == 0:
                # Velu for a 2-torsion kernel point (x, 0)
                t = (3 * x * x + A) % p
                E2 = Curve((A - 5 * t) % p, (B - 7 * x * t) % p, p)
                assert P.evaluate(E.j_invariant(), E2.j_invariant(), p) == 0
                count += 1


@pytest.mark.parametrize("l", [2, 3, 5, 7])
def test_structure_and_middle_coefficient(l):
    P = oracle_j(l)
    assert P.check_structure() == []
    assert P[(l, l)] == -1
    # Kronecker congruence
    for (a, b), c in P.coeffs.items():
        want = {(l + 1, 0): 1, (l, l): -1, (1, 1): -1}.get((a, b), 0)
        assert (c - want) % l == 0


def test_weber_eval_identities():
    rng = random.Random(5)
    with mpmath.workprec(200):
        for _ in range(20):
            tau = mpmath.mpc(rng.uniform(-0.5, 0.5), rng.uniform(0.9, 1.6))
            f24 = weber_f_eval(tau) ** 24
            j = eval_j(tau, 200)
            assert abs((f24 - 16) ** 3 / f24 - j) < 1e-40 * max(1, abs(j))
            assert abs(gamma2_eval(tau) ** 3 - j) < 1e-40 * max(1, abs(j))


def test_weber_real_on_imaginary_axis():
    with mpmath.workprec(200):
        for y in (1, 1.5, 2, 3):
            f = weber_f_eval(mpmath.mpc(0, y))
            assert abs(f.imag) < 1e-50 and f.real > 0


def test_gamma2_five_cubes_to_phi5():
    assert phi_from_gamma2(oracle_other("gamma2", 5)) == oracle_j(5)


@pytest.mark.parametrize("l", [5, 7])
def test_weber_support(l):
    P = oracle_other("weber_f", l)
    assert P[(l, l)] == -1
    assert P.check_structure() == []
    support = {ab for ab in P.coeffs}
    expect = {(a, b) for a in range(l + 2) for b in range(a + 1) if support_allowed("weber_f", l, a, b)}
    assert support <= expect
    if l == 5:
        assert dict(P.coeffs) == {(6, 0): 1, (5, 5): -1, (1, 1): 4}


def test_resampling_invariance():
    assert eval_interp_phi("gamma2", 5, seed=11) == oracle_other("gamma2", 5)
    assert eval_interp_phi("weber_f", 7, seed=3) == oracle_other("weber_f", 7)


def test_oracle_preconditions():
    with pytest.raises(ValueError):
        eval_interp_phi("gamma2", 3)
    with pytest.raises(ValueError):
        eval_interp_phi("weber_f", 17)
    with pytest.raises(ValueError):
        phi_qexp(17)
