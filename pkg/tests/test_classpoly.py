import mpmath
import pytest

from modularpoly.arith import is_prime, kronecker
from modularpoly.classpoly import ClassPolynomial, eval_j, find_surface_root, hilbert_class_poly
from modularpoly.ffpoly import roots


def test_j_at_cm_points():
    with mpmath.workprec(200):
        s7 = eval_j((1 + mpmath.sqrt(-7)) / 2, 200)
        s3 = eval_j((1 + mpmath.sqrt(-3)) / 2, 200)
        s4 = eval_j(mpmath.sqrt(-1), 200)
    assert abs(s7 + 3375) < 1e-40
    assert abs(s3) < 1e-40
    assert abs(s4 - 1728) < 1e-40


def test_small_class_polynomials():
    assert hilbert_class_poly(-7).coefficients == (3375, 1)
    assert hilbert_class_poly(-8).coefficients == (-8000, 1)
    with pytest.raises(ValueError):
        hilbert_class_poly(-4)
    H = hilbert_class_poly(-23)
    assert H.coefficients == (12771880859375, -5151296875, 3491750, 1)


def test_h23_splits_over_split_primes():
    H = hilbert_class_poly(-23)
    # p = (t^2 + 23 v^2) / 4 is a norm, so H splits completely
    p = (2 ** 2 + 23 * 12 ** 2) // 4
    assert is_prime(p)
    assert len(roots(H.mod(p))) == 3
    assert find_surface_root(H, p) in roots(H.mod(p))
    assert find_surface_root(hilbert_class_poly(-7), p) == (-3375) % p


def test_h23_nonprincipal_prime_has_no_root():
    # 13 = 2*2^2 + 2*1 + 3*1^2 is represented by the non-principal form (2, 1, 3)
    H = hilbert_class_poly(-23)
    p = 13
    assert kronecker(-23, p) == 1
    with pytest.raises(ValueError):
        find_surface_root(H, p)


def test_text_round_trip_and_cache(tmp_path):
    H = hilbert_class_poly(-239, cache_dir=str(tmp_path))
    assert H.degree == 15
    assert ClassPolynomial.from_text(H.to_text()) == H
    assert hilbert_class_poly(-239, cache_dir=str(tmp_path)) == H
    assert (tmp_path / "classpoly" / "D239.txt").exists()
