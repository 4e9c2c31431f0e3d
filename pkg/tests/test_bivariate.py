import pytest
from hypothesis import given, strategies as st

from conftest import oracle_j
from modularpoly.bivariate import BivariatePoly, canonical_invariant, support_allowed


def test_phi3_text_round_trip():
    P = oracle_j(3)
    text = P.to_text()
    assert text.splitlines()[0] == "MODPOLY v1 inv=j l=3 mod=0"
    Q = BivariatePoly.from_text(text)
    assert Q == P and Q.to_text() == text
    assert P[(0, 4)] == P[(4, 0)] == 1


@given(st.dictionaries(st.tuples(st.integers(0, 6), st.integers(0, 6)).filter(lambda ab: ab[0] >= ab[1]),
                       st.integers(-10 ** 30, 10 ** 30).filter(bool), max_size=20))
def test_round_trip_random(coeffs):
    P = BivariatePoly(5, "j", coeffs)
    assert BivariatePoly.from_text(P.to_text()) == P


@pytest.mark.parametrize("text", [
    "",
    "MODPOLY v2 inv=j l=3 mod=0\n",
    "MODPOLY v1 inv=j l=3 mod=0\n1 2 5\n",
    "MODPOLY v1 inv=j l=3 mod=0\n2 1 5\n1 1 5\n",
    "MODPOLY v1 inv=j l=3 mod=0\n2 1 0\n",
    "MODPOLY v1 inv=j l=3 mod=7\n2 1 9\n",
    "MODPOLY v1 inv=j l=3 mod=0\n2 1\n",
    "MODPOLY v1 inv=nope l=3 mod=0\n",
])
def test_malformed_files_rejected(text):
    with pytest.raises((ValueError, KeyError)):
        BivariatePoly.from_text(text)


def test_invariant_names():
    assert canonical_invariant("weber-f") == "weber_f"
    assert canonical_invariant("gamma2") == "gamma2"


def test_support_rules():
    assert support_allowed("gamma2", 5, 6, 0)
    assert not support_allowed("gamma2", 5, 5, 0)
    assert support_allowed("weber_f", 5, 5, 5)
    assert not support_allowed("weber_f", 5, 4, 4)


def test_evaluate_is_symmetric():
    P = BivariatePoly(3, "j", {(4, 0): 1, (2, 1): 7, (1, 1): -3})
    assert P.evaluate(2, 5) == P.evaluate(5, 2) == 2 ** 4 + 5 ** 4 + 7 * (4 * 5 + 25 * 2) - 30
