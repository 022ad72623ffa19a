from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twistsha.arith import (
    REAL_PLACE,
    Place,
    factor,
    fundamental_discriminant,
    hilbert_symbol,
    is_squarefree,
    kronecker_symbol,
    legendre,
    omega0,
    padic_valuation,
    prime_divisors,
    rational_sqrt,
    squarefree_part,
    to_rational,
    unit_part,
)

SMALL_PRIMES = [2, 3, 5, 7]
SQUAREFREE = [n for n in range(-30, 31) if n not in (0,) and is_squarefree(n)]


def brute_hilbert(a: int, b: int, p: int) -> int:
    """(a, b)_p by searching primitive solutions of a x^2 + b y^2 = z^2 mod p^N.

    For squarefree a, b a primitive solution mod p^3 (odd p) or 2^5 lifts by
    Hensel's lemma, so solvability there decides the symbol.
    """
    N = 5 if p == 2 else 3
    M = p**N
    xs = np.arange(M, dtype=np.int64)
    X, Y = np.meshgrid(xs, xs)
    vals = (a * X * X + b * Y * Y) % M
    prim = (X % p != 0) | (Y % p != 0)
    squares = np.zeros(M, dtype=bool)
    squares[(xs * xs) % M] = True
    return 1 if np.any(squares[vals[prim]]) else -1


def test_valuation_basics():
    assert padic_valuation(48, 2) == 4
    assert padic_valuation(Fraction(9, 8), 2) == -3
    assert padic_valuation(Fraction(9, 8), 3) == 2
    assert padic_valuation(0, 5) == float("inf")
    assert unit_part(Fraction(-40, 3), 2) == Fraction(-5, 3)


def test_to_rational_rejects_floats():
    assert to_rational("3/4") == Fraction(3, 4)
    with pytest.raises(TypeError):
        to_rational(0.5)


def test_factor_and_omega0():
    assert factor(-360).value() == -360
    assert prime_divisors(210) == [2, 3, 5, 7]
    assert omega0(2 * 3 * 17) == 2
    assert omega0(-2) == 0


def test_squarefree_helpers():
    assert squarefree_part(-72) == -2
    assert is_squarefree(-30) and not is_squarefree(12)
    assert fundamental_discriminant(-1) == -4
    assert fundamental_discriminant(5) == 5
    assert fundamental_discriminant(-21) == -84
    assert rational_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert rational_sqrt(Fraction(2)) is None


def test_place():
    assert str(REAL_PLACE) == "inf" and REAL_PLACE.is_infinite
    with pytest.raises(ValueError):
        Place(4)


def test_kronecker_matches_legendre_for_odd_primes():
    for p in (3, 5, 7, 11, 13):
        for a in range(-20, 20):
            assert kronecker_symbol(a, p) == legendre(a, p)


def test_kronecker_at_two():
    # (d/2) = 1 for d = 1 mod 8, -1 for d = 5 mod 8
    assert kronecker_symbol(17, 2) == 1
    assert kronecker_symbol(5, 2) == -1
    assert kronecker_symbol(-4, 2) == 0


@pytest.mark.parametrize("p", SMALL_PRIMES)
def test_hilbert_matches_brute_force(p):
    for a, b in product([n for n in SQUAREFREE if abs(n) <= 15], repeat=2):
        assert hilbert_symbol(a, b, p) == brute_hilbert(a, b, p), (a, b, p)


def test_hilbert_real_place():
    assert hilbert_symbol(-1, -1, None) == -1
    assert hilbert_symbol(-1, 3, REAL_PLACE) == 1


def test_hilbert_known_values():
    assert hilbert_symbol(-1, -1, 2) == -1
    assert hilbert_symbol(2, 5, 5) == -1
    assert hilbert_symbol(3, 5, 3) == -1


nonzero = st.integers(-200, 200).filter(lambda n: n != 0)
place = st.sampled_from([None, 2, 3, 5, 7, 11, 13])


@given(nonzero, nonzero, place)
def test_hilbert_symmetric(a, b, v):
    assert hilbert_symbol(a, b, v) == hilbert_symbol(b, a, v)


@given(nonzero, nonzero, nonzero, place)
def test_hilbert_bimultiplicative(a, b, c, v):
    assert hilbert_symbol(a * b, c, v) == hilbert_symbol(a, c, v) * hilbert_symbol(b, c, v)


@given(nonzero, place)
def test_hilbert_a_minus_a(a, v):
    assert hilbert_symbol(a, -a, v) == 1


@given(nonzero, nonzero, st.integers(1, 20))
def test_hilbert_ignores_squares(a, b, k):
    for v in (None, 2, 3, 5):
        assert hilbert_symbol(a * k * k, b, v) == hilbert_symbol(a, b, v)


@settings(max_examples=200)
@given(nonzero, nonzero)
def test_hilbert_product_formula(a, b):
    places = [None] + sorted(set(prime_divisors(2 * a * b)))
    prod = 1
    for v in places:
        prod *= hilbert_symbol(a, b, v)
    assert prod == 1


@given(st.fractions(min_value=-100, max_value=100).filter(lambda x: x != 0), st.sampled_from([2, 3, 5]))
def test_valuation_of_product(x, p):
    y = Fraction(12, 35)
    assert padic_valuation(x * y, p) == padic_valuation(x, p) + padic_valuation(y, p)
