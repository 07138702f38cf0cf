import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from isokit.arith import (
    DomainError,
    Residue,
    check_odd_prime,
    class_representative,
    factorize,
    is_prime,
    is_rational_square,
    legendre,
    nonresidue,
    padic_valuation,
    parse_rational,
    rational_mod,
    sqrt_mod_prime,
    square_class,
    square_class_of_product,
    squarefree_part,
)

nonzero = st.integers(-10**6, 10**6).filter(bool)
rationals = st.builds(Fraction, nonzero, st.integers(1, 10**4))


@pytest.mark.parametrize("x,p,v", [(Fraction(9, 5), 3, 2), (1, 7, 0), (Fraction(4, 27), 3, -3)])
def test_valuation_examples(x, p, v):
    assert padic_valuation(x, p) == v


@pytest.mark.parametrize("x,r", [(18, 2), (Fraction(-1, 4), -1), (Fraction(50, 27), 6)])
def test_square_class_examples(x, r):
    assert int(square_class(x)) == r


def test_factorize_examples():
    f = factorize(-12, 10**3)
    assert (f.sign, f.factors) == (-1, ((2, 2), (3, 1)))
    assert factorize(1, 10**3).factors == ()
    assert factorize(2021, 10**3).factors == ((43, 1), (47, 1))


def test_factorize_beyond_trial_bound():
    n = 1000003 * 1000033 * 7**2
    f = factorize(n, 100)
    assert f.value() == n
    assert all(is_prime(q) for q in f.primes())


def test_zero_rejected():
    for fn in (square_class, lambda x: padic_valuation(x, 3), factorize):
        with pytest.raises(DomainError):
            fn(0)


def test_p2_rejected():
    with pytest.raises(DomainError, match="p=2 unsupported"):
        check_odd_prime(2)


@given(nonzero)
def test_factorize_roundtrip(n):
    f = factorize(n)
    assert f.value() == n
    assert all(is_prime(q) for q in f.primes())


@given(rationals, rationals)
def test_square_class_multiplicative(x, y):
    assert square_class(x) * square_class(y) == square_class(x * y)


@given(rationals, st.integers(1, 300))
def test_square_class_ignores_squares(x, k):
    assert square_class(x * k * k) == square_class(x)
    r = int(square_class(x))
    assert squarefree_part(r) == r


@given(rationals)
def test_class_representative_same_class(x):
    assert square_class(class_representative(x)) == square_class(x)


@given(nonzero)
def test_is_rational_square(n):
    assert is_rational_square(Fraction(n * n, 49))
    assert is_rational_square(n) == (n > 0 and math.isqrt(n) ** 2 == n)


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 101])
def test_legendre_and_sqrt(p):
    squares = {x * x % p for x in range(1, p)}
    for a in range(1, p):
        assert legendre(a, p) == (1 if a in squares else -1)
        if a in squares:
            r = sqrt_mod_prime(a, p)
            assert r * r % p == a
    assert legendre(nonresidue(p), p) == -1


@given(rationals.filter(lambda x: x.denominator % 3), st.integers(1, 12))
def test_rational_mod(x, N):
    m = 3**N
    r = rational_mod(x, m)
    assert (r * x.denominator - x.numerator) % m == 0


def test_rational_mod_rejects_nonintegral():
    with pytest.raises(DomainError):
        rational_mod(Fraction(1, 3), 9)


def test_residue_field_ops():
    a, b = Residue(3, 7), Residue(5, 7)
    assert int(a * b) == 1 and int(a + b) == 1 and int(a - b) == 5
    assert a * a.inverse() == 1
    assert not Residue(9, 3, 2).is_unit()


def test_product_class_without_full_factoring():
    vals = [6, 10, 15]
    assert square_class_of_product(vals).is_trivial()


def test_parse_rational():
    assert parse_rational("-3/7") == Fraction(-3, 7)
    with pytest.raises((ValueError, TypeError)):
        parse_rational(0.5)
