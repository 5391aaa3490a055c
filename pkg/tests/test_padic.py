import warnings
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hpdegrees.errors import NotLocalError, ParseError
from hpdegrees.services.padic import (
    INFINITY,
    LocalInt,
    ResidueClass,
    d_p_class,
    in_D_p,
    legendre_factorial_val,
    parse_rational,
    val_p,
)

PRIMES = st.sampled_from([2, 3, 5, 7, 11, 13])
NONZERO = st.integers(min_value=-10**9, max_value=10**9).filter(bool)


@pytest.mark.parametrize(
    "text, expected",
    [("6/4", Fraction(3, 2)), (" -5 ", Fraction(-5)), ("0", Fraction(0)), ("+7/21", Fraction(1, 3))],
)
def test_parse_rational_normalizes(text, expected):
    assert parse_rational(text) == expected


@pytest.mark.parametrize("text", ["1/0", "abc", "1.5", "", "2/-3", "1//2"])
def test_parse_rational_rejects(text):
    with pytest.raises(ParseError):
        parse_rational(text)


def test_local_int_rejects_denominator_divisible_by_p():
    with pytest.raises(NotLocalError):
        LocalInt.of("3/5", 5)
    assert LocalInt.of("3/5", 2).value == Fraction(3, 5)


def test_local_int_requires_prime():
    with pytest.raises(ParseError):
        LocalInt.of(3, 4)


def test_val_p_examples():
    assert val_p(LocalInt.of("12/5", 2)) == 2
    assert val_p(LocalInt.of(0, 3)) == INFINITY
    assert val_p(LocalInt.of(-81, 3)) == 4
    assert val_p(LocalInt.of(7, 5)) == 0


@given(NONZERO, NONZERO, PRIMES)
def test_val_p_is_multiplicative(a, b, p):
    assert val_p(LocalInt.of(a * b, p)) == val_p(LocalInt.of(a, p)) + val_p(LocalInt.of(b, p))


def test_legendre_factorial_val():
    assert legendre_factorial_val(10, 2) == 8
    assert legendre_factorial_val(25, 5) == 6
    assert legendre_factorial_val(0, 3) == 0
    with pytest.raises(ValueError):
        legendre_factorial_val(-1, 2)


@pytest.mark.parametrize(
    "k, p, expected",
    [
        (0, 2, True),
        (17, 2, True),
        (9, 2, True),
        (4, 2, False),
        (3, 2, False),
        (7, 3, True),
        (2, 3, False),
        (18, 3, False),
        (9, 3, True),
        (3, 3, False),
        ("1/7", 3, True),
        ("2/7", 3, False),
        (-7, 2, True),
        (0, 5, True),
        (2, 7, True),
        (5, 5, False),
        (12, 2, False),
    ],
)
def test_in_D_p(k, p, expected):
    assert in_D_p(LocalInt.of(k, p)) is expected


@given(st.integers(min_value=-10**6, max_value=10**6))
def test_odd_squares_lie_in_D_2(a):
    assert in_D_p(LocalInt.of((2 * a + 1) ** 2, 2))


@given(NONZERO, st.sampled_from([3, 5, 7, 11, 13]))
def test_squares_lie_in_D_p_for_odd_p(a, p):
    assert in_D_p(LocalInt.of(a * a, p))


@given(NONZERO, st.sampled_from([3, 5, 7, 11, 13]), st.sampled_from([0, 1, 2]))
def test_even_power_multiples_of_unit_squares_lie_in_D_p(u, p, a):
    if u % p == 0:
        u += 1
    assert in_D_p(LocalInt.of(u * u * p ** (2 * a), p))


def test_d_2_excludes_even_squares():
    assert not in_D_p(LocalInt.of(4, 2))
    assert not in_D_p(LocalInt.of(9 * 16, 2))


@given(NONZERO, PRIMES, st.integers(min_value=-10**6, max_value=10**6))
def test_in_D_p_depends_only_on_leading_digits(k, p, t):
    v = val_p(LocalInt.of(k, p))
    shifted = k + p ** (v + 3) * t
    assert in_D_p(LocalInt.of(shifted, p)) == in_D_p(LocalInt.of(k, p))


def test_residue_class_valuation_is_capped():
    assert ResidueClass(3, 2, 0).valuation() == 2
    assert ResidueClass(2, 3, 4).valuation() == 2
    with pytest.raises(ValueError):
        ResidueClass(2, 3, 8)


def test_d_p_class():
    assert ResidueClass(2, 3, 1).in_d_p()
    assert not ResidueClass(2, 2, 1).in_d_p()
    assert d_p_class(4, 3, 2)
    assert not d_p_class(3, 3, 2)
    assert not d_p_class(0, 3, 2)
    assert not d_p_class(2, 3, 2)


def test_quadratic_residue_checks_raise_no_deprecation_warnings():
    with warnings.catch_warnings():
        warnings.simplefilter("error", DeprecationWarning)
        assert in_D_p(LocalInt.of(2, 7))
        assert d_p_class(4, 3, 2)
