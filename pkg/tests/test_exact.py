from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import exact_numbers
from eocount.exact import I, OMEGA, ONE, SQRT2, ExactComplex, ec_arith, omega_power, scaled_phase


def test_conjugate_product():
    assert ec_arith(ExactComplex(1, 0, 1), ExactComplex(1, 0, -1), "mul") == ExactComplex(2)


def test_radical_identity():
    assert ec_arith(SQRT2, SQRT2, "mul") == ExactComplex(2)


def test_inverse_of_one_plus_i():
    assert ec_arith(ONE, ExactComplex(1, 0, 1), "div") == ExactComplex(Fraction(1, 2), 0, Fraction(-1, 2))


def test_division_by_zero_is_an_error():
    with pytest.raises(ZeroDivisionError):
        ec_arith(ONE, ExactComplex(0), "div")


@pytest.mark.parametrize(
    "half, omega, expected",
    [(0, 2, I), (1, 1, ExactComplex(1, 0, 1)), (2, 0, ExactComplex(2))],
)
def test_scaled_phase_examples(half, omega, expected):
    assert scaled_phase(half, omega) == expected


def test_omega_has_order_eight():
    assert OMEGA ** 8 == ONE
    assert all(OMEGA ** k != ONE for k in range(1, 8))
    assert omega_power(-1) * OMEGA == ONE


@pytest.mark.parametrize("k", range(-20, 21))
def test_scaled_phase_inverse_pairs(k):
    assert scaled_phase(k, 0) * scaled_phase(-k, 0) == ONE


def test_against_floating_reference():
    x = ExactComplex(Fraction(1, 3), 2, -1, Fraction(5, 7))
    y = ExactComplex(-2, Fraction(1, 2), 3, -1)
    for op, ref in (("add", complex(x) + complex(y)), ("mul", complex(x) * complex(y)),
                    ("div", complex(x) / complex(y)), ("sub", complex(x) - complex(y))):
        assert abs(complex(ec_arith(x, y, op)) - ref) < 1e-9


@given(exact_numbers(), exact_numbers(), exact_numbers())
def test_ring_axioms(x, y, z):
    assert x + y == y + x
    assert x * y == y * x
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z


@given(exact_numbers(), exact_numbers(nonzero=True))
def test_division_inverts_multiplication(x, y):
    assert (x * y) / y == x
    assert y * y.inverse() == ONE


@given(exact_numbers())
def test_text_round_trip(x):
    assert ExactComplex.parse(str(x)) == x


@given(exact_numbers(), exact_numbers())
def test_equality_is_coordinatewise(x, y):
    assert (x == y) == (x.coords() == y.coords())
    if x == y:
        assert hash(x) == hash(y)


def test_integer_and_fraction_forms_parse():
    assert ExactComplex.parse("1/2 0 -3 2/4") == ExactComplex(Fraction(1, 2), 0, -3, Fraction(1, 2))
    for bad in ("1 2 3", "a 0 0 0", "1/0 0 0 0"):
        with pytest.raises(ValueError):
            ExactComplex.parse(bad)


@given(st.integers(-12, 12))
def test_i_powers(k):
    assert (I ** (k % 4)).power_of_i() == k % 4
