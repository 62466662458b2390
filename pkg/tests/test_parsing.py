from fractions import Fraction

import pytest

from algebra.parsing import parse
from algebra.poly import Polynomial
from errors import DivisionByVariable, FractionalYExponent, NegativeExponent, ParseError

x, y = Polynomial.x(), Polynomial.y()


@pytest.mark.parametrize("text, expected", [
    ("x^2 + y^2", x ** 2 + y ** 2),
    ("(y - x^2)^2", y ** 2 - 2 * x ** 2 * y + x ** 4),
    ("(y + x^2)^3 + x^7", (y + x ** 2) ** 3 + x ** 7),
    ("-x*y", -(x * y)),
    ("x^2^3", x ** 8),
    ("3/4*y^3", Fraction(3, 4) * y ** 3),
    ("x^4 / 2", Fraction(1, 2) * x ** 4),
    ("y^2 + x^4/2", y ** 2 + Fraction(1, 2) * x ** 4),
    ("x^3/2", Fraction(1, 2) * x ** 3),
    ("x^2/2*y", Fraction(1, 2) * x ** 2 * y),
    ("-3/4", Polynomial.constant(Fraction(-3, 4))),
    ("x^(3/2)", Polynomial.monomial(1, Fraction(3, 2), 0)),
    ("  y ^ 2 ", y ** 2),
])
def test_parse(text, expected):
    assert parse(text) == expected


@pytest.mark.parametrize("text, error, position", [
    ("x^-1", NegativeExponent, 2),
    ("y^(1/2)", FractionalYExponent, 2),
    ("x / y", DivisionByVariable, 2),
    ("2x", ParseError, 1),
    ("x + ", ParseError, 4),
    ("(x + y", ParseError, 6),
    ("x + z", ParseError, 4),
    ("x ^ y", ParseError, 4),
])
def test_parse_errors_carry_positions(text, error, position):
    with pytest.raises(error) as info:
        parse(text)
    assert info.value.position == position
    assert info.value.to_dict()["position"] == position


def test_error_codes():
    with pytest.raises(ParseError) as info:
        parse("")
    assert info.value.code == "SYNTAX_ERROR"
    with pytest.raises(NegativeExponent) as info:
        parse("y^-2")
    assert info.value.code == "NEGATIVE_EXPONENT"


def test_fractional_power_of_a_sum_rejected():
    with pytest.raises(ParseError):
        parse("(x + x^2)^(1/2)")


def test_fractional_exponent_needs_parentheses():
    assert parse("x^(3/2)*y") == Polynomial.monomial(1, Fraction(3, 2), 1)
    assert parse("x^3/2*y") == Fraction(1, 2) * x ** 3 * y
    assert parse("x^(3/2)") != parse("x^3/2")
