from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from vertexalg.scalar import I, ONE, ZERO, Scalar, as_scalar

rationals = st.builds(
    Fraction, st.integers(min_value=-50, max_value=50), st.integers(min_value=1, max_value=12)
)
scalars = st.builds(Scalar, rationals, rationals)


def test_abs2_identity():
    s = Scalar(Fraction(1, 2), 1)
    assert s * s.conj() == Scalar(Fraction(5, 4))


def test_additive_identity():
    s = Scalar(Fraction(3, 7), Fraction(-2, 5))
    assert s + ZERO == s


def test_division_by_conjugate():
    # (1+i)/(1-i) = i, by multiplying through with the conjugate.
    assert (ONE + I) / (ONE - I) == I


def test_division_by_zero_raises():
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO


def test_conj_basics():
    assert I.conj() == -I
    assert Scalar(Fraction(3, 7)).conj() == Scalar(Fraction(3, 7))
    s = (ONE + I) * (ONE + I)
    assert s.conj() == (ONE - I) * (ONE - I)


@given(scalars, scalars, scalars)
def test_field_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert (a * b).conj() == a.conj() * b.conj()


@given(scalars)
def test_conj_involution(a):
    assert a.conj().conj() == a
    assert a.abs2() >= 0
    assert (a.abs2() == 0) == a.is_zero()


@given(scalars, scalars)
def test_division_inverts_multiplication(a, b):
    if not b.is_zero():
        assert (a * b) / b == a


@given(scalars)
def test_text_round_trip(a):
    assert Scalar.parse(str(a)) == a


def test_parse_unreduced_and_forms():
    assert Scalar.parse("2/4") == Scalar(Fraction(1, 2))
    assert Scalar.parse("-6/4+2/6*i") == Scalar(Fraction(-3, 2), Fraction(1, 3))
    assert Scalar.parse("i") == I
    assert Scalar.parse("-i") == -I
    assert Scalar.parse("0") == ZERO
    assert Scalar.parse("3*i") == Scalar(0, 3)
    assert as_scalar("1/2-3/4*i") == Scalar(Fraction(1, 2), Fraction(-3, 4))


def test_str_is_canonical():
    assert str(Scalar(Fraction(1, 2), Fraction(-3, 4))) == "1/2-3/4*i"
    assert str(Scalar(0, 1)) == "i"
    assert str(Scalar(5)) == "5"
    assert str(ZERO) == "0"
