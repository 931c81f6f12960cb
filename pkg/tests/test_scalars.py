from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from quadconics import scalars
from quadconics.errors import (
    BackendMismatch,
    DivisionByZero,
    NegativeRadicand,
    NonSquareRational,
)

rationals = st.fractions(min_value=-10**6, max_value=10**6, max_denominator=10**4)


def test_exact_arithmetic():
    assert scalars.add(Fraction(1, 3), Fraction(1, 6)) == Fraction(1, 2)
    assert scalars.mul(Fraction(7, 3), Fraction(1)) == Fraction(7, 3)
    assert Fraction(2, 4) == Fraction(1, 2)  # canonical reduced form


def test_backend_mismatch():
    with pytest.raises(BackendMismatch):
        scalars.add(Fraction(1, 2), 0.5)
    with pytest.raises(BackendMismatch):
        scalars.coerce_tuple((Fraction(1), 2.0, 3))


def test_division_guards():
    with pytest.raises(DivisionByZero):
        scalars.div(Fraction(1), Fraction(0))
    with pytest.raises(DivisionByZero):
        scalars.div(1.0, 0.0)


def test_sqrt_exact():
    assert scalars.sqrt(Fraction(9, 4)) == Fraction(3, 2)
    with pytest.raises(NonSquareRational):
        scalars.sqrt(Fraction(2))
    with pytest.raises(NegativeRadicand):
        scalars.sqrt(Fraction(-1))
    assert abs(scalars.sqrt(2.0) - 1.4142135623730951) < 1e-15


def test_is_zero():
    tol = scalars.Tolerance(epsilon=1e-9)
    assert scalars.is_zero(Fraction(0), tol)
    assert not scalars.is_zero(Fraction(1, 10**30), tol)
    assert scalars.is_zero(1e-12, tol)
    assert not scalars.is_zero(1e-6, tol)


def test_json_roundtrip():
    assert scalars.scalar_to_json(Fraction(-3, 7)) == "-3/7"
    assert scalars.scalar_from_json("-3/7", scalars.EXACT) == Fraction(-3, 7)
    assert scalars.scalar_from_json(0.25, scalars.FLOAT) == 0.25
    assert scalars.scalar_from_json("1/4", scalars.FLOAT) == 0.25


@given(rationals, rationals)
def test_addition_roundtrip(a, b):
    assert scalars.sub(scalars.add(a, b), b) == a


@given(rationals)
def test_sqrt_of_square_roundtrips(a):
    sq = a * a
    assert scalars.sqrt(sq) == abs(a)
