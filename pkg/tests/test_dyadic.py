import itertools
from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from steinparity.dyadic import (
    INF,
    PlaneVector,
    cross,
    format_scalar,
    is_primitive,
    parse_scalar,
    val2,
)
from steinparity.errors import InvalidInput, NotTwoIntegral

nonzero = st.fractions(max_denominator=10**6).filter(lambda q: q != 0)
two_integral = st.builds(
    lambda n, d: Fraction(n, 2 * d + 1), st.integers(-10**9, 10**9), st.integers(0, 500)
)
vectors = st.builds(PlaneVector.of, two_integral, two_integral)


def naive_val2(q):
    """Count factors of 2 by repeated division."""
    q = Fraction(q)
    n, d, k = q.numerator, q.denominator, 0
    while n % 2 == 0:
        n //= 2
        k += 1
    while d % 2 == 0:
        d //= 2
        k -= 1
    return k


@pytest.mark.parametrize("q, expected", [(12, 2), (0, INF), (Fraction(3, 8), -3), (1, 0), (-6, 1)])
def test_val2_examples(q, expected):
    assert val2(q) == expected


@given(nonzero)
def test_val2_matches_naive_division(q):
    assert val2(q) == naive_val2(q)


@given(nonzero, nonzero)
def test_val2_multiplicative(a, b):
    assert val2(a * b) == val2(a) + val2(b)


@given(nonzero, nonzero)
def test_val2_ultrametric_equality(a, b):
    assume(val2(a) != val2(b))
    assert val2(a + b) == min(val2(a), val2(b))


@given(nonzero, nonzero)
def test_val2_ultrametric_inequality(a, b):
    assert val2(a + b) >= min(val2(a), val2(b))


def test_infinity_is_above_every_finite_valuation():
    assert INF > 10**100
    assert min(INF, 3) == 3


@pytest.mark.parametrize("u, v, expected", [
    ((1, 0), (0, 1), 1),
    ((2, 4), (1, 2), 0),
    ((3, 1), (1, 3), 8),
])
def test_cross_examples(u, v, expected):
    assert cross(PlaneVector.of(*u), PlaneVector.of(*v)) == expected


@given(vectors, vectors)
def test_cross_antisymmetric(u, v):
    assert cross(u, v) == -cross(v, u)


@given(vectors, vectors, vectors, two_integral)
def test_cross_bilinear(u, v, w, t):
    assert cross(u + w * t, v) == cross(u, v) + t * cross(w, v)


@pytest.mark.parametrize("v, expected", [((1, 0), True), ((2, 4), False), ((2, 3), True),
                                         ((0, 1), True), ((1, 1), True)])
def test_is_primitive_examples(v, expected):
    assert is_primitive(PlaneVector.of(*v)) is expected


def test_is_primitive_rejects_even_denominator():
    with pytest.raises(NotTwoIntegral):
        is_primitive(PlaneVector.of(Fraction(1, 2), 1))


def test_odd_denominators_are_units():
    assert is_primitive(PlaneVector.of(Fraction(1, 3), 2))
    assert not is_primitive(PlaneVector.of(Fraction(2, 3), Fraction(4, 5)))


def test_primitive_sum_exhaustive_mod_2():
    # primitivity only depends on residues mod 2, so 16 pairs cover everything
    residues = [PlaneVector(a, b) for a, b in itertools.product((0, 1), repeat=2)]
    for u, v in itertools.product(residues, repeat=2):
        if is_primitive(u + v):
            assert is_primitive(u) or is_primitive(v)


@given(vectors, vectors)
def test_primitive_sum_property(u, v):
    if is_primitive(u + v):
        assert is_primitive(u) or is_primitive(v)


@pytest.mark.parametrize("text, value", [("17", 17), ("-3", -3), ("3/8", Fraction(3, 8)),
                                         ("4/2", 2), ("10/-4", Fraction(-5, 2))])
def test_parse_scalar(text, value):
    assert parse_scalar(text) == value


def test_parse_scalar_normalises_integral_fractions():
    assert type(parse_scalar("6/3")) is int


@pytest.mark.parametrize("bad", ["", "1.5", "a/b", "1/0", "1/2/3"])
def test_parse_scalar_rejects(bad):
    with pytest.raises(InvalidInput):
        parse_scalar(bad)


@given(st.fractions())
def test_scalar_string_round_trip(q):
    assert parse_scalar(format_scalar(q)) == q


def test_big_integers_stay_exact():
    big = 2**200 * 3
    assert val2(big) == 200
    assert parse_scalar(format_scalar(big)) == big
