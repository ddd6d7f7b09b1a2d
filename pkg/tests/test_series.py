from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from coulomb.series import GradedSeries, format_rational, parse_half


def test_parse_half():
    assert parse_half(10) == 20
    assert parse_half("7/2") == 7
    assert parse_half(Fraction(3, 2)) == 3
    with pytest.raises(ValueError):
        parse_half("1/3")


def test_format_rational():
    assert format_rational(Fraction(-3, 2)) == "-3/2"
    assert format_rational(4) == "4"


def test_geometric_matches_sympy():
    t = sympy.symbols("t")
    s = GradedSeries.geometric(1, 12) ** 2
    expect = sympy.series(1 / (1 - t) ** 2, t, 0, 13).removeO()
    assert s.integer_coefficients() == [int(expect.coeff(t, k)) for k in range(13)]


def test_truncation_drops_high_terms():
    s = GradedSeries.from_coefficients([1, 2, 3, 4], 2)
    assert s.coefficients() == [1, 2, 3]
    assert s.truncate(1).coefficients() == [1, 2]
    with pytest.raises(ValueError):
        s.truncate(5)


def test_fugacity_length_checked():
    with pytest.raises(ValueError):
        GradedSeries({(0, (1,)): 1}, 4, 2)


def test_unrefined_collapses_fugacities():
    s = GradedSeries({(0, (0,)): 1, (2, (1,)): 2, (2, (-1,)): 3}, 4, 1)
    assert s.unrefined().coefficients() == [1, 0, 5, 0, 0]


def test_render_lines():
    s = GradedSeries({(0, (0,)): 1, (3, (1,)): Fraction(1, 2)}, 4, 1)
    assert s.render() == "q^0 * b^(0): 1\nq^(3/2) * b^(1): 1/2"
    assert GradedSeries.from_coefficients([1, 0, 3]).render() == "q^0: 1\nq^1: 3"


series_strategy = st.dictionaries(
    st.tuples(st.integers(0, 8), st.tuples(st.integers(-3, 3))),
    st.fractions(min_value=-9, max_value=9, max_denominator=5),
    max_size=8,
).map(lambda t: GradedSeries(t, 8, 1))


@settings(max_examples=100, deadline=None)
@given(series_strategy)
def test_json_round_trip(s):
    text = s.to_json()
    back = GradedSeries.from_json(text)
    assert back == s
    assert back.to_json() == text


@settings(max_examples=60, deadline=None)
@given(series_strategy, series_strategy)
def test_product_commutes_and_mismatch(a, b):
    assert a * b == b * a
    assert a.first_mismatch(a) is None
    if a != b:
        assert a.first_mismatch(b) is not None
