import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from steinberg.reduction import (
    INF,
    convergents,
    det,
    manin_reduce,
    normalize_point,
    parse_point,
    rational_symbol,
    reduction_chain,
    symbol_matrix,
)


def test_examples():
    r = manin_reduce("inf", "3/7")
    assert r.path == [INF, (0, 1), (1, 2), (3, 7)]
    assert r.determinants == [1, -1, 1] and len(r.pairs) == 3
    r = manin_reduce("inf", "0")
    assert r.pairs == [(INF, (0, 1))] and r.determinants == [1]
    assert manin_reduce("5/3", "10/6").pairs == []


def test_parse_and_normalize():
    assert parse_point("∞") == INF and parse_point("-4/6") == (-2, 3)
    assert parse_point("3/-9") == (-1, 3)
    assert normalize_point(-1, 0) == INF
    with pytest.raises(ValueError):
        parse_point("0/0")


def test_convergents_of_integer():
    assert convergents((5, 1)) == [INF, (5, 1)]
    assert convergents((-1, 2)) == [INF, (-1, 1), (-1, 2)]


points = st.tuples(st.integers(-10 ** 6, 10 ** 6), st.integers(0, 10 ** 6)).filter(lambda t: t != (0, 0))


@settings(max_examples=200, deadline=None)
@given(points, points)
def test_unimodular_and_telescoping(a, b):
    r = manin_reduce(a, b)
    assert r.unimodular() and r.telescopes()
    assert len(r.path) <= len(convergents(r.start)) + len(convergents(r.end))


@settings(max_examples=30, deadline=None)
@given(st.tuples(st.integers(-50, 50), st.integers(1, 50)), st.tuples(st.integers(-50, 50), st.integers(1, 50)))
def test_symbols_are_integral_apartments(a, b):
    r = manin_reduce(a, b)
    for x, y in r.pairs:
        assert symbol_matrix(x, y).matrix.det() == 1
    assert reduction_chain(r) == rational_symbol(r.start, r.end)


def test_symbol_matrix_rejects_non_unimodular():
    with pytest.raises(ValueError):
        symbol_matrix((1, 2), (1, 4))
