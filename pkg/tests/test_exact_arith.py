from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from teichlevi import poly
from teichlevi.gaussian import (
    I,
    ONE,
    ZERO,
    GaussianRational,
    QuadraticField,
    format_gaussian,
    gaussian_sqrt,
    parse_gaussian,
)
from teichlevi.linalg import matmul, nullspace, rank, rref

fractions = st.fractions(min_value=-100, max_value=100, max_denominator=50)
gaussians = st.builds(GaussianRational, fractions, fractions)
nonzero = gaussians.filter(bool)


@pytest.mark.parametrize(
    "text, re, im",
    [
        ("3", 3, 0),
        ("-1/2", Fraction(-1, 2), 0),
        ("2i", 0, 2),
        ("i", 0, 1),
        ("-i", 0, -1),
        ("1/2-3/4i", Fraction(1, 2), Fraction(-3, 4)),
        ("-5+i", -5, 1),
        ("0.25", Fraction(1, 4), 0),
    ],
)
def test_parse(text, re, im):
    z = parse_gaussian(text)
    assert z == GaussianRational(re, im)


@given(gaussians)
def test_format_parse_round_trip(z):
    assert parse_gaussian(format_gaussian(z)) == z


@pytest.mark.parametrize("bad", ["", "abc", "1+2", "1//2"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        parse_gaussian(bad)


def test_float_complex_rejected():
    with pytest.raises(TypeError):
        GaussianRational.coerce(1 + 2j)


@given(gaussians, gaussians, gaussians)
def test_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert a - a == ZERO


@given(nonzero)
def test_inverse(a):
    assert a * a.inverse() == ONE
    assert complex(a) * complex(a.inverse()) == pytest.approx(1)


@given(gaussians)
def test_sqrt_of_square(a):
    r = gaussian_sqrt(a * a)
    assert r is not None and r * r == a * a
    assert r in (a, -a)


def test_sqrt_missing():
    assert gaussian_sqrt(GaussianRational(2)) is None
    assert gaussian_sqrt(GaussianRational(-4)) == 2 * I


@given(gaussians, gaussians)
def test_quadratic_field(a, b):
    k = QuadraticField(GaussianRational(3, 1))
    x = k.element(a, b)
    assert x * x.conjugate_root() == k.element(a * a - k.c * b * b, 0)
    if x:
        assert x * x.inverse() == k.element(ONE, 0)
    assert complex(k.gen()) ** 2 == pytest.approx(complex(k.c))


def test_quadratic_field_rejects_square():
    with pytest.raises(ValueError):
        QuadraticField(GaussianRational(-9))


polys = st.lists(gaussians, min_size=0, max_size=6).map(poly.trim)
nonconstant = st.builds(lambda low, lead: poly.trim(tuple(low) + (lead,)), st.lists(gaussians, min_size=1, max_size=5), nonzero)


@settings(max_examples=60)
@given(polys, nonconstant)
def test_divmod(p, q):
    quot, rem = poly.divmod_poly(p, q)
    assert poly.add(poly.mul(quot, q), rem) == p
    assert poly.degree(rem) < poly.degree(q)


@settings(max_examples=60)
@given(polys, gaussians, gaussians)
def test_shift_evaluate(p, x0, t):
    assert poly.evaluate(poly.shift(p, x0), t) == poly.evaluate(p, x0 + t)


@settings(max_examples=40)
@given(nonconstant, nonconstant)
def test_gcd_divides(p, q):
    d = poly.gcd(p, q)
    assert poly.exact_div(p, d) is not None and poly.exact_div(q, d) is not None


def test_order_at():
    p = poly.mul(poly.power((-ONE, ONE), 3), (I, ONE))
    assert poly.order_at(p, ONE) == 3
    assert poly.order_at(p, -I) == 1
    assert poly.order_at(p, ZERO) == 0


def test_series_sqrt():
    w = [ZERO, GaussianRational(2), GaussianRational(3)]
    s = poly.series_sqrt_one_plus(w, 6)
    sq = poly.truncated_mul(s, s, 6)
    assert sq == [ONE, GaussianRational(2), GaussianRational(3), ZERO, ZERO, ZERO]


mats = st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(gaussians, min_size=n + 1, max_size=n + 1), min_size=1, max_size=4)
)


@settings(max_examples=60)
@given(mats)
def test_rank_nullity(rows):
    ncols = len(rows[0])
    kernel = nullspace(rows, ncols)
    assert rank(rows, ncols) + len(kernel) == ncols
    for v in kernel:
        image = matmul(rows, [[x] for x in v])
        assert all(not r[0] for r in image)


def test_rref_pivots():
    rows = [[1, 2, 3], [2, 4, 6], [0, 0, 1]]
    red, piv = rref(rows, 3)
    assert piv == [0, 2]
    assert len(red) == 2
