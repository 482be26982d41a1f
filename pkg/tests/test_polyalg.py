from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twistlab.coeffring import QQ, ZZ, Ring
from twistlab.errors import StructuralError
from twistlab.polyalg import (BiPoly, Poly, QuotPoly, TruncPoly, is_multiple_root, parse_poly,
                              poly_from_json, rational_root_candidates)

fracs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
coeff_lists = st.lists(fracs, min_size=0, max_size=5)


def P(cs, R=QQ):
    return Poly(R, list(cs))


@given(a=coeff_lists, b=coeff_lists, c=coeff_lists)
@settings(max_examples=80, deadline=None)
def test_poly_ring_laws(a, b, c):
    a, b, c = P(a), P(b), P(c)
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a - a).is_zero()


@given(a=coeff_lists, b=coeff_lists, x=fracs)
@settings(max_examples=80, deadline=None)
def test_evaluation_is_a_ring_map(a, b, x):
    a, b = P(a), P(b)
    assert (a * b).evaluate(x) == a.evaluate(x) * b.evaluate(x)
    assert (a + b).evaluate(x) == a.evaluate(x) + b.evaluate(x)
    assert a.compose(b).evaluate(x) == a.evaluate(b.evaluate(x))


@given(a=coeff_lists, b=coeff_lists)
@settings(max_examples=60, deadline=None)
def test_derivative_leibniz(a, b):
    a, b = P(a), P(b)
    assert (a * b).derivative() == a.derivative() * b + a * b.derivative()


@given(a=coeff_lists, c=fracs, x=fracs)
@settings(max_examples=60, deadline=None)
def test_shift_substitutes(a, c, x):
    a = P(a)
    assert a.shift(c).evaluate(x) == a.evaluate(x + c)


def test_parse_and_print():
    p = parse_poly(QQ, "3/2*Z^2 - Z + 1")
    assert p[2] == Fraction(3, 2) and p[1] == -1 and p[0] == 1
    assert parse_poly(QQ, "-Y") == Poly.monomial(QQ, 1, -1)
    assert Poly.from_json(QQ, p.to_json()) == p
    assert Poly.from_json(QQ, p.to_str("Y")) == p
    with pytest.raises(StructuralError):
        parse_poly(QQ, "")
    with pytest.raises(StructuralError):
        parse_poly(QQ, "X^2Y")


def test_mod_coefficients_reduce():
    R = Ring.mod(4)
    p = Poly(R, [2, 2])
    assert (p * p).is_zero()
    assert Poly(R, [5, -1]) == Poly(R, [1, 3])


def test_multiple_root():
    Q2 = parse_poly(QQ, "Z^2 - 2*Z + 1")
    assert is_multiple_root(Q2, 1)
    assert not is_multiple_root(parse_poly(QQ, "Z - 1"), 1)
    assert is_multiple_root(Poly.zero(QQ), 7)


@given(roots=st.lists(st.fractions(min_value=-4, max_value=4, max_denominator=3),
                      min_size=1, max_size=3))
@settings(max_examples=60, deadline=None)
def test_rational_roots_brute_force(roots):
    p = Poly.const(QQ, 1)
    for r in roots:
        p = p * Poly(QQ, [-r, 1])
    found = {v.raw for v in rational_root_candidates(p)}
    assert found == set(roots)


def test_rational_roots_over_integers_and_errors():
    p = Poly(ZZ, [-1, 0, 4])
    assert [v.raw for v in rational_root_candidates(p)] == []
    with pytest.raises(StructuralError):
        rational_root_candidates(Poly.zero(QQ))
    with pytest.raises(StructuralError):
        rational_root_candidates(Poly(Ring.mod(5), [1, 1]))


def test_quot_and_trunc():
    t = QuotPoly.monomial(QQ, 3, 1)
    assert (t * t * t).is_zero()
    assert (t * t) == QuotPoly.monomial(QQ, 3, 2)
    s = TruncPoly(QQ, 4, [1, 1])
    assert (s ** 3).c == (1, 3, 3, 1)
    assert (s ** 4).c == (1, 4, 6, 4)
    assert s.reduce(2).c == (1, 1)
    with pytest.raises(StructuralError):
        s + TruncPoly.zero(QQ, 3)
    with pytest.raises(StructuralError):
        s + QuotPoly.zero(QQ, 4)
    assert poly_from_json(QQ, s.to_json()) == s


@given(a=coeff_lists, b=coeff_lists, n=st.integers(1, 6))
@settings(max_examples=60, deadline=None)
def test_truncation_is_a_ring_map(a, b, n):
    a, b = P(a), P(b)
    ta, tb = TruncPoly.from_poly(a, n), TruncPoly.from_poly(b, n)
    assert ta * tb == TruncPoly.from_poly(a * b, n)
    assert ta + tb == TruncPoly.from_poly(a + b, n)


bi_cells = st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)), fracs, max_size=6)


@given(q=bi_cells, lam=fracs, xi=fracs)
@settings(max_examples=60, deadline=None)
def test_bipoly_shift_round_trip(q, lam, xi):
    q = BiPoly(QQ, q)
    assert q.shift(lam, xi).shift(-lam, -xi) == q
    assert q.transpose().transpose() == q
    assert BiPoly.from_json(QQ, q.to_json()) == q
    assert BiPoly.from_columns(QQ, q.columns()) == q
