from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twistlab.coeffring import QQ, ZZ, Ring, RingValue, binomial
from twistlab.errors import RingMismatch, StructuralError

RINGS = [QQ, ZZ, Ring.mod(4), Ring.mod(8), Ring.mod(12), Ring.mod(7)]
values = st.integers(-50, 50)


@pytest.mark.parametrize("R", RINGS, ids=repr)
@given(a=values, b=values, c=values)
@settings(max_examples=60, deadline=None)
def test_ring_axioms(R, a, b, c):
    a, b, c = R.normalize(a), R.normalize(b), R.normalize(c)
    assert R.add(a, b) == R.add(b, a)
    assert R.mul(a, b) == R.mul(b, a)
    assert R.add(R.add(a, b), c) == R.add(a, R.add(b, c))
    assert R.mul(R.mul(a, b), c) == R.mul(a, R.mul(b, c))
    assert R.mul(a, R.add(b, c)) == R.add(R.mul(a, b), R.mul(a, c))
    assert R.add(a, R.neg(a)) == R.zero
    assert R.mul(a, R.one) == a
    assert R.sub(a, b) == R.add(a, R.neg(b))


@given(a=st.integers(0, 63), n=st.sampled_from([2, 4, 8, 9, 12, 16, 36, 64]))
@settings(max_examples=200, deadline=None)
def test_nilpotency_index_matches_brute_force(a, n):
    R = Ring.mod(n)
    a = a % n
    expected = next((e for e in range(1, 8) if pow(a, e, n) == 0), None)
    assert R.nilpotency_index(a) == expected


def test_nilpotency_examples():
    assert Ring.mod(4).nilpotency_index(2) == 2
    assert Ring.mod(8).nilpotency_index(2) == 3
    assert Ring.mod(8).nilpotency_index(4) == 2
    assert Ring.mod(6).nilpotency_index(2) is None
    assert QQ.nilpotency_index(Fraction(1, 2)) is None
    assert QQ.nilpotency_index(Fraction(0)) == 1


@pytest.mark.parametrize("n", [5, 7, 8, 12])
def test_units_and_inverses(n):
    R = Ring.mod(n)
    for a in range(n):
        if R.is_unit(a):
            assert R.mul(a, R.inverse(a)) == 1
        else:
            with pytest.raises(ZeroDivisionError):
                R.inverse(a)
    assert ZZ.is_unit(-1) and not ZZ.is_unit(2)
    assert QQ.inverse(Fraction(3, 4)) == Fraction(4, 3)


def test_normalize_and_json():
    assert QQ.normalize("3/6") == Fraction(1, 2)
    assert Ring.mod(7).normalize(Fraction(1, 2)) == 4
    with pytest.raises(StructuralError):
        ZZ.normalize(Fraction(1, 2))
    for R in RINGS:
        assert Ring.from_json(R.to_json()) == R
    with pytest.raises(StructuralError):
        Ring.from_json("R")
    with pytest.raises(StructuralError):
        Ring.mod(1)


def test_ring_value_mismatch():
    a = QQ.value(1)
    b = Ring.mod(5).value(1)
    with pytest.raises(RingMismatch):
        a + b
    assert RingValue.from_json(a.to_json()) == a
    assert (Ring.mod(4).value(2) ** 2).is_zero()


def test_domain_and_field_flags():
    assert QQ.is_field() and ZZ.is_domain() and not ZZ.is_field()
    assert Ring.mod(7).is_field() and not Ring.mod(8).is_domain()


@given(n=st.integers(0, 40), k=st.integers(-2, 42))
@settings(max_examples=200, deadline=None)
def test_binomial_pascal(n, k):
    expected = comb(n, k) if 0 <= k <= n else 0
    assert binomial(n, k) == expected
    if n >= 1 and 1 <= k <= n:
        assert binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k)
