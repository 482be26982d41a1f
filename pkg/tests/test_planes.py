from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twistlab import planes
from twistlab.coeffring import QQ, Ring
from twistlab.errors import StructuralError
from twistlab.polyalg import BiPoly
from twistlab.twistcore import AlphaFamily, verify_axioms, witness_replays

MULTIPLE_ROOT = BiPoly(QQ, {(0, 1): 1, (0, 2): 1, (1, 2): -2, (2, 2): 1})
SIMPLE_ROOT = BiPoly(QQ, {(0, 1): 1, (0, 2): -1, (1, 2): 1})

fracs = st.fractions(min_value=-3, max_value=3, max_denominator=3)
q4 = st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)), fracs,
                     min_size=1, max_size=5)


@given(q=q4, lam=fracs, xi=fracs)
@settings(max_examples=40, deadline=None)
def test_shift_generic_equals_closed(q, lam, xi):
    q = BiPoly(QQ, q)
    fam = AlphaFamily.from_q(QQ, q)
    assert planes._shift_generic(fam, lam, xi) == planes._shift_closed(q, lam, xi)


@given(q=q4, lam=fracs, xi=fracs)
@settings(max_examples=40, deadline=None)
def test_shift_round_trip(q, lam, xi):
    q = BiPoly(QQ, q)
    there = planes.shift_matrix(q, lam, xi)
    assert planes.shift_matrix(there, -lam, -xi) == q


def test_zero_shift_is_identity():
    assert planes.shift_matrix(SIMPLE_ROOT, 0, 0) == SIMPLE_ROOT


def test_null_support_matrix_is_almost_null_at_origin():
    v = planes.classify_almost_null(BiPoly(QQ, {(2, 2): 1}))
    assert v.status == "AlmostNull"
    assert (v.params.lam, v.params.xi) == (0, 0)


def test_multiple_root_instance():
    v = planes.classify_almost_null(MULTIPLE_ROOT)
    assert v.status == "AlmostNull"
    assert (v.params.lam, v.params.xi) == (1, 0)
    assert v.shifted == BiPoly(QQ, {(2, 2): 1})
    assert planes.has_null_support(v.shifted)
    assert v.condition_a.holds and v.condition_b.holds


def test_almost_null_shift_verifies():
    v = planes.classify_almost_null(MULTIPLE_ROOT)
    fam = planes.shift_equivalence(MULTIPLE_ROOT, v.params)
    assert verify_axioms(fam, 8).status == "Verified"


def test_simple_root_instance():
    v = planes.classify_almost_null(SIMPLE_ROOT)
    assert v.status == "ObstructedUpper"
    assert v.condition_a.holds and not v.condition_b.holds
    assert [c.name for c in v.condition_b.failing] == ["lambda multiple root of Q_2"]


def test_simple_root_refuted_at_degree_four():
    rep = planes.detect_obstruction(SIMPLE_ROOT, N=10)
    assert rep.status == "Refuted"
    w = rep.witness
    assert (w["kind"], w["m"], w["n"], w["side"]) == ("unbounded", 4, 16, "upper")
    assert witness_replays(AlphaFamily.from_q(QQ, SIMPLE_ROOT), w)


def test_y_squared_rule_refuted_at_degree_nine():
    rep = planes.detect_obstruction(BiPoly(QQ, {(0, 2): 1}), N=10)
    assert rep.status == "Refuted"
    assert (rep.witness["m"], rep.witness["n"]) == (9, 10)


def test_bounded_family_not_refuted():
    rep = planes.detect_obstruction(BiPoly(QQ, {(1, 1): 2}), N=6)
    assert rep.status == "Verified"
    assert any("certified" in n for n in rep.notes)


def test_lower_side_uses_transpose():
    rep = planes.detect_obstruction(BiPoly(QQ, {(2, 0): 1}), N=10, side="lower")
    assert rep.status == "Refuted" and rep.witness["side"] == "lower"
    with pytest.raises(StructuralError):
        planes.detect_obstruction(SIMPLE_ROOT, side="sideways")


def test_row_and_column_polynomials():
    P, Q = planes.row_col_polys(MULTIPLE_ROOT)
    # Q_2(Z) = sum_i q_i2 Z^i = (Z - 1)^2
    assert [Q[2][k] for k in range(3)] == [1, -2, 1]
    assert P[0][1] == 1


def test_finite_ring_verdict_is_advisory():
    q = BiPoly(Ring.mod(4), {(2, 2): 1})
    v = planes.classify_almost_null(q)
    assert v.status == "AlmostNull"
    assert v.condition_a.advisory


def test_shift_params_json():
    p = planes.ShiftParams.of(QQ, Fraction(1, 2), 3)
    assert p.to_json() == {"lambda": "1/2", "xi": "3"}
