from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import gamma_bruteforce
from twistlab import builders
from twistlab.coeffring import QQ, Ring
from twistlab.errors import StructuralError
from twistlab.polyalg import BiPoly, Poly, QuotPoly
from twistlab.twistcore import (AlphaFamily, flip_transpose, is_lower_bounded, is_upper_bounded,
                                replay_witness, verify_axioms, witness_replays)

X = lambda m, c=1: Poly.monomial(QQ, m, c)


def test_quantum_plane_cells():
    fam = builders.quantum_plane(QQ, 2)
    assert fam.alpha_cell(1, 5) == X(5, 32)
    assert fam.gamma(2, 2, X(1)) == X(1, 4)
    assert fam.alpha_cell(0, 3).is_zero()


def test_null_support_family_kills_y_squared():
    fam = builders.build_almost_null({(2, 2): 1})
    for j in range(0, 8):
        assert fam.gamma(j, 2, X(1)).is_zero()
    assert fam.eval_s(1, X(1)) == BiPoly(QQ, {(2, 2): 1})


def test_single_rewrite_rule_is_a_twisting_map():
    # YX = Y has no overlaps, so it is a valid twisted plane
    fam = AlphaFamily.from_q(QQ, {(0, 1): 1})
    assert verify_axioms(fam, 10).status == "Verified"
    for m in range(0, 6):
        assert fam.alpha_cell(1, m) == X(0)


def test_support_grows_geometrically():
    # YX = X Y^2 gives alpha_{2^m}(X^m) = X^m
    fam = AlphaFamily.from_q(QQ, {(1, 2): 1})
    for m in range(1, 5):
        assert fam.alpha_cell(2 ** m, m) == X(m)
    # the associativity check meets s(Y^8 (x) X^2), whose Y-support reaches 32
    assert verify_axioms(fam, 4).status == "Inconclusive"
    wide = AlphaFamily.from_q(QQ, {(1, 2): 1}, j_cap=64)
    assert verify_axioms(wide, 4).status == "Verified"


def test_upper_bound_scan_finds_unbounded_cell():
    fam = AlphaFamily.from_q(QQ, {(0, 2): 1})
    for m in range(1, 8):
        assert fam.alpha_cell(m + 1, m) == X(0)
    v = is_upper_bounded(fam, search_bound=16, degree_bound=10)
    assert v.status == "Unbounded" and not v.certified
    assert witness_replays(fam, v.witness)
    assert is_upper_bounded(builders.weyl_family()).certified
    assert is_lower_bounded(builders.quantum_plane()).status == "Bounded"


def test_weyl_twisted_product():
    fam = builders.weyl_family()
    y, x = BiPoly.monomial(QQ, 0, 1), BiPoly.monomial(QQ, 1, 0)
    assert fam.mul_twisted(y, x) == BiPoly(QQ, {(1, 1): 1, (0, 0): 1})


small_q = st.dictionaries(st.tuples(st.integers(0, 2), st.integers(1, 2)),
                          st.fractions(min_value=-3, max_value=3, max_denominator=2),
                          min_size=1, max_size=3)


@given(q=small_q)
@settings(max_examples=12, deadline=None)
def test_gamma_recursion_matches_compositions(q):
    fam = AlphaFamily.from_q(QQ, q)
    for j in range(0, 6):
        for r in range(0, 6):
            for m in range(0, 3):
                assert fam.gamma_cell(j, r, m) == gamma_bruteforce(fam, j, r, m)


@given(q=small_q)
@settings(max_examples=15, deadline=None)
def test_unperturbed_q_families_are_never_refuted(q):
    # one rewrite rule has no overlaps; an infinite Y-support shows up as Inconclusive
    rep = verify_axioms(AlphaFamily.from_q(QQ, q), 3)
    assert rep.status in ("Verified", "Inconclusive")


def test_infinite_y_support_is_inconclusive():
    fam = AlphaFamily.from_q(QQ, {(0, 1): 1, (2, 2): 1})
    assert all(not fam.alpha_cell(j, 2).is_zero() for j in range(1, 40))
    assert verify_axioms(fam, 4).status == "Inconclusive"


def test_json_round_trip():
    for fam in (builders.weyl_family(), builders.build_t2_derivation_family(4),
                AlphaFamily.from_q(Ring.mod(5), {(1, 1): 2, (0, 0): 1})):
        back = AlphaFamily.from_json(fam.to_json())
        assert back.to_json() == fam.to_json()
        for j in range(0, 4):
            for m in range(0, 4):
                assert back.alpha_cell(j, m) == fam.alpha_cell(j, m)


def test_derived_cell_mutation_is_refuted():
    fam = builders.quantum_plane(QQ, 3)
    bad = fam.with_overrides({(1, 3): fam.alpha_cell(1, 3) + X(0)})
    rep = verify_axioms(bad, 6)
    assert rep.status == "Refuted"
    lhs, rhs = replay_witness(bad, rep.witness)
    assert lhs != rhs
    assert not witness_replays(fam, rep.witness)


def test_unit_mutation_is_refuted():
    fam = builders.build_t2_derivation_family(4)
    bad = fam.with_overrides({(2, 0): QuotPoly.monomial(QQ, 4, 1)})
    rep = verify_axioms(bad, 6)
    assert rep.status == "Refuted" and rep.witness["kind"] == "unit"


def test_changing_a_defining_cell_gives_another_valid_family():
    fam = AlphaFamily.from_q(QQ, {(1, 1): 2, (2, 1): Fraction(1, 2)})
    assert verify_axioms(fam, 6).status == "Verified"


def test_flip_transposes():
    fam = AlphaFamily.from_q(QQ, {(2, 3): 1, (0, 1): 5})
    assert flip_transpose(fam).q == BiPoly(QQ, {(3, 2): 1, (1, 0): 5})
    with pytest.raises(StructuralError):
        flip_transpose(builders.build_dual_projection())


def test_structural_errors():
    with pytest.raises(StructuralError):
        AlphaFamily.from_tables(QQ, 2, {(1, 2): QuotPoly.monomial(QQ, 2, 1)})
    with pytest.raises(StructuralError):
        AlphaFamily(QQ, builders.PolyBase(), {(1, 2): X(1)})
