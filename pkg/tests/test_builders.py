from math import comb

import pytest

from twistlab import builders
from twistlab.builders import (DerivSpec, EndoSpec, Tower, all_compositions, build_almost_null,
                               build_derivation_tower, compositions, ore_from_images,
                               single_derivation_alpha, t2_derivation)
from twistlab.coeffring import QQ, Ring
from twistlab.errors import HypothesisError, StructuralError
from twistlab.polyalg import Poly, QuotPoly
from twistlab.twistcore import PolyBase, QuotBase, verify_axioms


@pytest.mark.parametrize("total", range(1, 8))
def test_composition_counts(total):
    for parts in range(1, total + 1):
        got = list(compositions(total, parts))
        assert len(got) == comb(total - 1, parts - 1) == len(set(got))
        assert all(sum(c) == total and min(c) >= 1 for c in got)
    assert len(list(all_compositions(total))) == 2 ** (total - 1)


def test_ore_cells():
    fam = ore_from_images(QQ, Poly(QQ, [0, 2]), Poly(QQ, [1]))
    # delta(X^2) = delta(X) X + alpha(X) delta(X) = 3X
    assert fam.alpha_cell(0, 2) == Poly(QQ, [0, 3])
    assert fam.alpha_cell(1, 2) == Poly(QQ, [0, 0, 4])
    assert verify_axioms(fam, 8).status == "Verified"


def test_quantum_plane_over_finite_ring():
    assert verify_axioms(builders.quantum_plane(Ring.mod(5), 3), 8).status == "Verified"


def test_endomorphism_must_respect_the_quotient():
    with pytest.raises(StructuralError):
        EndoSpec(QQ, QuotBase(3), QuotPoly.monomial(QQ, 3, 0))


def test_derivation_must_kill_the_relation():
    base = QuotBase(2)
    ident = EndoSpec.identity(QQ, base)
    with pytest.raises(HypothesisError):
        DerivSpec(QQ, base, QuotPoly.monomial(QQ, 2, 0), ident, ident)


def test_derivation_leibniz_holds():
    d = t2_derivation(QQ, 6)
    assert d.check_leibniz(5) is None
    assert d(QuotPoly.monomial(QQ, 6, 3)) == QuotPoly.monomial(QQ, 6, 4, 3)


def test_almost_null_support_rule():
    with pytest.raises(HypothesisError) as exc:
        build_almost_null({(1, 2): 1})
    assert exc.value.witness["kind"] == "support"
    fam = build_almost_null({(3, 2): 2, (2, 4): -1})
    assert fam.alpha_cell(1, 5).is_zero() and fam.alpha_cell(1, 0) == Poly.const(QQ, 1)


@pytest.mark.parametrize("n", [3, 4, 6])
def test_word_sums_match_brute_force(n):
    tower = Tower(EndoSpec.identity(QQ, QuotBase(n)), {1: t2_derivation(QQ, n)})
    for j in range(1, n + 1):
        for m in range(0, n):
            assert tower.W(j).on_mono(m) == tower.W_bruteforce(j).on_mono(m)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_single_derivation_formula_matches_tower(n):
    base = QuotBase(n)
    alpha = EndoSpec.identity(QQ, base)
    beta = t2_derivation(QQ, n)
    tower = Tower(alpha, {1: beta})
    for j in range(1, n + 2):
        for m in range(0, n):
            assert (single_derivation_alpha(alpha, beta, j).on_mono(m)
                    == tower.alpha_op(j).on_mono(m))


def test_t2_derivation_closed_form():
    fam = builders.build_t2_derivation_family(5)
    # D^2(t) = D(t^2) = 2 t^3
    assert fam.alpha_cell(3, 1) == QuotPoly.monomial(QQ, 5, 3, 2)
    assert fam.alpha_cell(4, 1) == QuotPoly.monomial(QQ, 5, 4, 6)
    assert fam.alpha_cell(5, 1).is_zero()


def test_dual_projection_table():
    fam = builders.build_dual_projection()
    t = QuotPoly.monomial(QQ, 2, 1)
    assert fam.alpha_cell(2, 1) == t and fam.alpha_cell(1, 1) == t
    assert fam.alpha_cell(2, 0).is_zero()


def test_non_orthogonal_betas_rejected():
    base = QuotBase(5)
    alpha = EndoSpec.identity(QQ, base)
    t2 = QuotPoly.monomial(QQ, 5, 2)
    with pytest.raises(HypothesisError) as exc:
        build_derivation_tower(alpha, {1: t2, 2: t2}, j_max=6)
    assert exc.value.witness["kind"] == "orthogonality"


def test_tower_on_polynomials_needs_vanishing():
    alpha = EndoSpec.identity(QQ, PolyBase())
    with pytest.raises(HypothesisError):
        build_derivation_tower(alpha, {1: Poly.monomial(QQ, 2)}, j_max=4)
