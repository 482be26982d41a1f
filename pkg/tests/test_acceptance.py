"""Acceptance criteria 1-9, one test each, all exact.

Each test records a PASS/FAIL line (printed here and in the terminal summary).
Run directly with ``python3 tests/test_acceptance.py`` for the bare lines.
"""

import os
import random
import sys
from fractions import Fraction

sys.path.insert(0, os.path.dirname(__file__))

from oracles import gamma_bruteforce, random_fraction, random_q, report  # noqa: E402

from twistlab import builders, dualnum, planes, seriestwist, twistcore  # noqa: E402
from twistlab.cli import identity_failures  # noqa: E402
from twistlab.coeffring import QQ, Ring  # noqa: E402
from twistlab.linalg import nullspace  # noqa: E402
from twistlab.polyalg import BiPoly, Poly, QuotPoly, TruncPoly  # noqa: E402

SEED = 20240611
MULTIPLE_ROOT = {(0, 1): 1, (0, 2): 1, (1, 2): -2, (2, 2): 1}
SIMPLE_ROOT = {(0, 1): 1, (0, 2): -1, (1, 2): 1}
Z4_MATRIX = {(0, 1): 2, (1, 1): 1}
Z8_MATRIX = {(0, 1): 2, (1, 1): 1, (0, 2): 1, (2, 2): 1, (1, 3): 3}


def engine_families():
    fams = [("quantum_plane", builders.quantum_plane(QQ, 2)),
            ("weyl", builders.weyl_family(QQ)),
            ("dual_projection", builders.build_dual_projection(QQ))]
    fams += [(f"t2_derivation n={n}", builders.build_t2_derivation_family(n, QQ)) for n in (3, 4, 5)]
    return fams


def test_criterion_1_engine():
    failures = []
    for name, fam in engine_families():
        rep = twistcore.verify_axioms(fam, 10)
        if rep.status != "Verified":
            failures.append((name, rep.status, rep.witness))
    rng = random.Random(SEED)
    gamma_fams = [f for _, f in engine_families()]
    gamma_fams.append(builders.build_almost_null(random_q(rng, range(2, 4), range(2, 4))))
    gamma_fams.append(twistcore.AlphaFamily.from_q(QQ, {(0, 1): 1, (1, 1): 2}))
    for fam in gamma_fams:
        for j in range(0, 7):
            for r in range(0, 7):
                for m in range(0, 3):
                    if fam.gamma_cell(j, r, m) != gamma_bruteforce(fam, j, r, m):
                        failures.append(("gamma", fam.provenance, j, r, m))
    assert not report(1, failures, "four families verified at N=10, gamma recursion = brute force")


def test_criterion_2_almost_null():
    rng = random.Random(SEED + 2)
    failures = []
    for k in range(20):
        q = random_q(rng, range(2, 6), range(2, 6), terms=(1, 4))
        fam = builders.build_almost_null(q)
        rep = twistcore.verify_axioms(fam, 10)
        if rep.status != "Verified":
            failures.append((k, "verify", rep.status))
        for r in range(1, 10):
            for s in range(1, 11 - r):
                if r + s > 2 and not fam.eval_s(r, Poly.monomial(QQ, s)).is_zero():
                    failures.append((k, "eval_s", r, s))
    assert not report(2, failures, "20 random null-support matrices verified, s(Y^r X^s) = 0")


def test_criterion_3_plane_classification():
    failures = []
    multi = planes.classify_almost_null(BiPoly(QQ, MULTIPLE_ROOT))
    if multi.status != "AlmostNull" or not planes.has_null_support(multi.shifted):
        failures.append(("multiple root", multi.status))
    simple = planes.classify_almost_null(BiPoly(QQ, SIMPLE_ROOT))
    if simple.status != "ObstructedUpper":
        failures.append(("simple root", simple.status))
    rep = planes.detect_obstruction(BiPoly(QQ, SIMPLE_ROOT), N=10)
    degree = rep.witness and rep.witness.get("m")
    fam = twistcore.AlphaFamily.from_q(QQ, SIMPLE_ROOT)
    if rep.status != "Refuted" or degree is None or degree > 10:
        failures.append(("obstruction", rep.status, degree))
    elif not twistcore.witness_replays(fam, rep.witness):
        failures.append(("obstruction replay", rep.witness))
    assert not report(3, failures, f"simple-root instance refuted at X-degree {degree}")


def test_criterion_4_shift_two_ways():
    rng = random.Random(SEED + 4)
    failures = []
    for k in range(50):
        q = random_q(rng, range(0, 4), range(0, 4), terms=(1, 5))
        lam, xi = (random_fraction(rng) if rng.random() < 0.8 else Fraction(0) for _ in range(2))
        fam = twistcore.AlphaFamily.from_q(QQ, q)
        generic = planes._shift_generic(fam, lam, xi)
        closed = planes._shift_closed(q, lam, xi)
        if generic != closed:
            failures.append((k, str(q), lam, xi))
    assert not report(4, failures, "50 shift instances agree exactly")


def a_system_vectors(rng, count):
    """Random combinations of A-system solutions plus unconstrained vectors."""
    out = []
    for k in range(count):
        m = rng.randint(1, 8)
        if k % 2:
            out.append([random_fraction(rng) for _ in range(m + 1)])
            continue
        rows = [[dualnum.A_nN(c - 1 - h, c - 1) if c - 1 >= h else 0 for c in range(m + 1)]
                for h in range(m)]
        basis = nullspace(rows)
        coeffs = [random_fraction(rng) for _ in basis]
        out.append([sum((c * v[i] for c, v in zip(coeffs, basis)), Fraction(0))
                    for i in range(m + 1)])
    return out


def test_criterion_5_identities():
    counts, fails = identity_failures(20, 20, 10)
    failures = list(fails)
    rng = random.Random(SEED + 5)
    solved = 0
    for y in a_system_vectors(rng, 200):
        a, b = dualnum.systems_equivalent_check(y)
        solved += a
        if a != b:
            failures.append(("systems", [str(v) for v in y]))
    if solved < 100:
        failures.append(("too few solution vectors", solved))
    assert not report(5, failures, f"{sum(counts.values())} identity checks, 200 vectors")


def dual_cases(rng, count):
    """Mix of valid and invalid (P, Q) pairs with deg Q <= 8."""
    R = QQ
    Y = Poly.monomial(R, 1)
    cases = []
    for k in range(count):
        kind = k % 5
        if kind == 0:
            P = Poly(R, [random_fraction(rng) for _ in range(rng.randint(1, 4))])
            Q = Poly.zero(R)
        elif kind == 1:
            m = rng.choice((2, 4, 6, 8))
            Q = Poly(R, [random_fraction(rng) if i % 2 == 0 else 0 for i in range(m + 1)])
            P = -Y
            if rng.random() < 0.5:
                Q = Q + Poly.monomial(R, rng.randrange(1, m, 2), random_fraction(rng))
        elif kind in (2, 3):
            m = rng.choice((2, 4, 6, 8))
            p0 = random_fraction(rng)
            sol = dualnum.solve_C(m)
            y = [sum((random_fraction(rng) * v[i] for v in sol.basis), Fraction(0))
                 for i in range(m + 1)]
            Q = Poly(R, dualnum.q_from_y(y, p0))
            P = Poly(R, [p0, -1])
            if kind == 3:
                Q = Q + Poly.monomial(R, rng.randint(0, m), random_fraction(rng))
        else:
            P = Poly(R, [random_fraction(rng) for _ in range(rng.randint(1, 3))])
            Q = Poly(R, [random_fraction(rng) for _ in range(rng.randint(1, 9))])
        cases.append((P, Q))
    return cases


def test_criterion_6_dual_classification():
    failures = []
    for m in (2, 4, 6, 8, 10):
        sol = dualnum.solve_C(m)
        if (sol.rank, sol.nullity) != (m // 2, m // 2 + 1):
            failures.append(("rank", m, sol.rank, sol.nullity))
    rng = random.Random(SEED + 6)
    valid = 0
    for P, Q in dual_cases(rng, 200):
        verdict = dualnum.classify_dual(P, Q)
        rep = dualnum.verify_iota_axioms(dualnum.IotaPair(P, Q))
        if verdict.valid != (rep.status == "Verified"):
            failures.append(("sweep", P.to_str("Y"), Q.to_str("Y"), verdict.status, rep.status))
            continue
        if verdict.valid:
            valid += 1
            if valid % 4 == 0:
                view = twistcore.verify_axioms(dualnum.to_alpha_view(P, Q), 10)
                if view.status != "Verified":
                    failures.append(("alpha view", P.to_str("Y"), Q.to_str("Y"), view.status))
    if not 40 <= valid <= 160:
        failures.append(("unbalanced sweep", valid))
    assert not report(6, failures, f"rank table, 200-case sweep ({valid} valid)")


def test_criterion_7_series():
    failures = []
    Z4, Z8 = Ring.mod(4), Ring.mod(8)
    f4 = seriestwist.build_series_family(Z4_MATRIX, 8, 8, Z4)
    f8 = seriestwist.build_series_family(Z8_MATRIX, 8, 8, Z8)
    if f8.e != 3:
        failures.append(("nilpotency index", f8.e))
    for name, fam, a, ring in (("Z/4", f4, Z4_MATRIX, Z4), ("Z/8", f8, Z8_MATRIX, Z8)):
        rep = seriestwist.verify_series_axioms(fam)
        if rep.status != "Verified":
            failures.append((name, rep.status, rep.witness))
        w = seriestwist.check_containment(fam)
        if w is not None:
            failures.append((name, w))
        fine = seriestwist.build_series_family(a, 12, 12, ring)
        w = seriestwist.refinement_witness(fam, fine)
        if w is not None:
            failures.append((name, w))
    try:
        seriestwist.build_series_family({(0, 1): 1, (1, 1): 1}, 8, 8, QQ)
        failures.append("non-nilpotent constant term accepted")
    except seriestwist.HypothesisError as exc:
        if "not nilpotent" not in str(exc):
            failures.append(("rejection message", str(exc)))
    assert not report(7, failures, "Z/4 and Z/8 verified at (8,8), containment, refinement")


def test_criterion_8_three_constructions():
    failures = []
    for n in (3, 4, 5):
        direct = builders.build_t2_derivation_family(n, QQ)
        tower = builders.build_t2_derivation_tower(n, QQ)
        series = seriestwist.t2_derivation_series(n, 8, QQ)
        for j in range(1, 9):
            for m in range(0, n):
                a = direct.alpha_cell(j, m)
                b = tower.alpha_cell(j, m)
                c = QuotPoly(QQ, n, list(series.table(j, m).c))
                if not a == b == c:
                    failures.append((n, j, m, str(a), str(b), str(c)))
    assert not report(8, failures, "direct, derivation tower and series tower agree")


def mutation_targets():
    poly_fams = [builders.quantum_plane(QQ, 3), builders.weyl_family(QQ),
                 builders.build_almost_null({(2, 2): 1, (3, 2): -1})]
    quot_fams = [builders.build_t2_derivation_family(5, QQ), builders.build_dual_projection(QQ)]
    series_fams = [seriestwist.build_series_family(Z4_MATRIX, 8, 8, Ring.mod(4)),
                   seriestwist.build_series_family(Z8_MATRIX, 8, 8, Ring.mod(8))]
    return poly_fams, quot_fams, series_fams


def mutate_alpha(rng, fam, N):
    top = fam.base.n - 1 if fam.is_quot else N
    m = rng.choice([0] + list(range(2, top + 1)))
    j = rng.randint(0, min(twistcore.default_j_check(fam, N), 4))
    k = rng.randint(0, top)
    bump = fam.mono(k, random_fraction(rng))
    return (j, m), fam.alpha_cell(j, m) + bump


def test_criterion_9_mutation():
    rng = random.Random(SEED + 9)
    poly_fams, quot_fams, series_fams = mutation_targets()
    failures = []
    for k in range(20):
        pool = k % 3
        if pool < 2:
            fam = rng.choice(poly_fams if pool == 0 else quot_fams)
            cell, value = mutate_alpha(rng, fam, 6)
            bad = fam.with_overrides({cell: value})
            rep = twistcore.verify_axioms(bad, 6)
            ok = (rep.status == "Refuted" and twistcore.witness_replays(bad, rep.witness)
                  and not twistcore.witness_replays(fam, rep.witness))
        else:
            fam = rng.choice(series_fams)
            j = rng.randint(1, fam.ny)
            n = rng.choice([0] + list(range(2, fam.nx + 1)))
            c = rng.randrange(1, fam.ring.modulus)
            value = fam.table(j, n) + TruncPoly.monomial(fam.ring, fam.nx, rng.randrange(fam.nx), c)
            cell = (j, n)
            bad = fam.with_overrides({cell: value})
            rep = seriestwist.verify_series_axioms(bad)
            ok = (rep.status == "Refuted" and seriestwist.replay_series_witness(bad, rep.witness)
                  and not seriestwist.replay_series_witness(fam, rep.witness))
        if not ok:
            failures.append((k, cell, rep.status, rep.witness))
    assert not report(9, failures, "20 single-cell mutations refuted with replayable witnesses")


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                pass
