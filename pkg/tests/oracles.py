"""Brute-force oracles shared by the test modules."""

import itertools
from fractions import Fraction

from twistlab.coeffring import QQ
from twistlab.polyalg import BiPoly

# criterion number -> (passed, detail); filled by test_acceptance
ACCEPTANCE = {}


def weak_compositions(total, parts):
    """Ordered tuples of ``parts`` non-negative integers summing to ``total``."""
    for t in itertools.product(range(total + 1), repeat=parts):
        if sum(t) == total:
            yield t


def gamma_bruteforce(fam, j, r, m, positive_only=False):
    """Literal sum over compositions of alpha_{n_1} o ... o alpha_{n_r} applied to X^m."""
    acc = fam.zero()
    for word in weak_compositions(j, r):
        if positive_only and 0 in word:
            continue
        v = fam.mono(m)
        for n in reversed(word):
            v = fam.apply_alpha(n, v)
            if v.is_zero():
                break
        acc = acc + v
    return acc


def random_fraction(rng, lo=-4, hi=4, den=3):
    num = 0
    while num == 0:
        num = rng.randint(lo, hi)
    return Fraction(num, rng.randint(1, den))


def random_q(rng, rows, cols, terms=(1, 3), ring=QQ):
    """Sparse q with nonzero entries at random positions of rows x cols."""
    cells = [(i, j) for i in rows for j in cols]
    pick = rng.sample(cells, rng.randint(*terms))
    return BiPoly(ring, {c: random_fraction(rng) for c in pick})


def report(criterion, failures, detail=""):
    """Record a criterion verdict and return the failures for asserting."""
    ACCEPTANCE[criterion] = (not failures, detail if not failures else f"{detail} {failures[:3]}")
    print(f"criterion {criterion}: {'PASS' if not failures else 'FAIL'} {detail}")
    return failures
