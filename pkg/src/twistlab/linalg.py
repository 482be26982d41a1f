"""Exact rank and nullspace over Q, through sympy's rational matrices."""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence, Tuple

import sympy


def _matrix(rows: Sequence[Sequence]) -> sympy.Matrix:
    return sympy.Matrix([[sympy.Rational(Fraction(x).numerator, Fraction(x).denominator)
                          for x in row] for row in rows])


def _frac(x) -> Fraction:
    x = sympy.Rational(x)
    return Fraction(int(x.p), int(x.q))


def rref(rows: Sequence[Sequence]) -> Tuple[List[List[Fraction]], Tuple[int, ...]]:
    """Reduced row echelon form (pivots chosen left to right) and pivot columns."""
    red, pivots = _matrix(rows).rref()
    return [[_frac(x) for x in red.row(i)] for i in range(red.rows)], tuple(pivots)


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence]) -> List[List[Fraction]]:
    """One basis vector per free column, with a 1 in that column and 0 in the other free ones."""
    return [[_frac(x) for x in v] for v in _matrix(rows).nullspace()]
