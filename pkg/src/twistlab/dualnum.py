"""Twisting maps between the dual numbers k[t]/(t^2) and k[Y].

Such a map is s(t (x) a) = iota_0(a) (x) 1 + iota_1(a) (x) t.  On k[Y] it is
fixed by P = iota_1(Y) and Q = iota_0(Y): iota_1 is the substitution Y -> P
and iota_0 is the iota_1-derivation with iota_0(Y) = Q.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg
from .coeffring import Ring, binomial
from .errors import HypothesisError, InternalError, StructuralError
from .polyalg import Poly, QuotPoly
from .twistcore import AlphaFamily, VerificationReport


# -- alternating binomial sums ---------------------------------------------------------------

@lru_cache(maxsize=None)
def A_nN(n: int, N: int) -> int:
    """sum_{k=0}^{N-n} (-1)^k C(n+k, n)."""
    if n < 0 or n > N:
        raise ValueError(f"A_n^N needs 0 <= n <= N, got n={n}, N={N}")
    return sum((-1) ** k * binomial(n + k, n) for k in range(N - n + 1))


def system_A(y: Sequence) -> List:
    """A(h) = sum_{i=h}^{m-1} y_{i+1} A_{i-h}^i for h = 0..m-1."""
    m = len(y) - 1
    return [sum((y[i + 1] * A_nN(i - h, i) for i in range(h, m)), Fraction(0))
            for h in range(m)]


def system_B(y: Sequence) -> List:
    """B(h) = sum_{i=h}^m C(i, h) y_i - (-1)^h y_h for h = 0..m."""
    m = len(y) - 1
    return [sum((binomial(i, h) * y[i] for i in range(h, m + 1)), Fraction(0))
            - (-1) ** h * y[h] for h in range(m + 1)]


def systems_equivalent_check(y: Sequence) -> Tuple[bool, bool]:
    """(every A(h) vanishes, every B(h) vanishes) for y = (y_0, ..., y_m)."""
    y = [Fraction(v) for v in y]
    return all(v == 0 for v in system_A(y)), all(v == 0 for v in system_B(y))


# -- iota pairs ------------------------------------------------------------------------------

@dataclass
class IotaPair:
    P: Poly
    Q: Poly
    _i0: Dict[int, Poly] = field(default_factory=dict, repr=False)
    _i1: Dict[int, Poly] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.P.ring != self.Q.ring:
            raise StructuralError("P and Q live over different rings")

    @property
    def ring(self) -> Ring:
        return self.P.ring

    @classmethod
    def parse(cls, ring: Ring, P, Q) -> "IotaPair":
        return cls(Poly.from_json(ring, P), Poly.from_json(ring, Q))

    def iota1_mono(self, l: int) -> Poly:
        if l not in self._i1:
            self._i1[l] = self.P ** l if l < 2 else self.iota1_mono(l - 1) * self.P
        return self._i1[l]

    def iota0_mono(self, l: int) -> Poly:
        """Q * sum_{i<l} P^i Y^{l-i-1}, with P^0 = 1 even when P = 0."""
        if l not in self._i0:
            R = self.ring
            acc = Poly.zero(R)
            for i in range(l):
                acc = acc + self.iota1_mono(i).shift_exp(l - i - 1)
            self._i0[l] = self.Q * acc
        return self._i0[l]

    def iota1(self, f: Poly) -> Poly:
        return f.compose(self.P)

    def iota0(self, f: Poly) -> Poly:
        acc = Poly.zero(self.ring)
        for l, c in f.terms():
            acc = acc + self.iota0_mono(l).scale(c)
        return acc

    def tables(self, bound: int) -> dict:
        return {"iota0": {l: self.iota0_mono(l) for l in range(bound + 1)},
                "iota1": {l: self.iota1_mono(l) for l in range(bound + 1)}}

    def to_json(self) -> dict:
        return {"ring": self.ring.to_json(), "P": self.P.to_json(), "Q": self.Q.to_json()}


def default_iota_bound(pair: IotaPair) -> int:
    d = pair.Q.degree()
    return 2 * (0 if pair.Q.is_zero() else d) + 4


def verify_iota_axioms(pair: IotaPair, N: Optional[int] = None) -> VerificationReport:
    """Check the iota axioms on monomials Y^l, l <= N."""
    N = default_iota_bound(pair) if N is None else N
    rep = VerificationReport("Verified", N)
    Y = lambda l: Poly.monomial(pair.ring, l)

    def fail(kind, l, lhs, rhs, **extra):
        rep.status = "Refuted"
        rep.witness = {"kind": kind, "l": l, "lhs": lhs.to_str("Y"), "rhs": rhs.to_str("Y"),
                       **extra}
        return rep

    for l in range(N + 1):
        lhs1, lhs0 = pair.iota1(Y(l)), pair.iota0(Y(l))
        for a in range(l + 1):
            b = l - a
            rhs = pair.iota1_mono(a) * pair.iota1_mono(b)
            rep.checks["multiplicative"] = rep.checks.get("multiplicative", 0) + 1
            if lhs1 != rhs:
                raise InternalError(f"iota_1 not multiplicative at Y^{a} * Y^{b}")
            lhs = lhs0
            rhs = pair.iota0_mono(a) * Y(b) + pair.iota1_mono(a) * pair.iota0_mono(b)
            rep.checks["leibniz"] = rep.checks.get("leibniz", 0) + 1
            if lhs != rhs:
                return fail("leibniz", l, lhs, rhs, a=a, b=b)
    for l in range(N + 1):
        sq = pair.iota0(pair.iota0_mono(l))
        rep.checks["square_zero"] = rep.checks.get("square_zero", 0) + 1
        if not sq.is_zero():
            return fail("square_zero", l, sq, Poly.zero(pair.ring))
        lhs = pair.iota0(pair.iota1_mono(l))
        rhs = -pair.iota1(pair.iota0_mono(l))
        rep.checks["anticommute"] = rep.checks.get("anticommute", 0) + 1
        if lhs != rhs:
            return fail("anticommute", l, lhs, rhs)
    return rep


# -- classification --------------------------------------------------------------------------

@dataclass
class DualVerdict:
    status: str  # Valid | Invalid
    branch: str
    clause: Optional[str] = None
    witness: Optional[dict] = None
    p0: Optional[object] = None

    @property
    def valid(self) -> bool:
        return self.status == "Valid"

    def to_json(self) -> dict:
        out = {"status": self.status, "branch": self.branch}
        if self.p0 is not None:
            out["p0"] = str(self.p0)
        if self.clause is not None:
            out["clause"] = self.clause
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def _shape_p0(P: Poly):
    """p_0 when P = -Y + p_0, else None."""
    R = P.ring
    if P.degree() != 1 or P[1] != R.normalize(-1):
        return None
    return P[0]


def classify_dual(P: Poly, Q: Poly) -> DualVerdict:
    R = P.ring
    if Q.is_zero():
        return DualVerdict("Valid", "Q=0")
    p0 = _shape_p0(P)
    if p0 is None:
        return DualVerdict("Invalid", "shape", "P = -Y + p_0", {"P": P.to_str("Y")})
    m = Q.degree()
    if p0 == 0:
        for i in range(1, m + 1, 2):
            if Q[i] != 0:
                return DualVerdict("Invalid", "p0=0", "q_i = 0 for odd i",
                                   {"i": i, "q_i": str(Q[i])}, p0)
        return DualVerdict("Valid", "p0=0", p0=p0)
    for i in range(m + 1):
        lhs = R.zero
        for j in range(i, m + 1):
            term = R.mul(R.from_int(binomial(j, i)), R.mul(Q[j], R.pow(p0, j - i)))
            lhs = R.add(lhs, term)
        rhs = Q[i] if i % 2 == 0 else R.neg(Q[i])
        if lhs != rhs:
            return DualVerdict("Invalid", "p0!=0",
                               "sum_j C(j,i) q_j p_0^(j-i) = (-1)^i q_i",
                               {"i": i, "lhs": str(lhs), "rhs": str(rhs)}, p0)
    if m % 2 and R.kind in ("Q", "Z"):
        raise InternalError(f"valid pair with odd deg Q = {m}")
    return DualVerdict("Valid", "p0!=0", p0=p0)


# -- the coefficient matrix C ----------------------------------------------------------------

@dataclass(frozen=True)
class ClassificationMatrix:
    m: int
    rows: Tuple[Tuple[int, ...], ...]

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def apply(self, y: Sequence) -> List:
        return [sum((c * v for c, v in zip(row, y)), Fraction(0)) for row in self.rows]

    def to_json(self) -> dict:
        return {"m": self.m, "rows": [list(r) for r in self.rows]}


def _check_even(m: int):
    if m < 2 or m % 2:
        raise HypothesisError(f"m must be even and >= 2, got {m}", {"m": m})


def build_C_matrix(m: int) -> ClassificationMatrix:
    """c_ij = C(j, i) - (-1)^i [i = j], so that C y lists B(0), ..., B(m)."""
    _check_even(m)
    rows = tuple(tuple(binomial(j, i) - ((-1) ** i if i == j else 0) for j in range(m + 1))
                 for i in range(m + 1))
    return ClassificationMatrix(m, rows)


def column_identity(C: ClassificationMatrix, n: int, i: int) -> int:
    """sum_k (-1)^k c_{i, 2n-k} C(n, k); vanishes for n >= 1."""
    return sum((-1) ** k * C[i, 2 * n - k] * binomial(n, k) for k in range(n + 1))


@dataclass
class CSolution:
    m: int
    rank: int
    nullity: int
    basis: List[List[Fraction]]
    free: Tuple[int, ...]

    def to_json(self) -> dict:
        return {"m": self.m, "rank": self.rank, "nullity": self.nullity,
                "free": list(self.free), "basis": [[str(x) for x in v] for v in self.basis]}


def solve_C(m: int) -> CSolution:
    C = build_C_matrix(m)
    _, pivots = linalg.rref(C.rows)
    basis = linalg.nullspace(C.rows)
    free = tuple(j for j in range(m + 1) if j not in pivots)
    sol = CSolution(m, len(pivots), len(basis), basis, free)
    if sol.rank != m // 2 or sol.nullity != m // 2 + 1:
        raise InternalError(f"rank {sol.rank}, nullity {sol.nullity} for m={m}")
    return sol


def q_from_y(y: Sequence, p0) -> List[Fraction]:
    """q_i = y_i / p_0^i."""
    p0 = Fraction(p0)
    return [Fraction(v) / p0 ** i for i, v in enumerate(y)]


def rank_table(m_values) -> List[dict]:
    out = []
    for m in m_values:
        s = solve_C(m)
        out.append({"m": m, "rank": s.rank, "nullity": s.nullity})
    return out


# -- the flipped view as an alpha family -----------------------------------------------------

def to_alpha_view(P: Poly, Q: Poly) -> AlphaFamily:
    """Family on k[t]/(t^2) of the flip: Y (x) t -> sum_j (q_j + p_j t) (x) Y^j."""
    verdict = classify_dual(P, Q)
    if not verdict.valid:
        raise HypothesisError(f"(P, Q) is not a twisting pair: {verdict.clause}",
                              verdict.to_json())
    R = P.ring
    tables = {}
    top = max(P.degree() if not P.is_zero() else 0, Q.degree() if not Q.is_zero() else 0)
    for j in range(top + 1):
        cell = QuotPoly(R, 2, [Q[j], P[j]])
        if not cell.is_zero():
            tables[(j, 1)] = cell
    return AlphaFamily.from_tables(R, 2, tables,
                                   provenance={"builder": "dual_numbers",
                                               "P": P.to_str("Y"), "Q": Q.to_str("Y")})
