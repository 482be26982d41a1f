"""Twisted planes k[X] (x) k[Y]: shifts, root conditions, obstructions.

A plane is given by its defining matrix q, s(Y (x) X) = sum q_ij X^i (x) Y^j.
The shift by (lam, xi) conjugates s with X -> X - lam, Y -> Y - xi.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .coeffring import Ring, RingValue, binomial
from .errors import InternalError, StructuralError
from .polyalg import BiPoly, Poly, is_multiple_root, rational_root_candidates
from .twistcore import (AlphaFamily, VerificationReport, first_unbounded_cell,
                        verify_axioms)

ENUM_LIMIT = 10000


@dataclass(frozen=True)
class ShiftParams:
    lam: RingValue
    xi: RingValue

    @classmethod
    def of(cls, ring: Ring, lam, xi) -> "ShiftParams":
        return cls(ring.value(lam), ring.value(xi))

    def to_json(self) -> dict:
        return {"lambda": str(self.lam.raw), "xi": str(self.xi.raw)}


@dataclass
class Clause:
    name: str
    holds: bool
    lhs: str
    rhs: str

    def to_json(self) -> dict:
        return {"clause": self.name, "holds": self.holds, "lhs": self.lhs, "rhs": self.rhs}


@dataclass
class ConditionBreakdown:
    name: str
    clauses: List[Clause]
    advisory: bool = False

    @property
    def holds(self) -> bool:
        return all(c.holds for c in self.clauses)

    @property
    def failing(self) -> List[Clause]:
        return [c for c in self.clauses if not c.holds]

    def to_json(self) -> dict:
        return {"condition": self.name, "holds": self.holds, "advisory": self.advisory,
                "clauses": [c.to_json() for c in self.clauses]}


def _as_q(q, ring: Optional[Ring] = None) -> BiPoly:
    if isinstance(q, AlphaFamily):
        return q.q
    if isinstance(q, BiPoly):
        return q
    if ring is None:
        raise StructuralError("a ring is needed to read a raw q-matrix")
    return BiPoly(ring, q) if isinstance(q, dict) else BiPoly.from_triples(ring, q)


def row_col_polys(q) -> Tuple[Dict[int, Poly], Dict[int, Poly]]:
    """P_i(Z) = sum_n q_in Z^n (rows) and Q_j(Z) = sum_m q_mj Z^m (columns)."""
    q = _as_q(q)
    R = q.ring
    rows: Dict[int, Dict[int, object]] = {}
    cols: Dict[int, Dict[int, object]] = {}
    for (i, j), v in q.items():
        rows.setdefault(i, {})[j] = v
        cols.setdefault(j, {})[i] = v
    P = {i: Poly(R, d) for i, d in sorted(rows.items())}
    Q = {j: Poly(R, d) for j, d in sorted(cols.items())}
    return P, Q


def _get(polys: Dict[int, Poly], k: int, R: Ring) -> Poly:
    return polys.get(k, Poly.zero(R))


def _condition(name: str, polys: Dict[int, Poly], root, partner, R: Ring,
               var: str, other: str) -> ConditionBreakdown:
    """Clauses shared by both conditions, with (root, partner) = (xi, lam) or (lam, xi)."""
    p0 = _get(polys, 0, R)
    p1 = _get(polys, 1, R)
    z = R.normalize(root)
    w = R.normalize(partner)
    letter = "P" if var == "xi" else "Q"
    cl = [
        Clause(f"{letter}_0({var}) = 0", p0.evaluate(z) == 0, str(p0.evaluate(z)), "0"),
        Clause(f"{letter}_1({var}) = {var}", p1.evaluate(z) == z, str(p1.evaluate(z)), str(z)),
        Clause(f"{letter}'_0({var}) = {other}", p0.derivative().evaluate(z) == w,
               str(p0.derivative().evaluate(z)), str(w)),
        Clause(f"{letter}'_1({var}) = 0", p1.derivative().evaluate(z) == 0,
               str(p1.derivative().evaluate(z)), "0"),
    ]
    for k, p in sorted(polys.items()):
        if k > 1:
            cl.append(Clause(f"{var} multiple root of {letter}_{k}", is_multiple_root(p, z),
                             f"({p.evaluate(z)}, {p.derivative().evaluate(z)})", "(0, 0)"))
    return ConditionBreakdown(name, cl, advisory=not R.is_domain())


def check_condition_a(q, params: ShiftParams) -> ConditionBreakdown:
    """P_0(xi)=0, P_1(xi)=xi, P'_0(xi)=lam, P'_1(xi)=0, xi multiple root of P_i (i>1)."""
    q = _as_q(q)
    P, _ = row_col_polys(q)
    return _condition("a", P, params.xi, params.lam, q.ring, "xi", "lambda")


def check_condition_b(q, params: ShiftParams) -> ConditionBreakdown:
    """Q_0(lam)=0, Q_1(lam)=lam, Q'_0(lam)=xi, Q'_1(lam)=0, lam multiple root of Q_j (j>1)."""
    q = _as_q(q)
    _, Q = row_col_polys(q)
    return _condition("b", Q, params.lam, params.xi, q.ring, "lambda", "xi")


# -- shift equivalence ---------------------------------------------------------------------

def _shift_generic(fam: AlphaFamily, lam, xi) -> BiPoly:
    # s'((Y - xi) (x) (X - lam)) by linearity, then X -> X + lam, Y -> Y + xi.
    R = fam.ring
    x = Poly.monomial(R, 1)
    one = Poly.const(R, 1)
    val = (fam.eval_s(1, x) - fam.eval_s(1, one).scale(lam)
           - fam.eval_s(0, x).scale(xi) + fam.eval_s(0, one).scale(R.mul(lam, xi)))
    return val.shift(lam, xi)


def _shift_closed(q: BiPoly, lam, xi) -> BiPoly:
    R = q.ring
    out: Dict[Tuple[int, int], object] = {}
    for (m, n), v in q.items():
        for i in range(m + 1):
            for j in range(n + 1):
                c = R.mul(R.from_int(binomial(m, i) * binomial(n, j)),
                          R.mul(R.pow(lam, m - i), R.pow(xi, n - j)))
                out[(i, j)] = R.add(out.get((i, j), R.zero), R.mul(c, v))
    res = BiPoly(R, out)
    correction = BiPoly(R, {(1, 0): xi, (0, 1): lam}) + BiPoly(R, {(0, 0): R.mul(lam, xi)})
    return res - correction


def shift_matrix(q, lam, xi, ring: Optional[Ring] = None) -> BiPoly:
    """Defining matrix of (g^-1 (x) f^-1) o s' o (f (x) g), computed two ways."""
    q = _as_q(q, ring)
    R = q.ring
    lam, xi = R.normalize(lam), R.normalize(xi)
    fam = AlphaFamily.from_q(R, q)
    generic = _shift_generic(fam, lam, xi)
    closed = _shift_closed(q, lam, xi)
    if generic != closed:
        raise InternalError(f"shift mismatch: generic {generic} vs closed {closed}")
    return closed


def shift_equivalence(fam_prime, params: ShiftParams) -> AlphaFamily:
    q = _as_q(fam_prime)
    return AlphaFamily.from_q(q.ring, shift_matrix(q, params.lam, params.xi))


def has_null_support(q: BiPoly) -> bool:
    """q_ij = 0 whenever i <= 1 or j <= 1."""
    return all(i >= 2 and j >= 2 for (i, j), _ in q.items())


# -- classification ------------------------------------------------------------------------

def _roots(p: Poly) -> List:
    R = p.ring
    if R.kind == "mod":
        if R.modulus > ENUM_LIMIT:
            return []
        return [x for x in range(R.modulus) if p.evaluate(x) == 0]
    return [r.raw for r in rational_root_candidates(p)]


def _first_roots(polys: List[Poly]) -> Optional[List]:
    for p in polys:
        if not p.is_zero():
            return _roots(p)
    return None


def candidate_pairs(q: BiPoly) -> List[Tuple[object, object]]:
    """Candidate (lam, xi) pairs, sorted lexicographically."""
    R = q.ring
    P, Q = row_col_polys(q)
    z = Poly.monomial(R, 1)
    P0, P1, Q0, Q1 = (_get(P, 0, R), _get(P, 1, R), _get(Q, 0, R), _get(Q, 1, R))
    xi_list = _first_roots([P0, P1 - z] + [p for k, p in sorted(P.items()) if k > 1])
    lam_list = _first_roots([Q0, Q1 - z] + [p for k, p in sorted(Q.items()) if k > 1])
    xi_list = [R.zero] if xi_list is None else xi_list
    lam_list = [R.zero] if lam_list is None else lam_list
    pairs = set()
    for xi in xi_list:
        pairs.add((P0.derivative().evaluate(xi), xi))
    for lam in lam_list:
        pairs.add((lam, Q0.derivative().evaluate(lam)))
    for lam in lam_list:
        for xi in xi_list:
            pairs.add((lam, xi))
    return sorted(pairs)


@dataclass
class PlaneVerdict:
    status: str  # AlmostNull | ObstructedUpper | ObstructedLower | Unknown
    params: Optional[ShiftParams] = None
    condition_a: Optional[ConditionBreakdown] = None
    condition_b: Optional[ConditionBreakdown] = None
    shifted: Optional[BiPoly] = None
    candidates: int = 0

    def to_json(self) -> dict:
        out = {"status": self.status, "candidates": self.candidates}
        if self.params is not None:
            out["params"] = self.params.to_json()
        if self.condition_a is not None:
            out["condition_a"] = self.condition_a.to_json()
        if self.condition_b is not None:
            out["condition_b"] = self.condition_b.to_json()
        if self.shifted is not None:
            out["shifted_q"] = self.shifted.to_json()["coeffs"]
        return out


def classify_almost_null(q, ring: Optional[Ring] = None) -> PlaneVerdict:
    q = _as_q(q, ring)
    R = q.ring
    pairs = candidate_pairs(q)
    evaluated = []
    for lam, xi in pairs:
        params = ShiftParams.of(R, lam, xi)
        a = check_condition_a(q, params)
        b = check_condition_b(q, params)
        evaluated.append((params, a, b))
        if a.holds and b.holds:
            shifted = shift_matrix(q, lam, xi)
            return PlaneVerdict("AlmostNull", params, a, b, shifted, len(pairs))
    for status, want_a, want_b in (("ObstructedUpper", True, False),
                                   ("ObstructedLower", False, True)):
        for params, a, b in evaluated:
            if a.holds == want_a and b.holds == want_b:
                return PlaneVerdict(status, params, a, b, None, len(pairs))
    return PlaneVerdict("Unknown", candidates=len(pairs))


def detect_obstruction(q, N: int = 10, n0_bound: Optional[int] = None, side: str = "upper",
                       search_bound: Optional[int] = None,
                       ring: Optional[Ring] = None) -> VerificationReport:
    """Finite-degree evidence against a bounded twisting map with defining matrix q.

    First the axioms are checked up to degree N.  Then, since the map is unique
    when it exists, a nonzero cell alpha_n(X^m) with n >= n0_bound and m <= N
    rules out every upper bounded map whose threshold is at most n0_bound.
    ``side="lower"`` runs the same scan on the transposed matrix.
    """
    q = _as_q(q, ring)
    if side not in ("upper", "lower"):
        raise StructuralError("side must be 'upper' or 'lower'")
    fam = AlphaFamily.from_q(q.ring, q if side == "upper" else q.transpose())
    n0 = N if n0_bound is None else n0_bound
    top = search_bound if search_bound is not None else n0 + 4 * N
    rep = verify_axioms(fam, N)
    if rep.refuted:
        return rep
    if fam.col_bound is not None and fam.col_bound < n0:
        rep.notes.append(f"alpha_n = 0 for n > {fam.col_bound} is certified")
        return rep
    try:
        w = first_unbounded_cell(fam, n0, N, top)
    except Exception as exc:  # ExtensionError
        rep.status = "Inconclusive"
        rep.notes.append(str(exc))
        return rep
    if w is not None:
        w["side"] = side
        w["n0_bound"] = n0
        rep.status = "Refuted"
        rep.witness = w
        rep.notes.append(f"no {side} bounded map with threshold <= {n0}")
    else:
        rep.notes.append(f"alpha_n(X^m) = 0 for {n0} <= n <= {top}, m <= {N}")
    return rep
