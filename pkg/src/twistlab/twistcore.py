"""Twisting maps s: k[Y] (x) A -> A (x) k[Y] described by their alpha-family.

A map of this kind is fixed by s(Y (x) a) = sum_j alpha_j(a) (x) Y^j.  Higher
powers of Y act through

    s(Y^r (x) a) = sum_j gamma_j^(r)(a) (x) Y^j,

where gamma_j^(r) is the sum of all r-fold compositions alpha_{n1} o ... o
alpha_{nr} with n1 + ... + nr = j.  For A = k[X] the family is determined by
the images alpha_j(X) (the q-matrix) and the split rule

    alpha_j(ab) = sum_r alpha_r(a) gamma_j^(r)(b),

applied with b = X.  For A = k[t]/(t^n) the caller supplies full action
tables alpha_j(t^m), 1 <= m < n.

Cells are computed lazily and memoized.  ``extend`` fills a rectangle eagerly.
"""

from __future__ import annotations

import itertools
import sys
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple, Union

from .coeffring import Ring
from .errors import ExtensionError, StructuralError
from .polyalg import BiPoly, Poly, QuotPoly, poly_from_json

DEFAULT_DEGREE = 10
DEFAULT_J_CAP = 32

# The recursion depth grows with j and m; the default limit is too tight.
if sys.getrecursionlimit() < 20000:
    sys.setrecursionlimit(20000)


@dataclass(frozen=True)
class PolyBase:
    """A = k[X]."""

    def to_json(self):
        return "polyX"

    @property
    def nilpotent_order(self):
        return None


@dataclass(frozen=True)
class QuotBase:
    """A = k[t]/(t^n)."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise StructuralError("quotient order must be >= 1")

    def to_json(self):
        return {"quot": self.n}

    @property
    def nilpotent_order(self):
        return self.n


Base = Union[PolyBase, QuotBase]


def base_from_json(data) -> Base:
    if data in ("polyX", "poly", None):
        return PolyBase()
    if isinstance(data, dict) and "quot" in data:
        return QuotBase(int(data["quot"]))
    raise StructuralError(f"bad base descriptor {data!r}")


Elem = Union[Poly, QuotPoly]
Cell = Tuple[int, int]


class AlphaFamily:
    """Defining data plus memoized extension tables.

    ``defining`` maps (j, m) to alpha_j(gen^m).  For k[X] only m = 1 is
    given; for k[t]/(t^n) every 1 <= m < n is given (absent cells are zero).
    ``overrides`` replaces individual cells after the fact, which is how
    mutation tests corrupt a family.  ``col_bound`` is a certified bound J
    with alpha_j = 0 for all j > J, when one is known.
    """

    def __init__(self, ring: Ring, base: Base, defining: Dict[Cell, Elem],
                 overrides: Optional[Dict[Cell, Elem]] = None,
                 col_bound: Optional[int] = None,
                 j_cap: int = DEFAULT_J_CAP,
                 provenance: Optional[dict] = None):
        self.ring = ring
        self.base = base
        self.defining = {}
        for (j, m), v in defining.items():
            if j < 0 or m < 1:
                raise StructuralError(f"bad defining cell {(j, m)}")
            if isinstance(base, PolyBase) and m != 1:
                raise StructuralError("k[X] families are defined by alpha_j(X) only")
            v = self._coerce(v)
            if isinstance(base, QuotBase) and m >= base.n:
                if not v.is_zero():
                    raise StructuralError(f"t^{m} = 0 but alpha_{j}(t^{m}) != 0")
                continue
            if not v.is_zero():
                self.defining[(j, m)] = v
        self.overrides = {k: self._coerce(v) for k, v in (overrides or {}).items()}
        self.j_cap = j_cap
        self.provenance = dict(provenance or {})
        J = max((j for j, _ in self.defining), default=0)
        self.max_col = J
        self.alpha0_zero = not any(j == 0 for j, _ in self.defining)
        if col_bound is None and (isinstance(base, QuotBase) or J <= 1):
            # Quot tables are complete; for k[X] with J <= 1 the map is an
            # Ore extension and s(Y (x) a) stays linear in Y.
            col_bound = max(J, 1)
        self.col_bound = col_bound
        self._alpha: Dict[Cell, Elem] = {}
        self._gamma: Dict[Tuple[int, int, int], Elem] = {}
        self._busy = set()
        self.extension_bound = 0

    # construction --------------------------------------------------------------
    @classmethod
    def from_q(cls, ring: Ring, q, **kw) -> "AlphaFamily":
        """k[X] family with alpha_j(X) = sum_i q[i, j] X^i.

        ``q`` is a BiPoly, a dict {(i, j): value} or a list of [i, j, value].
        """
        if not isinstance(q, BiPoly):
            if isinstance(q, dict):
                q = BiPoly(ring, q)
            else:
                q = BiPoly.from_triples(ring, q)
        if q.ring != ring:
            raise StructuralError("q-matrix ring differs from family ring")
        defining = {(j, 1): col for j, col in q.columns().items()}
        return cls(ring, PolyBase(), defining, **kw)

    @classmethod
    def from_tables(cls, ring: Ring, n: int, tables: Dict[Cell, object], **kw) -> "AlphaFamily":
        """k[t]/(t^n) family from alpha_j(t^m) tables."""
        base = QuotBase(n)
        defining = {}
        for (j, m), v in tables.items():
            if isinstance(v, Poly):
                v = QuotPoly.from_poly(v, n)
            defining[(j, m)] = v
        return cls(ring, base, defining, **kw)

    def _coerce(self, v) -> Elem:
        if isinstance(self.base, PolyBase):
            if isinstance(v, Poly):
                return v
            raise StructuralError(f"expected Poly, got {type(v).__name__}")
        n = self.base.n
        if isinstance(v, Poly):
            return QuotPoly.from_poly(v, n)
        if isinstance(v, QuotPoly):
            if v.n != n:
                raise StructuralError(f"order mismatch {v.n} vs {n}")
            return v
        raise StructuralError(f"expected QuotPoly, got {type(v).__name__}")

    def with_overrides(self, overrides: Dict[Cell, Elem]) -> "AlphaFamily":
        merged = dict(self.overrides)
        merged.update(overrides)
        return AlphaFamily(self.ring, self.base, self.defining, merged,
                           self.col_bound, self.j_cap, self.provenance)

    # basic elements ------------------------------------------------------------
    @property
    def is_quot(self) -> bool:
        return isinstance(self.base, QuotBase)

    def zero(self) -> Elem:
        if self.is_quot:
            return QuotPoly.zero(self.ring, self.base.n)
        return Poly.zero(self.ring)

    def mono(self, m: int, c=1) -> Elem:
        if self.is_quot:
            return QuotPoly.monomial(self.ring, self.base.n, m, c)
        return Poly.monomial(self.ring, m, c)

    def elem(self, p) -> Elem:
        return self._coerce(p)

    @property
    def q(self) -> BiPoly:
        """Coefficient matrix of alpha_j(gen), as sum q_ij X^i (x) Y^j."""
        return BiPoly.from_columns(self.ring, {j: self.defining[(j, 1)].to_poly()
                                               if self.is_quot else self.defining[(j, 1)]
                                               for j, m in self.defining if m == 1})

    def dimension(self) -> Optional[int]:
        return self.base.n if self.is_quot else None

    # cells ----------------------------------------------------------------------
    def alpha_cell(self, j: int, m: int) -> Elem:
        """alpha_j(X^m)."""
        key = (j, m)
        if key in self.overrides:
            return self.overrides[key]
        hit = self._alpha.get(key)
        if hit is not None:
            return hit
        if j < 0:
            return self.zero()
        if m == 0:
            val = self.mono(0) if j == 1 else self.zero()
        elif self.col_bound is not None and j > self.col_bound:
            val = self.zero()
        elif self.is_quot:
            val = self.defining.get(key) if m < self.base.n else None
            if val is None:
                val = self.zero()
        elif m == 1:
            val = self.defining.get(key) or self.zero()
        else:
            if key in self._busy:
                raise ExtensionError(f"recursion for alpha_{j}(X^{m}) is not well founded")
            self._busy.add(key)
            try:
                val = self.zero()
                for r in self._r_range(j):
                    a = self.alpha_cell(r, m - 1)
                    if a.is_zero():
                        continue
                    g = self.gamma_cell(j, r, 1)
                    if not g.is_zero():
                        val = val + a * g
            finally:
                self._busy.discard(key)
        self._alpha[key] = val
        return val

    def _r_range(self, j: int) -> range:
        # With alpha_0 = 0, gamma_j^(r) vanishes for r > j.
        if self.alpha0_zero:
            hi = j if self.col_bound is None else min(j, self.col_bound)
            return range(1, hi + 1)
        hi = self.col_bound if self.col_bound is not None else self.j_cap
        return range(0, hi + 1)

    def _l_range(self, j: int, r: int) -> range:
        lo = 1 if self.alpha0_zero else 0
        hi = j - (r - 1) if self.alpha0_zero else j
        if self.col_bound is not None:
            hi = min(hi, self.col_bound)
        return range(lo, hi + 1)

    def apply_alpha(self, j: int, a: Elem) -> Elem:
        """alpha_j applied to an arbitrary element, by linearity."""
        out = self.zero()
        for k, c in a.terms():
            cell = self.alpha_cell(j, k)
            if not cell.is_zero():
                out = out + cell.scale(c)
        return out

    def gamma_cell(self, j: int, r: int, m: int) -> Elem:
        """gamma_j^(r)(X^m)."""
        if j < 0 or r < 0:
            return self.zero()
        if r == 0:
            return self.mono(m) if j == 0 else self.zero()
        if r == 1:
            return self.alpha_cell(j, m)
        key = (j, r, m)
        hit = self._gamma.get(key)
        if hit is not None:
            return hit
        if self.alpha0_zero and j < r:
            val = self.zero()
        elif self.col_bound is not None and j > r * self.col_bound:
            val = self.zero()
        else:
            val = self.zero()
            for l in self._l_range(j, r):
                inner = self.gamma_cell(j - l, r - 1, m)
                if not inner.is_zero():
                    val = val + self.apply_alpha(l, inner)
        self._gamma[key] = val
        return val

    def gamma(self, j: int, r: int, a) -> Elem:
        """gamma_j^(r)(a) by linearity over the monomials of a."""
        a = self._coerce(a)
        out = self.zero()
        for k, c in a.terms():
            g = self.gamma_cell(j, r, k)
            if not g.is_zero():
                out = out + g.scale(c)
        return out

    def extend(self, m_max: int, j_max: int) -> "AlphaFamily":
        """Populate alpha and gamma cells for m <= m_max, j <= j_max."""
        top = m_max if not self.is_quot else min(m_max, self.base.n - 1)
        for m in range(0, top + 1):
            for j in range(0, j_max + 1):
                self.alpha_cell(j, m)
        for m in range(0, top + 1):
            for r in range(0, j_max + 1):
                for j in range(0, j_max + 1):
                    self.gamma_cell(j, r, m)
        self.extension_bound = max(self.extension_bound, top)
        return self

    # support ---------------------------------------------------------------------
    def y_support(self, r: int, m: int) -> range:
        """Range of j that can carry gamma_j^(r)(X^m) != 0.

        Exact when a column bound is known; otherwise bounded by ``j_cap``
        with a guard band that must be empty.
        """
        lo = r if self.alpha0_zero else 0
        if self.col_bound is not None:
            return range(lo, r * self.col_bound + 1)
        hi = self.j_cap
        guard = max(1, self.j_cap // 4)
        for j in range(hi - guard + 1, hi + 1):
            if not self.gamma_cell(j, r, m).is_zero():
                raise ExtensionError(
                    f"s(Y^{r} (x) X^{m}) has support reaching j={j}; "
                    f"raise j_cap (currently {self.j_cap})")
        return range(lo, hi - guard + 1)

    # the twisting map ------------------------------------------------------------
    def eval_s(self, r: int, a) -> BiPoly:
        """s(Y^r (x) a) as sum gamma_j^(r)(a) (x) Y^j."""
        a = self._coerce(a)
        R = self.ring
        c: Dict[Tuple[int, int], object] = {}
        for k, coef in a.terms():
            for j in self.y_support(r, k):
                g = self.gamma_cell(j, r, k)
                for i, v in g.terms():
                    c[(i, j)] = R.add(c.get((i, j), R.zero), R.mul(v, coef))
        return BiPoly(R, c)

    def mul_twisted(self, u: BiPoly, v: BiPoly) -> BiPoly:
        """(X^a (x) Y^b)(X^c (x) Y^d) = X^a s(Y^b (x) X^c) Y^d, extended bilinearly."""
        R = self.ring
        n = self.base.n if self.is_quot else None
        out: Dict[Tuple[int, int], object] = {}
        cache: Dict[Tuple[int, int], BiPoly] = {}
        for (a, b), x in u.items():
            for (cc, d), y in v.items():
                key = (b, cc)
                if key not in cache:
                    cache[key] = self.eval_s(b, self.mono(cc))
                xy = R.mul(x, y)
                for (i, j), z in cache[key].items():
                    ii = i + a
                    if n is not None and ii >= n:
                        continue
                    k = (ii, j + d)
                    out[k] = R.add(out.get(k, R.zero), R.mul(xy, z))
        return BiPoly(R, out)

    # serialization ---------------------------------------------------------------
    def to_json(self) -> dict:
        data = {"base": self.base.to_json(), "ring": self.ring.to_json()}
        if self.is_quot:
            tables: Dict[str, Dict[str, dict]] = {}
            for (j, m), v in sorted(self.defining.items()):
                tables.setdefault(str(j), {})[str(m)] = v.to_poly().to_json()["coeffs"]
            data["alpha_tables"] = tables
        else:
            data["q"] = self.q.to_json()["coeffs"]
        if self.overrides:
            data["overrides"] = [[j, m, v.to_poly().to_json()["coeffs"] if self.is_quot
                                  else v.to_json()["coeffs"]]
                                 for (j, m), v in sorted(self.overrides.items())]
        if self.col_bound is not None:
            data["col_bound"] = self.col_bound
        return data

    @classmethod
    def from_json(cls, data: dict) -> "AlphaFamily":
        ring = Ring.from_json(data.get("ring", "Q"))
        base = base_from_json(data.get("base", "polyX"))
        kw = {}
        if "j_cap" in data:
            kw["j_cap"] = int(data["j_cap"])
        if isinstance(base, PolyBase):
            if "q" not in data:
                raise StructuralError("k[X] family needs field 'q'")
            fam = cls.from_q(ring, BiPoly.from_json(ring, data["q"]), **kw)
        else:
            if "alpha_tables" not in data:
                raise StructuralError("quotient family needs field 'alpha_tables'")
            tables = {}
            for j, row in data["alpha_tables"].items():
                for m, p in row.items():
                    tables[(int(j), int(m))] = Poly.from_json(ring, p)
            fam = cls.from_tables(ring, base.n, tables, **kw)
        if data.get("overrides"):
            ov = {(int(j), int(m)): fam._coerce(Poly.from_json(ring, p))
                  for j, m, p in data["overrides"]}
            fam = fam.with_overrides(ov)
        return fam

    def __repr__(self):
        kind = f"Quot({self.base.n})" if self.is_quot else "PolyX"
        return f"AlphaFamily({kind}, {self.ring}, cells={len(self.defining)})"


# -- verification -------------------------------------------------------------------

@dataclass
class VerificationReport:
    status: str  # "Verified" | "Refuted" | "Inconclusive"
    degree_bound: int
    witness: Optional[dict] = None
    checks: Dict[str, int] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    @property
    def verified(self) -> bool:
        return self.status == "Verified"

    @property
    def refuted(self) -> bool:
        return self.status == "Refuted"

    def to_json(self) -> dict:
        out = {"status": self.status, "degree_bound": self.degree_bound,
               "checks": dict(sorted(self.checks.items()))}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def _ejson(v) -> dict:
    if isinstance(v, QuotPoly):
        return v.to_poly().to_json()["coeffs"]
    if isinstance(v, BiPoly):
        return v.to_json()["coeffs"]
    return v.to_json()["coeffs"]


def _split_rhs(fam: AlphaFamily, j: int, u: int, v: int) -> Elem:
    """sum_r alpha_r(X^u) gamma_j^(r)(X^v)."""
    out = fam.zero()
    for r in fam._r_range(j):
        a = fam.alpha_cell(r, u)
        if a.is_zero():
            continue
        g = fam.gamma_cell(j, r, v)
        if not g.is_zero():
            out = out + a * g
    return out


def _split_lhs(fam: AlphaFamily, j: int, u: int, v: int) -> Elem:
    m = u + v
    if fam.is_quot and m >= fam.base.n:
        return fam.zero()
    return fam.alpha_cell(j, m)


def default_j_check(fam: AlphaFamily, N: int) -> int:
    if fam.col_bound is not None:
        return fam.col_bound
    return min(2 * N, fam.j_cap)


def verify_axioms(fam: AlphaFamily, N: int = DEFAULT_DEGREE,
                  j_check: Optional[int] = None, assoc_degree: int = 2) -> VerificationReport:
    """Exact check of the twisting axioms on monomials up to degree N.

    Order of checks: unit laws, multiplicativity in Y, split consistency
    alpha_j(X^(u+v)) = sum_r alpha_r(X^u) gamma_j^(r)(X^v), then triple
    associativity of the twisted product on small monomials.
    """
    if j_check is None:
        j_check = default_j_check(fam, N)
    rep = VerificationReport("Verified", N)
    rep.checks = {"unit": 0, "y_mult": 0, "split": 0, "assoc": 0}
    rep.notes.append(f"alpha_j checked for j <= {j_check}")
    try:
        w = _check_units(fam, j_check, rep)
        if w is None:
            w = _check_y_mult(fam, N, j_check, rep)
        if w is None:
            w = _check_splits(fam, N, j_check, rep)
        if w is None:
            w = _check_assoc(fam, min(N, assoc_degree), rep)
    except ExtensionError as exc:
        rep.status = "Inconclusive"
        rep.notes.append(str(exc))
        return rep
    if w is not None:
        rep.status = "Refuted"
        rep.witness = w
    return rep


def _check_units(fam, j_check, rep):
    one = fam.mono(0)
    for j in range(0, j_check + 1):
        lhs = fam.alpha_cell(j, 0)
        rhs = one if j == 1 else fam.zero()
        rep.checks["unit"] += 1
        if lhs != rhs:
            return {"kind": "unit", "j": j, "m": 0, "lhs": _ejson(lhs), "rhs": _ejson(rhs)}
    # s(Y^r (x) 1) = 1 (x) Y^r
    for r in range(0, 4):
        for j in range(0, min(j_check * max(r, 1), 3 * j_check) + 1):
            lhs = fam.gamma_cell(j, r, 0)
            rhs = one if j == r else fam.zero()
            rep.checks["unit"] += 1
            if lhs != rhs:
                return {"kind": "unit_y", "j": j, "r": r, "m": 0,
                        "lhs": _ejson(lhs), "rhs": _ejson(rhs)}
    return None


def _check_y_mult(fam, N, j_check, rep):
    top = min(N, 3) if not fam.is_quot else min(N, fam.base.n - 1)
    jt = min(j_check, 6)
    for r1 in (1, 2):
        for r2 in (1, 2):
            for m in range(0, top + 1):
                x = fam.mono(m)
                for j in range(0, jt + 1):
                    lhs = fam.gamma_cell(j, r1 + r2, m)
                    rhs = fam.zero()
                    for i in range(0, j + 1):
                        inner = fam.gamma(j - i, r2, x)
                        if not inner.is_zero():
                            rhs = rhs + fam.gamma(i, r1, inner)
                    rep.checks["y_mult"] += 1
                    if lhs != rhs:
                        return {"kind": "y_mult", "j": j, "r1": r1, "r2": r2, "m": m,
                                "lhs": _ejson(lhs), "rhs": _ejson(rhs)}
    return None


def split_pairs(fam: AlphaFamily, N: int) -> Iterable[Tuple[int, int]]:
    if fam.is_quot:
        n = fam.base.n
        return [(u, v) for u in range(1, n) for v in range(1, n)]
    return [(u, m - u) for m in range(2, N + 1) for u in range(1, m)]


def _check_splits(fam, N, j_check, rep):
    for u, v in split_pairs(fam, N):
        for j in range(0, j_check + 1):
            lhs = _split_lhs(fam, j, u, v)
            rhs = _split_rhs(fam, j, u, v)
            rep.checks["split"] += 1
            if lhs != rhs:
                return {"kind": "split", "j": j, "u": u, "v": v,
                        "lhs": _ejson(lhs), "rhs": _ejson(rhs)}
    return None


def _monomials(fam, deg):
    top_x = deg if not fam.is_quot else min(deg, fam.base.n - 1)
    return [(a, b) for a in range(top_x + 1) for b in range(deg + 1) if a + b <= deg]


def _check_assoc(fam, deg, rep):
    R = fam.ring
    mons = _monomials(fam, deg)
    for (a, b), (c, d), (e, f) in itertools.product(mons, repeat=3):
        x = BiPoly.monomial(R, a, b)
        y = BiPoly.monomial(R, c, d)
        z = BiPoly.monomial(R, e, f)
        lhs = fam.mul_twisted(fam.mul_twisted(x, y), z)
        rhs = fam.mul_twisted(x, fam.mul_twisted(y, z))
        rep.checks["assoc"] += 1
        if lhs != rhs:
            return {"kind": "assoc", "monomials": [[a, b], [c, d], [e, f]],
                    "lhs": _ejson(lhs), "rhs": _ejson(rhs)}
    return None


def replay_witness(fam: AlphaFamily, witness: dict) -> Tuple[object, object]:
    """Recompute both sides of a witness; they differ iff the refutation stands."""
    kind = witness["kind"]
    if kind == "unit":
        j = witness["j"]
        return fam.alpha_cell(j, 0), (fam.mono(0) if j == 1 else fam.zero())
    if kind == "unit_y":
        j, r = witness["j"], witness["r"]
        return fam.gamma_cell(j, r, 0), (fam.mono(0) if j == r else fam.zero())
    if kind == "split":
        j, u, v = witness["j"], witness["u"], witness["v"]
        return _split_lhs(fam, j, u, v), _split_rhs(fam, j, u, v)
    if kind == "y_mult":
        j, r1, r2, m = witness["j"], witness["r1"], witness["r2"], witness["m"]
        rhs = fam.zero()
        for i in range(0, j + 1):
            inner = fam.gamma(j - i, r2, fam.mono(m))
            if not inner.is_zero():
                rhs = rhs + fam.gamma(i, r1, inner)
        return fam.gamma_cell(j, r1 + r2, m), rhs
    if kind == "assoc":
        R = fam.ring
        x, y, z = (BiPoly.monomial(R, a, b) for a, b in witness["monomials"])
        return (fam.mul_twisted(fam.mul_twisted(x, y), z),
                fam.mul_twisted(x, fam.mul_twisted(y, z)))
    if kind == "unbounded":
        return fam.alpha_cell(witness["n"], witness["m"]), fam.zero()
    raise StructuralError(f"unknown witness kind {kind!r}")


def witness_replays(fam: AlphaFamily, witness: dict) -> bool:
    lhs, rhs = replay_witness(fam, witness)
    return lhs != rhs


# -- flip and boundedness ------------------------------------------------------------

def flip_transpose(fam: AlphaFamily) -> AlphaFamily:
    """Family whose q-matrix is the transpose of ``fam``'s."""
    if fam.is_quot:
        raise StructuralError("flip_transpose needs both factors polynomial")
    return AlphaFamily.from_q(fam.ring, fam.q.transpose(), j_cap=fam.j_cap)


@dataclass
class BoundednessVerdict:
    status: str  # "Bounded" | "Unbounded" | "Unknown"
    n0: Optional[int] = None
    certified: bool = False
    witness: Optional[dict] = None
    search_bound: int = 0
    degree_bound: int = 0

    def to_json(self) -> dict:
        out = {"status": self.status, "certified": self.certified,
               "search_bound": self.search_bound, "degree_bound": self.degree_bound}
        if self.n0 is not None:
            out["n0"] = self.n0
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def first_unbounded_cell(fam: AlphaFamily, n0: int, degree_bound: int,
                         search_bound: int) -> Optional[dict]:
    """First (by degree, then index) cell alpha_n(X^m) != 0 with n >= n0."""
    for m in range(1, degree_bound + 1):
        for n in range(n0, search_bound + 1):
            cell = fam.alpha_cell(n, m)
            if not cell.is_zero():
                return {"kind": "unbounded", "n": n, "m": m, "value": _ejson(cell)}
    return None


def is_upper_bounded(fam: AlphaFamily, search_bound: int = 24,
                     degree_bound: int = DEFAULT_DEGREE) -> BoundednessVerdict:
    """Evidence for alpha_n = 0 for all n >= n0.

    A known column bound certifies the answer.  Otherwise every cell
    alpha_n(X^m) with m <= degree_bound, n <= search_bound is computed: a
    vanishing upper half gives an uncertified Bounded(n0); a nonzero cell in
    the upper half gives Unbounded with that cell as witness.
    """
    if fam.col_bound is not None:
        return BoundednessVerdict("Bounded", fam.col_bound + 1, True, None,
                                  search_bound, degree_bound)
    half = search_bound // 2
    try:
        w = first_unbounded_cell(fam, half + 1, degree_bound, search_bound)
        if w is not None:
            return BoundednessVerdict("Unbounded", None, False, w, search_bound, degree_bound)
        top = 0
        for m in range(0, degree_bound + 1):
            for n in range(0, half + 1):
                if not fam.alpha_cell(n, m).is_zero():
                    top = max(top, n)
    except ExtensionError:
        return BoundednessVerdict("Unknown", None, False, None, search_bound, degree_bound)
    return BoundednessVerdict("Bounded", top + 1, False, None, search_bound, degree_bound)


def is_lower_bounded(fam: AlphaFamily, search_bound: int = 24,
                     degree_bound: int = DEFAULT_DEGREE) -> BoundednessVerdict:
    return is_upper_bounded(flip_transpose(fam), search_bound, degree_bound)


def family_from_monomial_tables(fam: AlphaFamily, m_max: int, j_max: int) -> Dict[Cell, Elem]:
    """Snapshot of the nonzero extension cells, for comparisons between builds."""
    fam.extend(m_max, j_max)
    out = {}
    top = m_max if not fam.is_quot else min(m_max, fam.base.n - 1)
    for m in range(0, top + 1):
        for j in range(0, j_max + 1):
            c = fam.alpha_cell(j, m)
            if not c.is_zero():
                out[(j, m)] = c
    return out


def parse_elem(fam: AlphaFamily, data) -> Elem:
    return fam.elem(poly_from_json(fam.ring, data) if not isinstance(data, (Poly, QuotPoly)) else data)
