"""Twisting maps k[[Y]] (x) A -> A (x) k[[Y]] for A = k[[X]], by bi-truncation.

Every value is an element of k[[X]] mod X^p for an explicit order p.  Cells
alpha_j(X^n) are computed on demand at whatever order a caller needs and
memoized at the highest order seen.

Applying alpha_l to a series known mod X^q gives a result known mod
X^(q - loss(l)).  For the matrix construction (alpha_0 = 0, a_01 nilpotent of
index e) every alpha_l(X^n) with n >= l lies in X^(n - l - e + 2) k[[X]], so
loss(l) = l + e - 2.  Tower families act through filtration preserving maps
and lose nothing.
"""

from __future__ import annotations

import itertools
from math import gcd
from typing import Dict, Iterable, Optional, Tuple

from .builders import all_compositions, compositions
from .coeffring import Ring
from .errors import ExtensionError, HypothesisError, StructuralError
from .polyalg import BiPoly, Poly, QuotPoly, TruncPoly
from .twistcore import VerificationReport

Cell = Tuple[int, int]


def _series(ring: Ring, x, order: int) -> TruncPoly:
    """Coerce a Poly / TruncPoly / QuotPoly to a TruncPoly of the given order."""
    if isinstance(x, TruncPoly):
        if x.ring != ring:
            raise StructuralError("series over a different ring")
        if x.n < order:
            raise ExtensionError(f"extend first: series known mod X^{x.n}, need X^{order}")
        return x.reduce(order)
    if isinstance(x, QuotPoly):
        x = x.to_poly()
    if isinstance(x, Poly):
        if x.ring != ring:
            raise StructuralError("series over a different ring")
        return TruncPoly.from_poly(x, order)
    raise StructuralError(f"expected a series, got {type(x).__name__}")


def _as_matrix(a, ring: Optional[Ring]) -> BiPoly:
    if isinstance(a, BiPoly):
        return a
    if ring is None:
        raise StructuralError("a ring is needed to read a raw coefficient matrix")
    return BiPoly(ring, a) if isinstance(a, dict) else BiPoly.from_triples(ring, a)


class TruncatedAlphaFamily:
    """alpha_j(X^n) for 1 <= j <= ny, 0 <= n <= nx, reduced mod X^nx.

    ``a`` is the coefficient matrix (a[i, j] = coefficient of X^i in
    alpha_j(X)) for matrix families; tower families carry a ``tower``
    instead.  ``flipped`` marks a family that describes the flipped map.
    """

    def __init__(self, ring: Ring, nx: int, ny: int, a: Optional[BiPoly] = None,
                 e: int = 1, tower: Optional["SeriesTower"] = None,
                 overrides: Optional[Dict[Cell, TruncPoly]] = None, flipped: bool = False):
        if nx < 1 or ny < 1:
            raise StructuralError("truncation orders must be >= 1")
        if (a is None) == (tower is None):
            raise StructuralError("give exactly one of a coefficient matrix or a tower")
        self.ring = ring
        self.nx, self.ny = nx, ny
        self.a = a
        self.e = e
        self.tower = tower
        self.flipped = flipped
        self.overrides = dict(overrides or {})
        for (j, n), v in self.overrides.items():
            if not isinstance(v, TruncPoly) or v.n != nx:
                raise StructuralError(f"override for {(j, n)} must be a series mod X^{nx}")
        self._alpha: Dict[Cell, TruncPoly] = {}
        self._gamma: Dict[Tuple[int, int, int], TruncPoly] = {}
        self._cols = {j: col for j, col in a.columns().items()} if a is not None else {}

    @property
    def kind(self) -> str:
        return "matrix" if self.a is not None else "tower"

    @property
    def nilpotency_index_e(self) -> int:
        return self.e

    def with_overrides(self, overrides: Dict[Cell, TruncPoly]) -> "TruncatedAlphaFamily":
        merged = dict(self.overrides)
        merged.update(overrides)
        return TruncatedAlphaFamily(self.ring, self.nx, self.ny, self.a, self.e, self.tower,
                                    merged, self.flipped)

    # precision bookkeeping ---------------------------------------------------------------
    def loss(self, l: int) -> int:
        if self.tower is not None:
            return 0
        return max(0, l + self.e - 2)

    def chain_loss(self, j: int, r: int) -> int:
        """Order lost by gamma_j^(r): sum of loss(q) over a composition of j in r parts."""
        if self.tower is not None or r == 0:
            return 0
        return max(0, j + r * (self.e - 2))

    def zero(self, p: int) -> TruncPoly:
        return TruncPoly.zero(self.ring, p)

    # cells ---------------------------------------------------------------------------------
    def alpha(self, j: int, n: int, p: int, raw: bool = False) -> TruncPoly:
        """alpha_j(X^n) mod X^p.

        Overrides show up only in reads with ``raw=False``; the recursion
        itself always runs on unmodified cells, so a corrupted cell is
        inconsistent with everything derived from its neighbours.
        """
        key = (j, n)
        hit = self._alpha.get(key)
        if hit is None or hit.n < p:
            hit = self._compute_alpha(j, n, p)
            self._alpha[key] = hit
        val = hit.reduce(p)
        ov = None if raw else self.overrides.get(key)
        if ov is not None:
            m = min(p, ov.n)
            val = TruncPoly(self.ring, p, list(ov.c[:m]) + list(val.c[m:]))
        return val

    def _compute_alpha(self, j: int, n: int, p: int) -> TruncPoly:
        R = self.ring
        if n == 0:
            return TruncPoly.monomial(R, p, 0, 1 if j == 1 else 0)
        if j == 0:
            return self.zero(p)
        if self.tower is not None:
            return self.tower.cell(j, n, p)
        if n == 1:
            col = self._cols.get(j)
            return self.zero(p) if col is None else TruncPoly.from_poly(col, p)
        acc = self.zero(p)
        for r in range(1, j + 1):
            left = self.alpha(r, n - 1, p, raw=True)
            if left.is_zero():
                continue
            acc = acc + left * self.gamma(j, r, 1, p)
        return acc

    def apply(self, l: int, f: TruncPoly, p: int) -> TruncPoly:
        """alpha_l(f) mod X^p; f must be known mod X^(p + loss(l))."""
        need = p + self.loss(l)
        f = _series(self.ring, f, need)
        acc = self.zero(p)
        for m, c in f.terms():
            acc = acc + self.alpha(l, m, p, raw=True).scale(c)
        return acc

    def gamma(self, j: int, r: int, v: int, p: int) -> TruncPoly:
        """gamma_j^(r)(X^v) mod X^p."""
        if r == 0:
            return TruncPoly.monomial(self.ring, p, v) if j == 0 else self.zero(p)
        if j < r:
            return self.zero(p)
        if r == 1:
            return self.alpha(j, v, p, raw=True)
        key = (j, r, v)
        hit = self._gamma.get(key)
        if hit is None or hit.n < p:
            acc = self.zero(p)
            for l in range(1, j - r + 2):
                inner = self.gamma(j - l, r - 1, v, p + self.loss(l))
                if not inner.is_zero():
                    acc = acc + self.apply(l, inner, p)
            hit = acc
            self._gamma[key] = hit
        return hit.reduce(p)

    def gamma_bruteforce(self, j: int, r: int, v: int, p: int) -> TruncPoly:
        """Sum over compositions (q_1..q_r) of j of alpha_q1 o ... o alpha_qr (X^v)."""
        if r == 0:
            return self.gamma(j, 0, v, p)
        acc = self.zero(p)
        for word in compositions(j, r):
            precs = [p]
            for q in word[:-1]:
                precs.append(precs[-1] + self.loss(q))
            f = self.alpha(word[-1], v, precs[-1], raw=True)
            for q, pq in zip(reversed(word[:-1]), reversed(precs[:-1])):
                f = self.apply(q, f, pq)
            acc = acc + f
        return acc

    # tables --------------------------------------------------------------------------------
    def table(self, j: int, n: int) -> TruncPoly:
        if not (1 <= j <= self.ny and 0 <= n <= self.nx):
            raise ExtensionError(f"extend first: cell {(j, n)} outside built orders "
                                 f"({self.nx}, {self.ny})")
        return self.alpha(j, n, self.nx)

    def build(self) -> "TruncatedAlphaFamily":
        for j in range(1, self.ny + 1):
            for n in range(self.nx + 1):
                self.table(j, n)
        return self

    def tables(self) -> Dict[Cell, TruncPoly]:
        return {(j, n): self.table(j, n)
                for j in range(1, self.ny + 1) for n in range(self.nx + 1)}

    def to_json(self) -> dict:
        out = {"kind": "series", "source": self.kind, "ring": self.ring.to_json(),
               "nx": self.nx, "ny": self.ny, "e": self.e, "flipped": self.flipped}
        if self.a is not None:
            out["a"] = self.a.to_json()["coeffs"]
        cells = {}
        for (j, n), v in sorted(self.tables().items()):
            if not v.is_zero():
                cells.setdefault(str(j), {})[str(n)] = {str(e): str(c) for e, c in v.terms()}
        out["tables"] = cells
        if self.overrides:
            out["overrides"] = [[j, n, {str(e): str(c) for e, c in v.terms()}]
                                for (j, n), v in sorted(self.overrides.items())]
        return out

    def __repr__(self):
        return f"TruncatedAlphaFamily({self.kind}, nx={self.nx}, ny={self.ny}, e={self.e})"


# -- matrix construction -------------------------------------------------------------------

def build_series_family(a, nx: int, ny: int, ring: Optional[Ring] = None) -> TruncatedAlphaFamily:
    """Unique family with alpha_0 = 0 and alpha_j(X) = sum_i a[i, j] X^i.

    Needs a[i, 0] = 0 for all i and a nilpotent constant term a[0, 1].
    """
    a = _as_matrix(a, ring)
    R = a.ring
    for (i, j), v in a.items():
        if j == 0:
            raise HypothesisError(f"alpha_0 must vanish, but a[{i}, 0] = {v}",
                                  {"kind": "alpha0", "i": i, "value": str(v)})
    a01 = a[(0, 1)]
    e = R.nilpotency_index(a01)
    if e is None:
        raise HypothesisError(
            f"X -> alpha_1(X) is not a continuous algebra map of k[[X]]: "
            f"its constant term a[0, 1] = {a01} is not nilpotent",
            {"kind": "nilpotent", "a01": str(a01)})
    return TruncatedAlphaFamily(R, nx, ny, a=a, e=e).build()


def flip_series(fam_or_a, nx: Optional[int] = None, ny: Optional[int] = None,
                ring: Optional[Ring] = None) -> TruncatedAlphaFamily:
    """Family built from the transposed matrix; describes the flipped map.

    The flipped map sends Y (x) X to sum a[i, j] X^i (x) Y^j and exists when
    a[0, j] = 0 for all j and a[1, 0] is nilpotent.
    """
    if isinstance(fam_or_a, TruncatedAlphaFamily):
        if fam_or_a.a is None:
            raise StructuralError("only matrix families can be flipped")
        a, flipped = fam_or_a.a, fam_or_a.flipped
        nx, ny = (fam_or_a.ny, fam_or_a.nx) if nx is None else (nx, ny)
    else:
        a, flipped = _as_matrix(fam_or_a, ring), False
        if nx is None or ny is None:
            raise StructuralError("orders are needed to flip a bare matrix")
    try:
        fam = build_series_family(a.transpose(), nx, ny)
    except HypothesisError as exc:
        raise HypothesisError(f"flip needs a[0, j] = 0 for all j and a[1, 0] nilpotent: {exc}",
                              exc.witness) from exc
    fam.flipped = not flipped
    return fam


def ideal_contains(ring: Ring, gen, c) -> bool:
    """c lies in the principal ideal generated by gen."""
    if ring.kind == "mod":
        return c % gcd(gen, ring.modulus) == 0
    if gen == 0:
        return c == 0
    return ring.kind == "Q" or c % gen == 0


def check_containment(fam: TruncatedAlphaFamily) -> Optional[dict]:
    """alpha_j(X^n) lies in sum_{r <= n-j+1} a01^(n-j-r+1) X^r k[[X]] for n >= j.

    Coefficient-wise: the X^r coefficient lies in (a01^max(0, n-j-r+1)).
    """
    if fam.a is None:
        raise StructuralError("containment applies to matrix families")
    R = fam.ring
    a01 = fam.a[(0, 1)]
    for j in range(1, fam.ny + 1):
        for n in range(j, fam.nx + 1):
            cell = fam.table(j, n)
            for r, c in cell.terms():
                gen = R.pow(a01, max(0, n - j - r + 1))
                if not ideal_contains(R, gen, c):
                    return {"kind": "containment", "j": j, "n": n, "r": r,
                            "value": str(c), "ideal": str(gen)}
    return None


def refinement_witness(coarse: TruncatedAlphaFamily,
                       fine: TruncatedAlphaFamily) -> Optional[dict]:
    """First cell of ``coarse`` that differs from ``fine`` reduced to the coarse orders."""
    if fine.nx < coarse.nx or fine.ny < coarse.ny:
        raise StructuralError("the fine family must have larger orders")
    for (j, n), v in sorted(coarse.tables().items()):
        w = fine.table(j, n).reduce(coarse.nx)
        if v != w:
            return {"kind": "refinement", "j": j, "n": n, "coarse": str(v), "fine": str(w)}
    return None


# -- axiom checker ---------------------------------------------------------------------------

def _split_sides(fam: TruncatedAlphaFamily, j: int, u: int, v: int):
    p = fam.nx
    lhs = fam.alpha(j, u + v, p)
    rhs = fam.zero(p)
    for r in range(1, j + 1):
        left = fam.alpha(r, u, p)
        if not left.is_zero():
            rhs = rhs + left * fam.gamma(j, r, v, p)
    return lhs, rhs


def verify_series_axioms(fam: TruncatedAlphaFamily, nx: Optional[int] = None,
                         ny: Optional[int] = None) -> VerificationReport:
    """Unit and product-split conditions on monomials, modulo (X^nx, Y^ny).

    alpha_0 = 0 for every family built here, so the condition on powers of
    alpha_0 holds trivially; continuity is the order bookkeeping itself.
    """
    nx = fam.nx if nx is None else nx
    ny = fam.ny if ny is None else ny
    if nx > fam.nx or ny > fam.ny:
        raise ExtensionError(f"extend first: family built to ({fam.nx}, {fam.ny})")
    rep = VerificationReport("Verified", nx)
    rep.notes.append("alpha_0 = 0, so powers of alpha_0 vanish")
    for j in range(1, ny + 1):
        for n in range(nx + 1):
            if fam.table(j, n).n != fam.nx:
                raise StructuralError(f"cell {(j, n)} has the wrong order")
    for j in range(1, ny + 1):
        rep.checks["unit"] = rep.checks.get("unit", 0) + 1
        got = fam.alpha(j, 0, fam.nx)
        want = TruncPoly.monomial(fam.ring, fam.nx, 0, 1 if j == 1 else 0)
        if got != want:
            rep.status = "Refuted"
            rep.witness = {"kind": "unit", "j": j, "lhs": str(got), "rhs": str(want)}
            return rep
    for total in range(2, nx + 1):
        for u in range(1, total):
            v = total - u
            for j in range(1, ny + 1):
                rep.checks["split"] = rep.checks.get("split", 0) + 1
                lhs, rhs = _split_sides(fam, j, u, v)
                if lhs != rhs:
                    rep.status = "Refuted"
                    rep.witness = {"kind": "split", "j": j, "u": u, "v": v,
                                   "lhs": str(lhs), "rhs": str(rhs)}
                    return rep
    return rep


def replay_series_witness(fam: TruncatedAlphaFamily, witness: dict) -> bool:
    """True when the witness still exhibits a failure on ``fam``."""
    if witness["kind"] == "unit":
        j = witness["j"]
        want = TruncPoly.monomial(fam.ring, fam.nx, 0, 1 if j == 1 else 0)
        return fam.alpha(j, 0, fam.nx) != want
    if witness["kind"] == "split":
        lhs, rhs = _split_sides(fam, witness["j"], witness["u"], witness["v"])
        return lhs != rhs
    raise StructuralError(f"unknown witness kind {witness['kind']!r}")


# -- evaluation of s on series ---------------------------------------------------------------

def eval_s_series(fam: TruncatedAlphaFamily, series: Iterable[Tuple[int, object]],
                  ny: Optional[int] = None) -> BiPoly:
    """s(sum_r Y^r (x) a_r) = sum_j (sum_r gamma_j^(r)(a_r)) (x) Y^j mod (X^nx, Y^ny)."""
    ny = fam.ny if ny is None else ny
    if ny > fam.ny:
        raise ExtensionError(f"extend first: family built to Y^{fam.ny}, asked for Y^{ny}")
    p = fam.nx
    R = fam.ring
    out: Dict[Tuple[int, int], object] = {}
    for r, a_r in series:
        if r >= ny:
            continue
        for j in range(r, ny):
            need = p + fam.chain_loss(j, r)
            f = _series(R, a_r, need)
            acc = fam.zero(p)
            for v, c in f.terms():
                acc = acc + fam.gamma(j, r, v, p).scale(c)
            for i, c in acc.terms():
                out[(i, j)] = R.add(out.get((i, j), R.zero), c)
    return BiPoly(R, out)


# -- tower construction ----------------------------------------------------------------------

def _image_poly(ring: Ring, x) -> Poly:
    if hasattr(x, "image"):
        x = x.image
    if isinstance(x, (QuotPoly, TruncPoly)):
        x = x.to_poly()
    if not isinstance(x, Poly):
        raise StructuralError(f"expected a polynomial image, got {type(x).__name__}")
    if x.ring != ring:
        raise StructuralError("image over a different ring")
    return x


class SeriesTower:
    """alpha (automorphism of k[[t]]) and (alpha, alpha^(i+1))-derivations beta_i.

    Maps are fixed by the images of t, which must lie in t k[[t]] so that
    every map preserves the t-adic filtration.  alpha_j is the sum over
    compositions (i_1..i_l) of j - 1 of beta_i1 o alpha^-1 o ... o beta_il.
    """

    def __init__(self, alpha, betas: Dict[int, object]):
        img = alpha.image if hasattr(alpha, "image") else alpha
        if isinstance(img, (QuotPoly, TruncPoly)):
            img = img.to_poly()
        self.ring = img.ring
        self.alpha_img = img
        R = self.ring
        if img[0] != 0 or not R.is_unit(img[1]):
            raise HypothesisError("alpha(t) must be u t + O(t^2) with u a unit",
                                  {"kind": "automorphism", "image": img.to_str("t")})
        self.betas: Dict[int, Poly] = {}
        for i, b in sorted(betas.items()):
            if i < 1:
                raise StructuralError("beta indices start at 1")
            b = _image_poly(R, b)
            if b[0] != 0:
                raise HypothesisError(f"beta_{i}(t) must lie in t k[[t]]",
                                      {"kind": "filtration", "i": i})
            if not b.is_zero():
                self.betas[i] = b
        self._mono: Dict[Tuple[str, int, int], TruncPoly] = {}
        self._words: Dict[Tuple[Tuple[int, ...], int], TruncPoly] = {}
        self._inv: Dict[int, TruncPoly] = {}

    def alpha_inverse_image(self, p: int) -> TruncPoly:
        """g with alpha(g) = t mod t^p, by fixed-point iteration (one order per step)."""
        if p not in self._inv:
            R = self.ring
            a = TruncPoly.from_poly(self.alpha_img, p)
            u_inv = R.inverse(self.alpha_img[1])
            t = TruncPoly.monomial(R, p, 1)
            g = t.scale(u_inv)
            for _ in range(p):
                comp = self._compose(a, g, p)
                g = g + (t - comp).scale(u_inv)
            if self._compose(a, g, p) != t:
                raise StructuralError("alpha is not invertible")
            self._inv[p] = g
        return self._inv[p]

    @staticmethod
    def _compose(f: TruncPoly, g: TruncPoly, p: int) -> TruncPoly:
        acc = TruncPoly.zero(f.ring, p)
        power = TruncPoly.one(f.ring, p)
        for e, c in enumerate(f.c):
            if c != 0:
                acc = acc + power.scale(c)
            power = power * g
        return acc

    def power_image(self, k: int, p: int) -> TruncPoly:
        """alpha^k(t) mod t^p for any integer k."""
        R = self.ring
        t = TruncPoly.monomial(R, p, 1)
        step = (TruncPoly.from_poly(self.alpha_img, p) if k >= 0
                else self.alpha_inverse_image(p))
        g = t
        for _ in range(abs(k)):
            g = self._compose(step, g, p)
        return g

    def _on_mono(self, op: str, m: int, p: int) -> TruncPoly:
        key = (op, m, p)
        if key not in self._mono:
            R = self.ring
            if op == "alpha":
                val = TruncPoly.from_poly(self.alpha_img, p) ** m
            elif op == "alpha_inv":
                val = self.alpha_inverse_image(p) ** m
            else:
                i = int(op[4:])
                d = TruncPoly.from_poly(self.betas[i], p)
                phi = TruncPoly.from_poly(self.alpha_img, p)
                psi = self.power_image(i + 1, p)
                val = TruncPoly.zero(R, p)
                for k in range(m):
                    val = val + (phi ** k) * d * (psi ** (m - 1 - k))
            self._mono[key] = val
        return self._mono[key]

    def apply(self, op: str, f: TruncPoly) -> TruncPoly:
        acc = TruncPoly.zero(self.ring, f.n)
        for m, c in f.terms():
            acc = acc + self._on_mono(op, m, f.n).scale(c)
        return acc

    def beta(self, i: int, f: TruncPoly) -> TruncPoly:
        if i not in self.betas:
            return TruncPoly.zero(self.ring, f.n)
        return self.apply(f"beta{i}", f)

    def word(self, w: Tuple[int, ...], m: int, p: int) -> TruncPoly:
        """beta_w1 o alpha^-1 o beta_w2 o ... o beta_wl (t^m) mod t^p."""
        key = (w, m)
        hit = self._words.get(key)
        if hit is None or hit.n < p:
            if len(w) == 1:
                hit = self.beta(w[0], TruncPoly.monomial(self.ring, p, m))
            else:
                inner = self.word(w[1:], m, p)
                hit = self.beta(w[0], self.apply("alpha_inv", inner))
            self._words[key] = hit
        return hit.reduce(p)

    def cell(self, j: int, n: int, p: int) -> TruncPoly:
        R = self.ring
        if j == 1:
            return self._on_mono("alpha", n, p)
        acc = TruncPoly.zero(R, p)
        for w in all_compositions(j - 1):
            if all(i in self.betas for i in w):
                acc = acc + self.word(w, n, p)
        return acc

    def orthogonality_witness(self, p: int, r_bound: int) -> Optional[dict]:
        """alpha^r(beta_i(t^a)) beta_i'(t^b) = 0 mod t^p for i + i' >= 3, |r| <= r_bound."""
        R = self.ring
        for i, ip in itertools.product(sorted(self.betas), repeat=2):
            if i + ip < 3:
                continue
            for a_, b_ in itertools.product(range(p), repeat=2):
                right = self.beta(ip, TruncPoly.monomial(R, p, b_))
                if right.is_zero():
                    continue
                left = self.beta(i, TruncPoly.monomial(R, p, a_))
                for r in range(-r_bound, r_bound + 1):
                    shifted = self._compose(left, self.power_image(r, p), p)
                    prod = shifted * right
                    if not prod.is_zero():
                        return {"kind": "orthogonality", "a": a_, "b": b_, "r": r,
                                "i": i, "i_prime": ip, "value": str(prod)}
        return None


def build_series_tower(alpha, betas: Dict[int, object], nx: int, ny: int,
                       r_bound: int = 3) -> TruncatedAlphaFamily:
    """Series tower family: alpha_0 = 0, alpha_1 = alpha, alpha_j from beta-words.

    Orthogonality is checked on monomials t^a, t^b with a, b < nx and
    |r| <= r_bound, modulo t^nx.
    """
    tower = SeriesTower(alpha, betas)
    w = tower.orthogonality_witness(nx, r_bound)
    if w is not None:
        raise HypothesisError("beta-derivations are not orthogonal", w)
    return TruncatedAlphaFamily(tower.ring, nx, ny, tower=tower).build()


def t2_derivation_series(n: int, ny: int, ring: Ring) -> TruncatedAlphaFamily:
    """alpha = id and beta_1 = t^2 d/dt on k[[t]] mod t^n."""
    t = Poly.monomial(ring, 1)
    return build_series_tower(t, {1: Poly.monomial(ring, 2)}, n, ny)
