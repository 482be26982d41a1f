"""Constructors for alpha-families that are twisting maps by construction.

Ore extensions, the almost-null family supported on rows/columns >= 2, the
derivation tower (alpha_1 = alpha, alpha_j built from beta-words) and the two
worked examples on truncated polynomial rings.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Dict, Iterator, Optional, Sequence, Tuple

from .coeffring import QQ, Ring
from .errors import HypothesisError, StructuralError
from .polyalg import BiPoly, Poly, QuotPoly
from .twistcore import AlphaFamily, Base, PolyBase, QuotBase

DEFAULT_VALIDATION_BOUND = 6


def base_zero(ring: Ring, base: Base):
    if isinstance(base, QuotBase):
        return QuotPoly.zero(ring, base.n)
    return Poly.zero(ring)


def base_mono(ring: Ring, base: Base, m: int, c=1):
    if isinstance(base, QuotBase):
        return QuotPoly.monomial(ring, base.n, m, c)
    return Poly.monomial(ring, m, c)


def _as_elem(ring: Ring, base: Base, p):
    if isinstance(base, QuotBase):
        if isinstance(p, Poly):
            return QuotPoly.from_poly(p, base.n)
        if isinstance(p, QuotPoly) and p.n == base.n:
            return p
        raise StructuralError("generator image must live in k[t]/(t^n)")
    if isinstance(p, Poly):
        return p
    raise StructuralError("generator image must be a polynomial in X")


def basis_range(base: Base, bound: int) -> range:
    if isinstance(base, QuotBase):
        return range(0, base.n)
    return range(0, bound + 1)


class LinearOp:
    """A k-linear map A -> A given by its action on monomials (memoized)."""

    def __init__(self, ring: Ring, base: Base, action: Callable[[int], object], name: str = ""):
        self.ring = ring
        self.base = base
        self._action = action
        self._memo: Dict[int, object] = {}
        self.name = name

    def on_mono(self, m: int):
        if isinstance(self.base, QuotBase) and m >= self.base.n:
            return base_zero(self.ring, self.base)
        hit = self._memo.get(m)
        if hit is None:
            hit = self._action(m)
            self._memo[m] = hit
        return hit

    def __call__(self, a):
        out = base_zero(self.ring, self.base)
        for k, c in a.terms():
            v = self.on_mono(k)
            if not v.is_zero():
                out = out + v.scale(c)
        return out

    def compose(self, other: "LinearOp") -> "LinearOp":
        """self o other."""
        return LinearOp(self.ring, self.base, lambda m: self(other.on_mono(m)),
                        f"{self.name}o{other.name}")

    def __add__(self, other: "LinearOp") -> "LinearOp":
        return LinearOp(self.ring, self.base, lambda m: self.on_mono(m) + other.on_mono(m),
                        f"({self.name}+{other.name})")

    def power(self, k: int) -> "LinearOp":
        out = identity_op(self.ring, self.base)
        for _ in range(k):
            out = self.compose(out)
        return out

    def is_zero_on(self, ms) -> bool:
        return all(self.on_mono(m).is_zero() for m in ms)

    def table(self, ms) -> Dict[int, object]:
        return {m: self.on_mono(m) for m in ms}


def identity_op(ring: Ring, base: Base) -> LinearOp:
    return LinearOp(ring, base, lambda m: base_mono(ring, base, m), "id")


def zero_op(ring: Ring, base: Base) -> LinearOp:
    return LinearOp(ring, base, lambda m: base_zero(ring, base), "0")


@dataclass
class EndoSpec:
    """Algebra endomorphism fixed by the image of the generator."""

    ring: Ring
    base: Base
    image: object

    def __post_init__(self):
        self.image = _as_elem(self.ring, self.base, self.image)
        if isinstance(self.base, QuotBase):
            n = self.base.n
            if not (self.image ** n).is_zero():
                raise StructuralError(
                    f"t -> {self.image} does not respect t^{n} = 0")
        self._op = None

    @classmethod
    def identity(cls, ring: Ring, base: Base) -> "EndoSpec":
        return cls(ring, base, base_mono(ring, base, 1))

    @property
    def op(self) -> LinearOp:
        if self._op is None:
            img = self.image
            self._op = LinearOp(self.ring, self.base, lambda m: img ** m, f"endo[{img}]")
        return self._op

    def __call__(self, a):
        return self.op(a)

    def is_identity(self) -> bool:
        return self.image == base_mono(self.ring, self.base, 1)

    def compose(self, other: "EndoSpec") -> "EndoSpec":
        """self o other."""
        return EndoSpec(self.ring, self.base, self(other.image))

    def power(self, k: int) -> "EndoSpec":
        if k < 0:
            return self.inverse().power(-k)
        out = EndoSpec.identity(self.ring, self.base)
        for _ in range(k):
            out = self.compose(out)
        return out

    def inverse(self) -> "EndoSpec":
        R = self.ring
        img = self.image
        if isinstance(self.base, PolyBase):
            if img.degree() != 1 or not R.is_unit(img[1]):
                raise StructuralError(f"endomorphism X -> {img} is not invertible")
            a_inv = R.inverse(img[1])
            inv = Poly(R, {1: a_inv, 0: R.neg(R.mul(img[0], a_inv))})
            return EndoSpec(R, self.base, inv)
        n = self.base.n
        if n == 1:
            return self
        if img[0] != 0 or not R.is_unit(img[1]):
            raise StructuralError(f"endomorphism t -> {img} is not invertible")
        # Truncated reversion: fix g with img(g(t)) = t, one degree per step.
        a_inv = R.inverse(img[1])
        t = QuotPoly.monomial(R, n, 1)
        g = t.scale(a_inv)
        for _ in range(n):
            err = _substitute(img, g) - t
            if err.is_zero():
                break
            g = g - err.scale(a_inv)
        if _substitute(img, g) != t:
            raise StructuralError("reversion did not converge")
        return EndoSpec(R, self.base, g)


def _substitute(p, g):
    """p(g) for p, g in the same truncated ring."""
    R = p.ring
    out = type(g).zero(R, g.n)
    for e in range(p.n - 1, -1, -1):
        out = out * g + type(g).monomial(R, g.n, 0, p[e])
    return out


@dataclass
class DerivSpec:
    """(phi, psi)-derivation d(ab) = d(a) psi(b) + phi(a) d(b), fixed by d(gen)."""

    ring: Ring
    base: Base
    image: object
    phi: EndoSpec
    psi: EndoSpec

    def __post_init__(self):
        self.image = _as_elem(self.ring, self.base, self.image)
        self._op = None
        if isinstance(self.base, QuotBase):
            n = self.base.n
            top = self._leibniz(n)
            if not top.is_zero():
                raise HypothesisError(
                    f"derivation does not kill t^{n}: d(t^{n}) = {top}",
                    {"kind": "quotient_relation", "m": n, "value": str(top)})

    def _leibniz(self, m: int):
        # d(X^m) computed in the ambient ring (for Quot: k[t]/(t^n) arithmetic)
        R, B = self.ring, self.base
        if m == 0:
            return base_zero(R, B)
        d = self.image
        psi_x = self.psi.image
        acc = d
        for k in range(2, m + 1):
            phi_prev = self.phi.image ** (k - 1)
            acc = acc * psi_x + phi_prev * d
        return acc

    @property
    def op(self) -> LinearOp:
        if self._op is None:
            self._op = LinearOp(self.ring, self.base, self._leibniz, f"der[{self.image}]")
        return self._op

    def __call__(self, a):
        return self.op(a)

    def check_leibniz(self, bound: int = DEFAULT_VALIDATION_BOUND) -> Optional[dict]:
        """First monomial pair violating d(ab) = d(a)psi(b) + phi(a)d(b), if any."""
        R, B = self.ring, self.base
        ms = basis_range(B, bound)
        for a, b in itertools.product(ms, ms):
            xa, xb = base_mono(R, B, a), base_mono(R, B, b)
            lhs = self(xa * xb)
            rhs = self(xa) * self.psi(xb) + self.phi(xa) * self(xb)
            if lhs != rhs:
                return {"kind": "leibniz", "a": a, "b": b, "lhs": str(lhs), "rhs": str(rhs)}
        return None


# -- Ore extensions -------------------------------------------------------------------

def build_ore(alpha: EndoSpec, delta: DerivSpec,
              bound: int = DEFAULT_VALIDATION_BOUND) -> AlphaFamily:
    """s(Y (x) a) = alpha(a) (x) Y + delta(a) (x) 1."""
    if alpha.base != delta.base or alpha.ring != delta.ring:
        raise StructuralError("alpha and delta live on different algebras")
    ident = EndoSpec.identity(alpha.ring, alpha.base)
    if delta.phi.image != alpha.image or delta.psi.image != ident.image:
        raise HypothesisError("delta must be an (alpha, id)-derivation",
                              {"kind": "derivation_type"})
    w = delta.check_leibniz(bound)
    if w is not None:
        raise HypothesisError("delta fails the Leibniz rule", w)
    R, B = alpha.ring, alpha.base
    prov = {"builder": "ore", "validation_bound": bound}
    if isinstance(B, PolyBase):
        return AlphaFamily(R, B, {(0, 1): delta.image, (1, 1): alpha.image},
                           col_bound=1, provenance=prov)
    tables = {}
    for m in range(1, B.n):
        x = base_mono(R, B, m)
        tables[(0, m)] = delta(x)
        tables[(1, m)] = alpha(x)
    return AlphaFamily.from_tables(R, B.n, tables, col_bound=1, provenance=prov)


def ore_from_images(ring: Ring, alpha_image: Poly, delta_image: Poly,
                    base: Base = PolyBase()) -> AlphaFamily:
    alpha = EndoSpec(ring, base, alpha_image)
    delta = DerivSpec(ring, base, delta_image, alpha, EndoSpec.identity(ring, base))
    return build_ore(alpha, delta)


def quantum_plane(ring: Ring = QQ, qv=2) -> AlphaFamily:
    return ore_from_images(ring, Poly(ring, {1: qv}), Poly.zero(ring))


def weyl_family(ring: Ring = QQ) -> AlphaFamily:
    return ore_from_images(ring, Poly(ring, {1: 1}), Poly(ring, {0: 1}))


# -- almost null on the nose -----------------------------------------------------------

def build_almost_null(q, ring: Ring = QQ, check_bound: int = 10) -> AlphaFamily:
    """Family with alpha_0 = 0, alpha_1 = ev_0, alpha_j(X) = sum_i q_ij X^i.

    Requires q_ij = 0 whenever i <= 1 or j <= 1.
    """
    if not isinstance(q, BiPoly):
        q = BiPoly(ring, q) if isinstance(q, dict) else BiPoly.from_triples(ring, q)
    ring = q.ring
    for (i, j), v in q.items():
        if i <= 1 or j <= 1:
            raise HypothesisError(f"q[{i},{j}] = {v} lies outside rows/columns >= 2",
                                  {"kind": "support", "i": i, "j": j, "value": str(v)})
    J = max((j for (_, j), _ in q.items()), default=1)
    defining = {(j, 1): col for j, col in q.columns().items()}
    fam = AlphaFamily(ring, PolyBase(), defining, col_bound=max(J, 1),
                      provenance={"builder": "almost_null", "checked_vanishing": check_bound})
    x_mono = lambda s: Poly.monomial(ring, s)
    for total in range(3, check_bound + 1):
        for r in range(1, total):
            s = total - r
            val = fam.eval_s(r, x_mono(s))
            if not val.is_zero():
                raise HypothesisError(f"s(Y^{r} (x) X^{s}) = {val} should vanish",
                                      {"kind": "vanishing", "r": r, "s": s})
    return fam


# -- derivation towers ----------------------------------------------------------------

def compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    """Ordered tuples of ``parts`` positive integers summing to ``total``."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(1, total - parts + 2):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def all_compositions(total: int) -> Iterator[Tuple[int, ...]]:
    for parts in range(1, total + 1):
        yield from compositions(total, parts)


class Tower:
    """Data of a derivation tower: alpha and (alpha, alpha^{i+1})-derivations beta_i."""

    def __init__(self, alpha: EndoSpec, betas: Dict[int, object]):
        self.alpha = alpha
        self.ring = alpha.ring
        self.base = alpha.base
        self.alpha_inv = alpha.inverse()
        self.betas: Dict[int, DerivSpec] = {}
        for i, img in sorted(betas.items()):
            if i < 1:
                raise StructuralError("beta indices start at 1")
            if isinstance(img, DerivSpec):
                d = img
            else:
                d = DerivSpec(self.ring, self.base, img, alpha, alpha.power(i + 1))
            if d.phi.image != alpha.image or d.psi.image != alpha.power(i + 1).image:
                raise HypothesisError(f"beta_{i} must be an (alpha, alpha^{i + 1})-derivation",
                                      {"kind": "derivation_type", "i": i})
            self.betas[i] = d
        self._zero = zero_op(self.ring, self.base)
        self._w: Dict[int, LinearOp] = {}

    def beta(self, i: int) -> LinearOp:
        d = self.betas.get(i)
        return d.op if d is not None else self._zero

    def beta_composite(self, word: Sequence[int]) -> LinearOp:
        """beta_{i1} o alpha^-1 o beta_{i2} o ... o alpha^-1 o beta_{il}; alpha for the empty word."""
        if not word:
            return self.alpha.op
        op = self.beta(word[-1])
        for i in reversed(word[:-1]):
            op = self.beta(i).compose(self.alpha_inv.op.compose(op))
        return op

    def W(self, j: int) -> LinearOp:
        """Sum of beta-words of weight j, via W_j = beta_j + sum_i beta_i o alpha^-1 o W_{j-i}."""
        if j in self._w:
            return self._w[j]
        op = self.beta(j)
        for i in range(1, j):
            if i in self.betas:
                op = op + self.beta(i).compose(self.alpha_inv.op.compose(self.W(j - i)))
        self._w[j] = op
        return op

    def W_bruteforce(self, j: int) -> LinearOp:
        op = zero_op(self.ring, self.base)
        for word in all_compositions(j):
            op = op + self.beta_composite(word)
        return op

    def alpha_op(self, j: int) -> LinearOp:
        if j == 0:
            return zero_op(self.ring, self.base)
        if j == 1:
            return self.alpha.op
        return self.W(j - 1)

    def check_orthogonality(self, bound: int, r_bound: int) -> Optional[dict]:
        """alpha^r(beta_i(a)) beta_i'(b) = 0 for i + i' >= 3, |r| <= r_bound."""
        R, B = self.ring, self.base
        ms = list(basis_range(B, bound))
        powers = {r: self.alpha.power(r) for r in range(-r_bound, r_bound + 1)}
        for i, ip in itertools.product(sorted(self.betas), repeat=2):
            if i + ip < 3:
                continue
            for a, b in itertools.product(ms, ms):
                xb = base_mono(R, B, b)
                right = self.beta(ip)(xb)
                if right.is_zero():
                    continue
                left_base = self.beta(i).on_mono(a)
                for r in range(-r_bound, r_bound + 1):
                    prod = powers[r](left_base) * right
                    if not prod.is_zero():
                        return {"kind": "orthogonality", "a": a, "b": b, "r": r,
                                "i": i, "i_prime": ip, "value": str(prod)}
        return None

    def check_vanishing(self, j_max: int, bound: int) -> Optional[dict]:
        """W_j kills the checked basis for j_max <= j < j_max + max index.

        When every beta_i with i >= j_max vanishes, the recursion for W_j then
        forces W_j = 0 on that basis for every j >= j_max.
        """
        top_i = max(self.betas, default=1)
        if top_i >= j_max:
            return {"kind": "vanishing", "reason": f"beta_{top_i} with index >= j_max = {j_max}"}
        ms = basis_range(self.base, bound)
        for j in range(j_max, j_max + top_i):
            w = self.W(j)
            for m in ms:
                if not w.on_mono(m).is_zero():
                    return {"kind": "vanishing", "m": m, "j": j, "value": str(w.on_mono(m))}
        return None


def beta_composite(betas: Dict[int, object], alpha: EndoSpec, word: Sequence[int]) -> LinearOp:
    return Tower(alpha, betas).beta_composite(word)


def build_derivation_tower(alpha: EndoSpec, betas: Dict[int, object], j_max: int = 8,
                           bound: int = DEFAULT_VALIDATION_BOUND,
                           r_bound: int = 3) -> AlphaFamily:
    """alpha_0 = 0, alpha_1 = alpha, alpha_j = sum of beta-words of weight j - 1.

    The orthogonality hypothesis is checked on basis monomials of degree <=
    ``bound`` with |r| <= ``r_bound``; vanishing of the word sums is checked
    by requiring W_{j_max} to kill the checked basis.
    """
    tower = Tower(alpha, betas)
    w = tower.check_orthogonality(bound, r_bound)
    if w is not None:
        raise HypothesisError("beta-derivations are not orthogonal", w)
    w = tower.check_vanishing(j_max, bound)
    if w is not None:
        raise HypothesisError(f"beta-word sums do not vanish by j = {j_max}", w)
    R, B = tower.ring, tower.base
    prov = {"builder": "tower", "validation_bound": bound, "r_bound": r_bound, "j_max": j_max}
    if isinstance(B, PolyBase):
        defining = {(j, 1): tower.alpha_op(j).on_mono(1) for j in range(1, j_max + 1)}
        fam = AlphaFamily(R, B, defining, provenance=prov)
    else:
        tables = {}
        for j in range(1, j_max + 1):
            op = tower.alpha_op(j)
            for m in range(1, B.n):
                tables[(j, m)] = op.on_mono(m)
        fam = AlphaFamily.from_tables(R, B.n, tables, provenance=prov)
    fam.tower = tower
    return fam


def single_derivation_alpha(alpha: EndoSpec, beta: DerivSpec, j: int) -> LinearOp:
    """(beta o alpha^-1)^(j-2) o beta for j >= 2, and alpha for j = 1."""
    if j == 1:
        return alpha.op
    if j < 1:
        raise ValueError("j >= 1")
    step = beta.op.compose(alpha.inverse().op)
    return step.power(j - 2).compose(beta.op)


# -- worked examples ------------------------------------------------------------------

def build_dual_projection(ring: Ring = QQ) -> AlphaFamily:
    """On k[t]/(t^2): alpha_0 = 0, alpha_1 = id, alpha_2(l + m t) = m t."""
    t = QuotPoly.monomial(ring, 2, 1)
    return AlphaFamily.from_tables(ring, 2, {(1, 1): t, (2, 1): t},
                                   provenance={"builder": "dual_projection"})


def t2_derivation(ring: Ring, n: int) -> DerivSpec:
    """D(P) = P' t^2 on k[t]/(t^n)."""
    base = QuotBase(n)
    ident = EndoSpec.identity(ring, base)
    return DerivSpec(ring, base, QuotPoly.monomial(ring, n, 2), ident, ident)


def build_t2_derivation_family(n: int, ring: Ring = QQ) -> AlphaFamily:
    """On k[t]/(t^n): alpha_1 = id and alpha_{j+1} = D^j with D(t^m) = m t^{m+1}."""
    tables = {}
    for m in range(1, n):
        tables[(1, m)] = QuotPoly.monomial(ring, n, m)
        coeff = 1
        for j in range(1, n):
            coeff *= m + j - 1
            if m + j >= n:
                break
            tables[(j + 1, m)] = QuotPoly.monomial(ring, n, m + j, coeff)
    return AlphaFamily.from_tables(ring, n, tables, provenance={"builder": "t2_derivation", "n": n})


def build_t2_derivation_tower(n: int, ring: Ring = QQ) -> AlphaFamily:
    base = QuotBase(n)
    alpha = EndoSpec.identity(ring, base)
    return build_derivation_tower(alpha, {1: t2_derivation(ring, n)}, j_max=max(n, 2))
