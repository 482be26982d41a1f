"""Exact polynomial containers.

* ``Poly``      -- sparse univariate polynomial over a coefficient ring.
* ``QuotPoly``  -- dense element of k[t]/(t^n).
* ``TruncPoly`` -- dense element of k[[X]] mod X^N.
* ``BiPoly``    -- sparse element of k[X] (x) k[Y], keyed by (i, j).

All values are immutable.  Coefficients are raw canonical representatives
owned by the ring descriptor (see ``coeffring``).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, Iterable, List, Tuple

from .coeffring import QQ, Ring, RingValue, binomial
from .errors import RingMismatch, StructuralError

# Degree of the zero polynomial.
DEG_ZERO = float("-inf")


def _same_ring(a, b):
    if a.ring != b.ring:
        raise RingMismatch(f"{a.ring} vs {b.ring}")


def _fmt_coeff(c) -> str:
    return str(c)


class Poly:
    __slots__ = ("ring", "_c", "_hash")

    def __init__(self, ring: Ring, coeffs=None):
        self.ring = ring
        c = {}
        if coeffs:
            items = coeffs.items() if isinstance(coeffs, dict) else enumerate(coeffs)
            for e, v in items:
                if e < 0:
                    raise StructuralError("negative exponent")
                v = ring.normalize(v)
                if v != 0:
                    c[int(e)] = v
        self._c = c
        self._hash = None

    @classmethod
    def _raw(cls, ring: Ring, c: Dict[int, object]) -> "Poly":
        # c must already be normalized and zero-free
        p = cls.__new__(cls)
        p.ring = ring
        p._c = c
        p._hash = None
        return p

    @classmethod
    def zero(cls, ring: Ring) -> "Poly":
        return cls._raw(ring, {})

    @classmethod
    def const(cls, ring: Ring, c=1) -> "Poly":
        return cls(ring, {0: c})

    @classmethod
    def monomial(cls, ring: Ring, e: int, c=1) -> "Poly":
        return cls(ring, {e: c})

    # inspection -------------------------------------------------------------
    def degree(self):
        return max(self._c) if self._c else DEG_ZERO

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self):
        return bool(self._c)

    def __getitem__(self, e: int):
        return self._c.get(e, self.ring.zero)

    def coeff(self, e: int) -> RingValue:
        return RingValue(self.ring, self[e])

    def terms(self) -> List[Tuple[int, object]]:
        return sorted(self._c.items())

    def support(self):
        return sorted(self._c)

    def valuation(self):
        return min(self._c) if self._c else math.inf

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self._c == other._c
        if isinstance(other, int) and other == 0:
            return not self._c
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._c.items())))
        return self._hash

    def __repr__(self):
        return self.to_str("X")

    def to_str(self, var: str = "X") -> str:
        if not self._c:
            return "0"
        out = ""
        for e, c in sorted(self._c.items(), reverse=True):
            neg = self.ring.kind != "mod" and c < 0
            c = -c if neg else c
            mono = "" if e == 0 else (var if e == 1 else f"{var}^{e}")
            if mono and c == 1:
                term = mono
            elif mono:
                term = f"{_fmt_coeff(c)}*{mono}"
            else:
                term = _fmt_coeff(c)
            if not out:
                out = f"-{term}" if neg else term
            else:
                out += f" - {term}" if neg else f" + {term}"
        return out

    # arithmetic -------------------------------------------------------------
    def __add__(self, other: "Poly") -> "Poly":
        _same_ring(self, other)
        R = self.ring
        c = dict(self._c)
        for e, v in other._c.items():
            s = R.add(c.get(e, R.zero), v)
            if s != 0:
                c[e] = s
            else:
                c.pop(e, None)
        return Poly._raw(R, c)

    def __neg__(self) -> "Poly":
        R = self.ring
        return Poly._raw(R, {e: R.neg(v) for e, v in self._c.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            return self.scale(other)
        _same_ring(self, other)
        R = self.ring
        if not self._c or not other._c:
            return Poly._raw(R, {})
        c: Dict[int, object] = {}
        for e1, v1 in self._c.items():
            for e2, v2 in other._c.items():
                e = e1 + e2
                c[e] = R.add(c.get(e, R.zero), R.mul(v1, v2))
        return Poly._raw(R, {e: v for e, v in c.items() if v != 0})

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, s) -> "Poly":
        R = self.ring
        s = R.normalize(s)
        if s == 0:
            return Poly._raw(R, {})
        c = {}
        for e, v in self._c.items():
            w = R.mul(v, s)
            if w != 0:
                c[e] = w
        return Poly._raw(R, c)

    def shift_exp(self, k: int) -> "Poly":
        """Multiply by the monomial of degree k."""
        return Poly._raw(self.ring, {e + k: v for e, v in self._c.items()})

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power")
        result = Poly.const(self.ring, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def evaluate(self, x):
        """p(x) as a raw ring element."""
        R = self.ring
        x = R.normalize(x)
        acc = R.zero
        if not self._c:
            return acc
        for e in range(self.degree(), -1, -1):
            acc = R.add(R.mul(acc, x), self._c.get(e, R.zero))
        return acc

    def __call__(self, x):
        return self.evaluate(x)

    def derivative(self) -> "Poly":
        R = self.ring
        c = {}
        for e, v in self._c.items():
            if e:
                w = R.mul(v, R.from_int(e))
                if w != 0:
                    c[e - 1] = w
        return Poly._raw(R, c)

    def shift(self, a) -> "Poly":
        """p(Z + a)."""
        R = self.ring
        a = R.normalize(a)
        out: Dict[int, object] = {}
        for e, v in self._c.items():
            for i in range(e + 1):
                w = R.mul(R.mul(v, R.from_int(binomial(e, i))), R.pow(a, e - i))
                out[i] = R.add(out.get(i, R.zero), w)
        return Poly._raw(R, {e: v for e, v in out.items() if v != 0})

    def compose(self, inner: "Poly") -> "Poly":
        """p(inner(Z))."""
        _same_ring(self, inner)
        R = self.ring
        acc = Poly.zero(R)
        if not self._c:
            return acc
        for e in range(self.degree(), -1, -1):
            acc = acc * inner + Poly.const(R, self._c.get(e, R.zero))
        return acc

    def truncate(self, n: int) -> "Poly":
        return Poly._raw(self.ring, {e: v for e, v in self._c.items() if e < n})

    def to_json(self) -> dict:
        return {"coeffs": {str(e): str(v) for e, v in sorted(self._c.items())}}

    @classmethod
    def from_json(cls, ring: Ring, data) -> "Poly":
        if isinstance(data, str):
            return parse_poly(ring, data)
        if isinstance(data, dict) and "coeffs" in data:
            data = data["coeffs"]
        if isinstance(data, dict):
            return cls(ring, {int(e): str(v) for e, v in data.items()})
        if isinstance(data, list):
            return cls(ring, [str(v) for v in data])
        if isinstance(data, (int, Fraction)):
            return cls.const(ring, data)
        raise StructuralError(f"cannot read polynomial from {data!r}")


def parse_poly(ring: Ring, text: str) -> Poly:
    """Parse a univariate polynomial such as ``"-Y + 1"`` or ``"3/2*Z^2 - Z"``.

    Any single letter is accepted as the variable.
    """
    s = text.replace(" ", "").replace("**", "^")
    if not s:
        raise StructuralError("empty polynomial")
    if s[0] not in "+-":
        s = "+" + s
    terms = []
    i = 0
    while i < len(s):
        j = i + 1
        while j < len(s) and s[j] not in "+-":
            j += 1
        terms.append(s[i:j])
        i = j
    out: Dict[int, object] = {}
    for t in terms:
        sign = -1 if t[0] == "-" else 1
        body = t[1:]
        if not body:
            raise StructuralError(f"bad polynomial {text!r}")
        var_pos = next((k for k, ch in enumerate(body) if ch.isalpha()), None)
        if var_pos is None:
            coeff, exp = body, 0
        else:
            coeff = body[:var_pos].rstrip("*") or "1"
            rest = body[var_pos + 1:]
            if rest.startswith("^") and rest[1:].isdigit():
                exp = int(rest[1:])
            elif rest == "":
                exp = 1
            else:
                raise StructuralError(f"bad term {t!r} in {text!r}")
        try:
            c = Fraction(coeff) * sign
        except ValueError:
            raise StructuralError(f"bad coefficient {coeff!r} in {text!r}") from None
        out[exp] = out.get(exp, 0) + c
    return Poly(ring, out)


# -- operations on Poly ------------------------------------------------------

def formal_derivative(p: Poly) -> Poly:
    return p.derivative()


def is_multiple_root(p: Poly, c) -> bool:
    """True iff p(c) == 0 and p'(c) == 0 (so the zero polynomial qualifies)."""
    return p.evaluate(c) == 0 and p.derivative().evaluate(c) == 0


def shift_substitute(p: Poly, c) -> Poly:
    return p.shift(c)


def _divisors(n: int) -> List[int]:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def rational_root_candidates(p: Poly) -> List[RingValue]:
    """All roots of p in its ring (Q or Z), via the divisor-pairs test."""
    R = p.ring
    if R.kind not in ("Q", "Z"):
        raise StructuralError("rational roots need Q or Z coefficients")
    if p.is_zero():
        raise StructuralError("infinite root set: zero polynomial")
    den = 1
    for _, v in p.terms():
        den = den * Fraction(v).denominator // math.gcd(den, Fraction(v).denominator)
    ints = {e: int(Fraction(v) * den) for e, v in p.terms()}
    low = min(ints)
    ints = {e - low: v for e, v in ints.items()}
    roots = set()
    if low > 0:
        roots.add(Fraction(0))
    deg = max(ints)
    if deg > 0:
        a0, an = ints[0], ints[deg]
        for d in _divisors(a0):
            for e in _divisors(an):
                for cand in (Fraction(d, e), Fraction(-d, e)):
                    roots.add(cand)
    check = Poly(QQ, {e: Fraction(v) for e, v in p.terms()})
    out = []
    for r in sorted(roots):
        if check.evaluate(r) != 0:
            continue
        if R.kind == "Z" and r.denominator != 1:
            continue
        out.append(R.value(r))
    return out


# -- dense truncated types ----------------------------------------------------

class _Dense:
    __slots__ = ("ring", "n", "c", "_hash")
    _kind = "dense"

    def __init__(self, ring: Ring, n: int, coeffs=()):
        if n < 1:
            raise StructuralError("order must be >= 1")
        self.ring = ring
        self.n = n
        vals = [ring.zero] * n
        items = coeffs.items() if isinstance(coeffs, dict) else enumerate(coeffs)
        for e, v in items:
            if e < n:
                vals[e] = ring.add(vals[e], ring.normalize(v))
        self.c = tuple(vals)
        self._hash = None

    @classmethod
    def _raw(cls, ring, n, vals):
        x = cls.__new__(cls)
        x.ring = ring
        x.n = n
        x.c = tuple(vals)
        x._hash = None
        return x

    @classmethod
    def zero(cls, ring: Ring, n: int):
        return cls._raw(ring, n, [ring.zero] * n)

    @classmethod
    def one(cls, ring: Ring, n: int):
        return cls.monomial(ring, n, 0)

    @classmethod
    def monomial(cls, ring: Ring, n: int, e: int, c=1):
        vals = [ring.zero] * n
        if e < n:
            vals[e] = ring.normalize(c)
        return cls._raw(ring, n, vals)

    @classmethod
    def from_poly(cls, p: Poly, n: int):
        return cls(p.ring, n, {e: v for e, v in p.terms() if e < n})

    def _check(self, other):
        if type(other) is not type(self):
            raise StructuralError(f"cannot mix {type(self).__name__} and {type(other).__name__}")
        if other.n != self.n:
            raise StructuralError(f"order mismatch {self.n} vs {other.n}")
        _same_ring(self, other)

    def __getitem__(self, e):
        return self.c[e] if 0 <= e < self.n else self.ring.zero

    def is_zero(self):
        return not any(self.c)

    def __bool__(self):
        return any(self.c)

    def valuation(self):
        for e, v in enumerate(self.c):
            if v != 0:
                return e
        return math.inf

    def __eq__(self, other):
        if type(other) is type(self):
            return self.ring == other.ring and self.n == other.n and self.c == other.c
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._kind, self.ring, self.n, self.c))
        return self._hash

    def __add__(self, other):
        self._check(other)
        R = self.ring
        return self._raw(R, self.n, [R.add(a, b) for a, b in zip(self.c, other.c)])

    def __sub__(self, other):
        self._check(other)
        R = self.ring
        return self._raw(R, self.n, [R.sub(a, b) for a, b in zip(self.c, other.c)])

    def __neg__(self):
        R = self.ring
        return self._raw(R, self.n, [R.neg(a) for a in self.c])

    def __mul__(self, other):
        if not isinstance(other, _Dense):
            return self.scale(other)
        self._check(other)
        R = self.ring
        n = self.n
        out = [R.zero] * n
        b = [(j, v) for j, v in enumerate(other.c) if v != 0]
        mod = R.modulus if R.kind == "mod" else 0
        for i, a in enumerate(self.c):
            if a == 0:
                continue
            lim = n - i
            for j, v in b:
                if j >= lim:
                    break
                out[i + j] += a * v
        if mod:
            out = [x % mod for x in out]
        return self._raw(R, n, out)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, s):
        R = self.ring
        s = R.normalize(s)
        return self._raw(R, self.n, [R.mul(a, s) for a in self.c])

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = self.one(self.ring, self.n)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift_exp(self, k: int):
        R = self.ring
        vals = [R.zero] * self.n
        for e, v in enumerate(self.c):
            if e + k < self.n:
                vals[e + k] = v
        return self._raw(R, self.n, vals)

    def reduce(self, m: int):
        """Reduce to a smaller order m <= n."""
        if m > self.n:
            raise StructuralError(f"cannot raise order {self.n} -> {m}")
        return self._raw(self.ring, m, self.c[:m])

    def to_poly(self) -> Poly:
        return Poly(self.ring, {e: v for e, v in enumerate(self.c) if v != 0})

    def terms(self):
        return [(e, v) for e, v in enumerate(self.c) if v != 0]

    def derivative_raw(self):
        """Formal derivative (coefficient of t^{n-1} is lost by truncation)."""
        R = self.ring
        vals = [R.mul(self.c[e + 1], R.from_int(e + 1)) if e + 1 < self.n else R.zero
                for e in range(self.n)]
        return self._raw(R, self.n, vals)

    def __repr__(self):
        var = "t" if self._kind == "quot" else "X"
        body = self.to_poly().to_str(var)
        return f"{body} (mod {var}^{self.n})"

    def to_json(self) -> dict:
        return {"order": self.n, "kind": self._kind,
                "coeffs": {str(e): str(v) for e, v in self.terms()}}


class QuotPoly(_Dense):
    """Element of k[t]/(t^n)."""

    __slots__ = ()
    _kind = "quot"

    @classmethod
    def from_json(cls, ring: Ring, data) -> "QuotPoly":
        p = Poly.from_json(ring, data.get("coeffs", {}))
        return cls.from_poly(p, int(data["order"]))


class TruncPoly(_Dense):
    """Element of k[[X]] reduced mod X^N."""

    __slots__ = ()
    _kind = "trunc"

    @classmethod
    def from_json(cls, ring: Ring, data) -> "TruncPoly":
        p = Poly.from_json(ring, data.get("coeffs", {}))
        return cls.from_poly(p, int(data["order"]))


# -- bivariate ------------------------------------------------------------------

class BiPoly:
    """Sum of c_ij X^i (x) Y^j with finite support and commutative product."""

    __slots__ = ("ring", "_c", "_hash")

    def __init__(self, ring: Ring, coeffs=None):
        self.ring = ring
        c = {}
        if coeffs:
            items = coeffs.items() if isinstance(coeffs, dict) else coeffs
            for key, v in items:
                i, j = key
                v = ring.normalize(v)
                if v != 0:
                    k = (int(i), int(j))
                    c[k] = ring.add(c.get(k, ring.zero), v)
                    if c[k] == 0:
                        del c[k]
        self._c = c
        self._hash = None

    @classmethod
    def _raw(cls, ring, c):
        b = cls.__new__(cls)
        b.ring = ring
        b._c = c
        b._hash = None
        return b

    @classmethod
    def zero(cls, ring: Ring) -> "BiPoly":
        return cls._raw(ring, {})

    @classmethod
    def monomial(cls, ring: Ring, i: int, j: int, c=1) -> "BiPoly":
        return cls(ring, {(i, j): c})

    @classmethod
    def from_triples(cls, ring: Ring, triples: Iterable) -> "BiPoly":
        return cls(ring, [((i, j), v) for i, j, v in triples])

    @classmethod
    def from_columns(cls, ring: Ring, cols: Dict[int, Poly]) -> "BiPoly":
        """Build sum_j cols[j] (x) Y^j from X-polynomials."""
        c = {}
        for j, p in cols.items():
            for i, v in p.terms():
                c[(i, j)] = v
        return cls._raw(ring, c)

    def __getitem__(self, key):
        return self._c.get(key, self.ring.zero)

    def items(self):
        return sorted(self._c.items())

    def triples(self):
        return [(i, j, v) for (i, j), v in sorted(self._c.items())]

    def is_zero(self):
        return not self._c

    def __bool__(self):
        return bool(self._c)

    def __eq__(self, other):
        if isinstance(other, BiPoly):
            return self.ring == other.ring and self._c == other._c
        if isinstance(other, int) and other == 0:
            return not self._c
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._c.items())))
        return self._hash

    def __add__(self, other: "BiPoly") -> "BiPoly":
        _same_ring(self, other)
        R = self.ring
        c = dict(self._c)
        for k, v in other._c.items():
            s = R.add(c.get(k, R.zero), v)
            if s != 0:
                c[k] = s
            else:
                c.pop(k, None)
        return BiPoly._raw(R, c)

    def __neg__(self):
        R = self.ring
        return BiPoly._raw(R, {k: R.neg(v) for k, v in self._c.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, BiPoly):
            return self.scale(other)
        _same_ring(self, other)
        R = self.ring
        c: Dict[Tuple[int, int], object] = {}
        for (i1, j1), v1 in self._c.items():
            for (i2, j2), v2 in other._c.items():
                k = (i1 + i2, j1 + j2)
                c[k] = R.add(c.get(k, R.zero), R.mul(v1, v2))
        return BiPoly._raw(R, {k: v for k, v in c.items() if v != 0})

    def scale(self, s):
        R = self.ring
        s = R.normalize(s)
        return BiPoly._raw(R, {k: w for k, v in self._c.items() if (w := R.mul(v, s)) != 0})

    def column(self, j: int) -> Poly:
        """The X-polynomial multiplying Y^j."""
        return Poly._raw(self.ring, {i: v for (i, jj), v in self._c.items() if jj == j})

    def columns(self) -> Dict[int, Poly]:
        out: Dict[int, Dict[int, object]] = {}
        for (i, j), v in self._c.items():
            out.setdefault(j, {})[i] = v
        return {j: Poly._raw(self.ring, d) for j, d in sorted(out.items())}

    def row(self, i: int) -> Poly:
        """The Y-polynomial multiplying X^i."""
        return Poly._raw(self.ring, {j: v for (ii, j), v in self._c.items() if ii == i})

    def transpose(self) -> "BiPoly":
        return BiPoly._raw(self.ring, {(j, i): v for (i, j), v in self._c.items()})

    def max_degrees(self):
        if not self._c:
            return (DEG_ZERO, DEG_ZERO)
        return (max(i for i, _ in self._c), max(j for _, j in self._c))

    def shift(self, lam, xi) -> "BiPoly":
        """Substitute X -> X + lam and Y -> Y + xi."""
        R = self.ring
        lam = R.normalize(lam)
        xi = R.normalize(xi)
        out: Dict[Tuple[int, int], object] = {}
        for (m, n), v in self._c.items():
            for i in range(m + 1):
                ci = R.mul(R.from_int(binomial(m, i)), R.pow(lam, m - i))
                if ci == 0:
                    continue
                for j in range(n + 1):
                    cj = R.mul(R.from_int(binomial(n, j)), R.pow(xi, n - j))
                    w = R.mul(v, R.mul(ci, cj))
                    if w != 0:
                        out[(i, j)] = R.add(out.get((i, j), R.zero), w)
        return BiPoly._raw(R, {k: v for k, v in out.items() if v != 0})

    def __repr__(self):
        if not self._c:
            return "0"
        parts = []
        for (i, j), v in sorted(self._c.items()):
            x = "1" if i == 0 else ("X" if i == 1 else f"X^{i}")
            y = "1" if j == 0 else ("Y" if j == 1 else f"Y^{j}")
            parts.append(f"{v}*{x}(x){y}")
        return " + ".join(parts)

    def to_json(self) -> dict:
        return {"coeffs": [[i, j, str(v)] for (i, j), v in sorted(self._c.items())]}

    @classmethod
    def from_json(cls, ring: Ring, data) -> "BiPoly":
        if isinstance(data, dict):
            data = data["coeffs"]
        return cls.from_triples(ring, [(int(i), int(j), str(v)) for i, j, v in data])


def poly_from_json(ring: Ring, data):
    """Decode any of the polynomial JSON shapes."""
    if isinstance(data, dict) and "order" in data:
        kind = data.get("kind", "quot")
        cls = TruncPoly if kind == "trunc" else QuotPoly
        return cls.from_json(ring, data)
    return Poly.from_json(ring, data)
