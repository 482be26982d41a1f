"""Exact commutative coefficient rings: Q, Z and Z/n.

Containers elsewhere in the package store *raw* canonical representatives
(``Fraction`` for Q, ``int`` for Z and Z/n) and ask the owning ``Ring`` to
normalize them.  ``RingValue`` is the boxed element used at API boundaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional, Union

from .errors import RingMismatch, StructuralError

RawValue = Union[int, Fraction]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class Ring:
    """Descriptor of a coefficient ring.

    ``kind`` is one of ``"Q"``, ``"Z"`` or ``"mod"``; ``modulus`` is only
    meaningful for ``"mod"``.
    """

    kind: str
    modulus: int = 0

    def __post_init__(self):
        if self.kind not in ("Q", "Z", "mod"):
            raise StructuralError(f"unknown ring kind {self.kind!r}")
        if self.kind == "mod" and self.modulus < 2:
            raise StructuralError("Z/n needs modulus >= 2")
        if self.kind != "mod" and self.modulus != 0:
            raise StructuralError("modulus only applies to Z/n")

    # construction helpers -------------------------------------------------
    @classmethod
    def rationals(cls) -> "Ring":
        return cls("Q")

    @classmethod
    def integers(cls) -> "Ring":
        return cls("Z")

    @classmethod
    def mod(cls, n: int) -> "Ring":
        return cls("mod", n)

    def __repr__(self):
        if self.kind == "mod":
            return f"Z/{self.modulus}"
        return self.kind

    # predicates -------------------------------------------------------------
    def is_domain(self) -> bool:
        if self.kind == "mod":
            return _is_prime(self.modulus)
        return True

    def is_field(self) -> bool:
        return self.kind == "Q" or (self.kind == "mod" and _is_prime(self.modulus))

    # raw arithmetic ---------------------------------------------------------
    def normalize(self, x: Any) -> RawValue:
        """Canonical representative of ``x`` (int, Fraction or "p/q" string)."""
        if isinstance(x, RingValue):
            if x.ring != self:
                raise RingMismatch(f"value in {x.ring} used in {self}")
            return x.raw
        if isinstance(x, str):
            x = Fraction(x.strip())
        if isinstance(x, bool):
            x = int(x)
        if self.kind == "Q":
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator != 1:
                if self.kind == "Z":
                    raise StructuralError(f"{x} is not an integer")
                inv = pow(x.denominator, -1, self.modulus)
                return (x.numerator * inv) % self.modulus
            x = x.numerator
        if not isinstance(x, int):
            raise StructuralError(f"cannot coerce {x!r} into {self}")
        if self.kind == "mod":
            return x % self.modulus
        return x

    @property
    def zero(self) -> RawValue:
        return Fraction(0) if self.kind == "Q" else 0

    @property
    def one(self) -> RawValue:
        return Fraction(1) if self.kind == "Q" else 1

    def add(self, a: RawValue, b: RawValue) -> RawValue:
        if self.kind == "mod":
            return (a + b) % self.modulus
        return a + b

    def sub(self, a: RawValue, b: RawValue) -> RawValue:
        if self.kind == "mod":
            return (a - b) % self.modulus
        return a - b

    def mul(self, a: RawValue, b: RawValue) -> RawValue:
        if self.kind == "mod":
            return (a * b) % self.modulus
        return a * b

    def neg(self, a: RawValue) -> RawValue:
        if self.kind == "mod":
            return (-a) % self.modulus
        return -a

    def pow(self, a: RawValue, e: int) -> RawValue:
        if e < 0:
            return self.pow(self.inverse(a), -e)
        if self.kind == "mod":
            return pow(a, e, self.modulus)
        return a ** e

    def inverse(self, a: RawValue) -> RawValue:
        if self.kind == "Q":
            if a == 0:
                raise ZeroDivisionError("0 has no inverse")
            return 1 / a
        if self.kind == "Z":
            if a in (1, -1):
                return a
            raise ZeroDivisionError(f"{a} is not a unit in Z")
        if math.gcd(a, self.modulus) != 1:
            raise ZeroDivisionError(f"{a} is not a unit in {self}")
        return pow(a, -1, self.modulus)

    def is_unit(self, a: RawValue) -> bool:
        try:
            self.inverse(a)
        except ZeroDivisionError:
            return False
        return True

    def nilpotency_index(self, a: RawValue) -> Optional[int]:
        """Smallest e >= 1 with a**e == 0, or None when a is not nilpotent."""
        if a == 0:
            return 1
        if self.kind != "mod":
            return None
        # a^e = 0 mod n iff every prime power p^k || n divides a^e.
        n = self.modulus
        e_needed = 1
        p = 2
        rest = n
        while p * p <= rest:
            if rest % p == 0:
                k = 0
                while rest % p == 0:
                    rest //= p
                    k += 1
                v = 0
                t = a
                while t % p == 0 and v < k:
                    t //= p
                    v += 1
                if v == 0:
                    return None
                e_needed = max(e_needed, -(-k // v))
            p += 1
        if rest > 1:
            if a % rest != 0:
                return None
        return e_needed

    def from_int(self, n: int) -> RawValue:
        return self.normalize(n)

    def to_json(self) -> Any:
        if self.kind == "mod":
            return {"mod": self.modulus}
        return self.kind

    @classmethod
    def from_json(cls, data: Any) -> "Ring":
        if data in ("Q", "Z"):
            return cls(data)
        if isinstance(data, dict) and "mod" in data:
            return cls.mod(int(data["mod"]))
        raise StructuralError(f"bad ring descriptor {data!r}")

    def value(self, x: Any) -> "RingValue":
        return RingValue(self, self.normalize(x))

    def format(self, a: RawValue) -> str:
        return str(a)


QQ = Ring.rationals()
ZZ = Ring.integers()


def raw_to_json(a: RawValue) -> str:
    return str(a)


@dataclass(frozen=True)
class RingValue:
    """An element of a coefficient ring in canonical form."""

    ring: Ring
    raw: Any

    def _check(self, other: Any) -> RawValue:
        if isinstance(other, RingValue):
            if other.ring != self.ring:
                raise RingMismatch(f"{self.ring} vs {other.ring}")
            return other.raw
        return self.ring.normalize(other)

    def __add__(self, other):
        return RingValue(self.ring, self.ring.add(self.raw, self._check(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return RingValue(self.ring, self.ring.sub(self.raw, self._check(other)))

    def __rsub__(self, other):
        return RingValue(self.ring, self.ring.sub(self._check(other), self.raw))

    def __mul__(self, other):
        return RingValue(self.ring, self.ring.mul(self.raw, self._check(other)))

    __rmul__ = __mul__

    def __neg__(self):
        return RingValue(self.ring, self.ring.neg(self.raw))

    def __pow__(self, e: int):
        return RingValue(self.ring, self.ring.pow(self.raw, e))

    def __eq__(self, other):
        if isinstance(other, RingValue):
            return self.ring == other.ring and self.raw == other.raw
        try:
            return self.raw == self.ring.normalize(other)
        except Exception:
            return NotImplemented

    def __hash__(self):
        return hash((self.ring, self.raw))

    def __bool__(self):
        return self.raw != 0

    def __repr__(self):
        return f"{self.raw}"

    def is_zero(self) -> bool:
        return self.raw == 0

    def nilpotency_index(self) -> Optional[int]:
        return self.ring.nilpotency_index(self.raw)

    def to_json(self) -> dict:
        return {"ring": self.ring.to_json(), "value": str(self.raw)}

    @classmethod
    def from_json(cls, data: dict) -> "RingValue":
        ring = Ring.from_json(data["ring"])
        return ring.value(str(data["value"]))


def add(a: RingValue, b: RingValue) -> RingValue:
    return a + b


def sub(a: RingValue, b: RingValue) -> RingValue:
    return a - b


def mul(a: RingValue, b: RingValue) -> RingValue:
    return a * b


def neg(a: RingValue) -> RingValue:
    return -a


def nilpotency_index(a: RingValue) -> Optional[int]:
    return a.nilpotency_index()


def binomial(n: int, k: int) -> int:
    """C(n, k), zero outside 0 <= k <= n."""
    if n < 0:
        raise ValueError("binomial needs n >= 0")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)
