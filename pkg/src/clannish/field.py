"""Exact ground fields: the rationals and prime fields GF(p)."""

from __future__ import annotations

import random
from fractions import Fraction


class GFElement:
    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, GFElement):
            if other.p != self.p:
                raise ValueError("mixing elements of different prime fields")
            return other.v
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GFElement(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GFElement(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GFElement(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GFElement(self.v * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return GFElement(-self.v, self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o % self.p == 0:
            raise ZeroDivisionError("division by zero in GF(%d)" % self.p)
        return GFElement(self.v * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GFElement(o, self.p) / self

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return (self.v - o) % self.p == 0

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return f"{self.v}"


class Field:
    """A ground field; call it to coerce ints, Fractions or strings."""

    def __init__(self, p: int | None = None):
        if p is not None and not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.zero = self(0)
        self.one = self(1)

    @property
    def characteristic(self) -> int:
        return self.p or 0

    @property
    def name(self) -> str:
        return "q" if self.p is None else f"gf:{self.p}"

    def __call__(self, x):
        if isinstance(x, str):
            return self.parse(x)
        if self.p is None:
            if isinstance(x, GFElement):
                raise TypeError("cannot coerce a GF(p) element into Q")
            return Fraction(x)
        if isinstance(x, GFElement):
            if x.p != self.p:
                raise ValueError("wrong characteristic")
            return x
        if isinstance(x, Fraction):
            return GFElement(x.numerator, self.p) / x.denominator
        return GFElement(int(x), self.p)

    def parse(self, s: str):
        s = s.strip()
        if "/" in s:
            num, den = s.split("/")
            return self(int(num)) / self(int(den))
        return self(int(s))

    def fmt(self, x) -> str:
        x = self(x)
        if self.p is None:
            return str(x)
        return str(x.v)

    def random(self, rng: random.Random, bound: int = 50):
        if self.p is None:
            return Fraction(rng.randint(-bound, bound))
        return GFElement(rng.randrange(self.p), self.p)

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "QQ" if self.p is None else f"GF({self.p})"

    @classmethod
    def from_name(cls, name: str) -> "Field":
        """Parse ``q`` or ``gf:<p>``."""
        name = name.strip().lower()
        if name in ("q", "qq", "rational"):
            return cls(None)
        if name.startswith("gf:"):
            return cls(int(name[3:]))
        raise ValueError(f"unknown field {name!r}; use 'q' or 'gf:<p>'")


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


QQ = Field(None)
DEFAULT_FIELD = Field(101)
