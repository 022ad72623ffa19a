"""Exact arithmetic in Q(sqrt(D))."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from twistsha.arith import (
    fundamental_discriminant,
    is_squarefree,
    rational_sqrt,
    to_rational,
)


@dataclass(frozen=True)
class QuadField:
    D: int

    def __post_init__(self):
        if self.D in (0, 1) or not is_squarefree(self.D):
            raise ValueError(f"D = {self.D} must be squarefree and not 0 or 1")

    @property
    def discriminant(self) -> int:
        return fundamental_discriminant(self.D)

    @property
    def is_imaginary(self) -> bool:
        return self.D < 0

    def __call__(self, a=0, b=0) -> "QuadElem":
        return QuadElem(to_rational(a), to_rational(b), self.D)

    @property
    def sqrtD(self) -> "QuadElem":
        return QuadElem(Fraction(0), Fraction(1), self.D)

    def __str__(self) -> str:
        return f"Q(sqrt({self.D}))"


class QuadElem:
    """a + b*sqrt(d) with rational a, b."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d: int):
        self.a = a if isinstance(a, Fraction) else Fraction(a)
        self.b = b if isinstance(b, Fraction) else Fraction(b)
        self.d = d

    def _coerce(self, other):
        if isinstance(other, QuadElem):
            if other.d != self.d and other.b != 0 and self.b != 0:
                raise ValueError("elements of different quadratic fields")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadElem(other, 0, self.d)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadElem(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadElem(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadElem(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QuadElem(self.a * other, self.b * other, self.d)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadElem(
            self.a * o.a + self.d * self.b * o.b, self.a * o.b + self.b * o.a, self.d
        )

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def trace(self) -> Fraction:
        return 2 * self.a

    def conjugate(self) -> "QuadElem":
        return QuadElem(self.a, -self.b, self.d)

    def inverse(self) -> "QuadElem":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in quadratic field")
        return QuadElem(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero in quadratic field")
            return QuadElem(self.a / other, self.b / other, self.d)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = QuadElem(1, 0, self.d)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, QuadElem):
            return self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def __repr__(self):
        if self.b == 0:
            return str(self.a)
        return f"{self.a} + {self.b}*sqrt({self.d})"


def conj(x):
    """Galois conjugation; identity on rationals."""
    return x.conjugate() if isinstance(x, QuadElem) else x


def is_rational_value(x) -> bool:
    return not isinstance(x, QuadElem) or x.b == 0


def as_rational(x) -> Fraction:
    if isinstance(x, QuadElem):
        if x.b != 0:
            raise ValueError(f"{x!r} is not rational")
        return x.a
    return to_rational(x)


def field_sqrt(x, D: int | None):
    """A square root of x inside Q(sqrt(D)) (or Q when D is None), else None."""
    if isinstance(x, QuadElem) and x.b != 0:
        if D is None:
            return None
        n = rational_sqrt(x.norm())
        if n is None:
            return None
        for s in (n, -n):
            u = rational_sqrt((x.a + s) / 2)
            if u:
                root = QuadElem(u, x.b / (2 * u), D)
                if root * root == x:
                    return root
        return None
    a = as_rational(x)
    r = rational_sqrt(a)
    if r is not None:
        return r if D is None else QuadElem(r, 0, D)
    if D is None:
        return None
    r = rational_sqrt(a / D)
    if r is not None:
        return QuadElem(0, r, D)
    return None
