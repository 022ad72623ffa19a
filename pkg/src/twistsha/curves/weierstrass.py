"""Weierstrass curves over Q and their points over Q or Q(sqrt(D))."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from twistsha.arith import to_rational
from twistsha.curves.field import QuadElem, QuadField, conj


class CurveError(ValueError):
    pass


@dataclass(frozen=True)
class CurveQ:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with rational coefficients."""

    a1: Fraction = Fraction(0)
    a2: Fraction = Fraction(0)
    a3: Fraction = Fraction(0)
    a4: Fraction = Fraction(0)
    a6: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("a1", "a2", "a3", "a4", "a6"):
            object.__setattr__(self, name, to_rational(getattr(self, name)))
        if self.discriminant == 0:
            raise CurveError(f"singular curve {self.ainvs}")

    @classmethod
    def short(cls, a, b) -> "CurveQ":
        return cls(0, 0, 0, a, b)

    @classmethod
    def from_ainvs(cls, ainvs) -> "CurveQ":
        if len(ainvs) == 2:
            return cls.short(*ainvs)
        if len(ainvs) != 5:
            raise CurveError("expected 2 or 5 coefficients")
        return cls(*ainvs)

    @property
    def ainvs(self) -> tuple[Fraction, ...]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def is_short(self) -> bool:
        return self.a1 == 0 and self.a2 == 0 and self.a3 == 0

    @property
    def b_invariants(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return b_invariants(self.ainvs)

    @property
    def c4(self) -> Fraction:
        b2, b4, _, _ = self.b_invariants
        return b2 * b2 - 24 * b4

    @property
    def c6(self) -> Fraction:
        b2, b4, b6, _ = self.b_invariants
        return -b2**3 + 36 * b2 * b4 - 216 * b6

    @property
    def discriminant(self) -> Fraction:
        return discriminant(self.ainvs)

    def short_model(self) -> "CurveQ":
        """Isomorphic model y^2 = x^3 - 27 c4 x - 54 c6."""
        if self.is_short:
            return self
        return CurveQ.short(-27 * self.c4, -54 * self.c6)

    def to_short_map(self, x, y):
        """Coordinates of (x, y) on :meth:`short_model`."""
        if self.is_short:
            return x, y
        b2 = self.b_invariants[0]
        return 36 * x + 3 * b2, 108 * (2 * y + self.a1 * x + self.a3)

    def twist(self, D: QuadField | int) -> "CurveQ":
        """Quadratic twist y^2 = x^3 + a D^2 x + b D^3 (short models only)."""
        if not self.is_short:
            raise CurveError("twist needs a short model; call short_model() first")
        d = D.D if isinstance(D, QuadField) else D
        return CurveQ.short(self.a4 * d * d, self.a6 * d**3)

    def contains(self, x, y) -> bool:
        return y * y + self.a1 * x * y + self.a3 * y == x**3 + self.a2 * x * x + self.a4 * x + self.a6

    def two_division_value(self, x):
        """4x^3 + b2 x^2 + 2 b4 x + b6 = (2y + a1 x + a3)^2."""
        b2, b4, b6, _ = self.b_invariants
        return 4 * x**3 + b2 * x * x + 2 * b4 * x + b6

    def __str__(self):
        a = [str(c) for c in self.ainvs]
        if self.is_short:
            return f"y^2 = x^3 + ({a[3]})x + ({a[4]})"
        return f"[{','.join(a)}]"


def b_invariants(ainvs):
    a1, a2, a3, a4, a6 = ainvs
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    return b2, b4, b6, b8


def discriminant(ainvs):
    b2, b4, b6, b8 = b_invariants(ainvs)
    return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6


class Point:
    """A point on ``curve`` with coordinates in Q or in ``field``; immutable."""

    __slots__ = ("curve", "field", "x", "y")

    def __init__(self, curve: CurveQ, x=None, y=None, field: QuadField | None = None, check=True):
        self.curve = curve
        self.field = field
        if x is None:
            self.x = self.y = None
            return
        self.x = _normalize(x, field)
        self.y = _normalize(y, field)
        if check and not curve.contains(self.x, self.y):
            raise CurveError(f"({x}, {y}) is not on {curve}")

    @classmethod
    def infinity(cls, curve: CurveQ, field: QuadField | None = None) -> "Point":
        return cls(curve, None, None, field)

    @property
    def is_zero(self) -> bool:
        return self.x is None

    def _check_same(self, other: "Point"):
        if other.curve != self.curve:
            raise CurveError("points on different curves")
        if self.field is not None and other.field is not None and self.field != other.field:
            raise CurveError("points over different fields")

    def _field(self, other: "Point"):
        return self.field if self.field is not None else other.field

    def __neg__(self) -> "Point":
        if self.is_zero:
            return self
        E = self.curve
        return Point(E, self.x, -self.y - E.a1 * self.x - E.a3, self.field, check=False)

    def __add__(self, other: "Point") -> "Point":
        self._check_same(other)
        field = self._field(other)
        if self.is_zero:
            return other.with_field(field)
        if other.is_zero:
            return self.with_field(field)
        E = self.curve
        a1, a2, a3, a4, a6 = E.ainvs
        x1, y1, x2, y2 = self.x, self.y, other.x, other.y
        if x1 == x2:
            if y1 + y2 + a1 * x2 + a3 == 0:
                return Point.infinity(E, field)
            lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / (2 * y1 + a1 * x1 + a3)
        else:
            lam = (y2 - y1) / (x2 - x1)
        nu = y1 - lam * x1
        x3 = lam * lam + a1 * lam - a2 - x1 - x2
        y3 = -(lam + a1) * x3 - nu - a3
        return Point(E, x3, y3, field, check=False)

    def __sub__(self, other: "Point") -> "Point":
        return self + (-other)

    def __mul__(self, n: int) -> "Point":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return (-self) * (-n)
        out = Point.infinity(self.curve, self.field)
        base = self
        while n:
            if n & 1:
                out = out + base
            base = base + base
            n >>= 1
        return out

    __rmul__ = __mul__

    def with_field(self, field) -> "Point":
        if field is self.field or field is None:
            return self
        if self.is_zero:
            return Point.infinity(self.curve, field)
        return Point(self.curve, self.x, self.y, field, check=False)

    def sigma(self) -> "Point":
        """Coordinatewise conjugation sqrt(D) -> -sqrt(D)."""
        if self.is_zero:
            return self
        return Point(self.curve, conj(self.x), conj(self.y), self.field, check=False)

    def order(self, bound: int = 64) -> int | None:
        """Exact order if at most ``bound``, else None."""
        Q = self
        for k in range(1, bound + 1):
            if Q.is_zero:
                return k
            Q = Q + self
        return None

    @property
    def is_rational(self) -> bool:
        if self.is_zero:
            return True
        return all(not isinstance(c, QuadElem) or c.b == 0 for c in (self.x, self.y))

    def key(self):
        if self.is_zero:
            return (0,)
        return (1, _coords(self.x), _coords(self.y))

    def __eq__(self, other):
        if not isinstance(other, Point):
            return NotImplemented
        return self.curve == other.curve and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __lt__(self, other: "Point"):
        return self.key() < other.key()

    def __repr__(self):
        if self.is_zero:
            return "O"
        return f"({self.x!r}, {self.y!r})"


def _normalize(c, field):
    if isinstance(c, QuadElem):
        return c if c.b != 0 else c.a
    c = to_rational(c)
    return c


def _coords(c):
    if isinstance(c, QuadElem):
        return (c.a, c.b)
    return (c, Fraction(0))


def phi1(P: Point) -> Point:
    """P + sigma(P)."""
    return P + P.sigma()


def phi2(P: Point) -> Point:
    """P - sigma(P)."""
    return P - P.sigma()


def twist_map(P: Point, field: QuadField, curve: CurveQ) -> Point:
    """phi_D: E_D -> E over Q(sqrt D), (x, y) -> (x/D, y/D^2 * sqrt D)."""
    if P.is_zero:
        return Point.infinity(curve, field)
    D = field.D
    x = field(P.x) / D
    y = field(0, P.y / (D * D))
    return Point(curve, x, y, field)


def sigma(P: Point) -> Point:
    return P.sigma()
