"""Quadratic extensions of Q_p and their arithmetic inside a global model.

A local field Q_p(sqrt d) is represented by a squarefree integer ``d`` in the
same square class as the requested D, chosen so that p does not split in
Q(sqrt d).  Elements of Q(sqrt d) then have a single w-adic valuation,
v_w(x) = e * v_p(N(x)) / 2, and all Tate-algorithm steps run on exact
rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from twistsha.arith import (
    INFINITY,
    is_prime,
    is_squarefree,
    kronecker_symbol,
    legendre,
    padic_valuation,
    to_rational,
    fundamental_discriminant,
)
from twistsha.curves.field import QuadElem
from twistsha.localdata.residue import GF, prime_field, quadratic_extension

BASE = "base"
RAMIFIED = "ramified-quadratic"
UNRAMIFIED = "unramified-quadratic"

SPLIT = "split"
INERT = "inert"
RAMIFIED_PRIME = "ramified"


@dataclass(frozen=True)
class LocalFieldDesc:
    """Q_p (kind base, d = 1) or Q_p(sqrt d)."""

    p: int
    kind: str
    d: int = 1
    e: int = 1
    f: int = 1
    d_w: int = 1

    @property
    def q(self) -> int:
        return self.p**self.f

    @property
    def is_base(self) -> bool:
        return self.kind == BASE

    @property
    def label(self) -> str:
        if self.is_base:
            return f"Q{self.p}"
        return f"Q{self.p}(sqrt({self.d}))"

    def __str__(self):
        return self.label


def splitting_type(D: int, p: int) -> str:
    if D in (0, 1) or not is_squarefree(D):
        raise ValueError(f"D = {D} must be squarefree and not 0 or 1")
    k = kronecker_symbol(fundamental_discriminant(D), p)
    return {1: SPLIT, -1: INERT, 0: RAMIFIED_PRIME}[k]


# representatives of Q2*/Q2*^2 by (v_2 mod 2, unit mod 8)
_Q2_REPS = {
    (0, 1): 1,
    (0, 3): 3,
    (0, 5): -3,
    (0, 7): -1,
    (1, 1): 2,
    (1, 3): 6,
    (1, 5): -6,
    (1, 7): -2,
}


def _q2_rep(n) -> int:
    n = to_rational(n)
    v = padic_valuation(n, 2)
    u = n / Fraction(2) ** v
    unit = u.numerator * u.denominator % 8
    return _Q2_REPS[(v % 2, unit)]


@lru_cache(maxsize=None)
def smallest_nonresidue(p: int) -> int:
    a = 2
    while legendre(a, p) != -1:
        a += 1
    return a


def square_class_rep(n, p: int) -> int:
    """Squarefree integer in the class of n in Q_p*/Q_p*^2 (1 for squares)."""
    n = to_rational(n)
    if n == 0:
        raise ValueError("0 has no square class")
    if p == 2:
        return _q2_rep(n)
    v = padic_valuation(n, p)
    u = n / Fraction(p) ** v
    unit = u.numerator * u.denominator
    base = 1 if legendre(unit, p) == 1 else smallest_nonresidue(p)
    return base * (p if v % 2 else 1)


def _desc_for_rep(p: int, d: int) -> LocalFieldDesc:
    if d == 1:
        return LocalFieldDesc(p, BASE)
    if padic_valuation(fundamental_discriminant(d), p) == 0:
        return LocalFieldDesc(p, UNRAMIFIED, d, e=1, f=2, d_w=d)
    return LocalFieldDesc(p, RAMIFIED, d, e=2, f=1, d_w=fundamental_discriminant(d))


def local_field(D, p: int) -> LocalFieldDesc:
    """The completion of Q(sqrt D) at a prime above p, up to isomorphism."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return _desc_for_rep(p, square_class_rep(D, p))


def classify_q2_extension(n: int) -> LocalFieldDesc:
    if n in (0, 1) or not is_squarefree(n):
        raise ValueError(f"n = {n} must be squarefree and not 0 or 1")
    return local_field(n, 2)


def base_field(p: int) -> LocalFieldDesc:
    return LocalFieldDesc(p, BASE)


class LocalArith:
    """Valuation, residue map and lifting for elements of Q(sqrt d) at w | p."""

    def __init__(self, L: LocalFieldDesc):
        self.L = L
        p, d = L.p, L.d
        self.p = p
        self.e = L.e
        if L.is_base:
            self.k: GF = prime_field(p)
            self.pi = Fraction(p)
        elif L.kind == UNRAMIFIED:
            if p == 2:
                # Z2[w], w = (1 + sqrt d)/2, w^2 = w + (d - 1)/4
                self.k = quadratic_extension(2, (d - 1) // 4, 1)
            else:
                self.k = quadratic_extension(p, d % p, 0)
            self.pi = Fraction(p)
        else:
            self.k = prime_field(p)
            if p == 2 and d % 4 == 3:
                self.pi = QuadElem(1, 1, d)
            else:
                self.pi = QuadElem(0, 1, d)

    def val(self, x) -> int | float:
        if isinstance(x, QuadElem):
            if x.b == 0:
                x = x.a
            else:
                return self.e * padic_valuation(x.norm(), self.p) // 2
        if x == 0:
            return INFINITY
        return self.e * padic_valuation(x, self.p)

    def divisible(self, x) -> bool:
        return self.val(x) > 0

    def residue(self, x) -> int:
        if self.val(x) < 0:
            raise ValueError(f"{x!r} is not integral at {self.L}")
        p, L = self.p, self.L
        if isinstance(x, QuadElem):
            a, b = x.a, x.b
        else:
            a, b = to_rational(x), Fraction(0)
        if L.is_base:
            return _mod(a, p)
        if L.kind == UNRAMIFIED:
            if p == 2:
                return self.k.enc(_mod(a - b, 2), _mod(2 * b, 2))
            return self.k.enc(_mod(a, p), _mod(b, p))
        if p == 2 and L.d % 4 == 3:
            return _mod(a + b, 2)
        return _mod(a, p)

    def lift(self, r: int):
        """A global element reducing to the residue-field element ``r``."""
        if self.k.f == 1:
            return Fraction(r)
        a, b = self.k.pair(r)
        if self.p == 2:
            # a + b*w
            return _simplify(QuadElem(Fraction(a) + Fraction(b, 2), Fraction(b, 2), self.L.d))
        return _simplify(QuadElem(a, b, self.L.d))

    def reduce(self, x):
        """Lift of the residue of x (a representative with small height)."""
        return self.lift(self.residue(x))


def _mod(x: Fraction, p: int) -> int:
    return x.numerator * pow(x.denominator, -1, p) % p


def _simplify(x):
    if isinstance(x, QuadElem) and x.b == 0:
        return x.a
    return x
