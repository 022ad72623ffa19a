"""Exact integer/rational arithmetic: valuations, factorization and symbols.

Rationals are :class:`fractions.Fraction` throughout the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

import sympy

Rational = Fraction
RationalLike = Union[int, Fraction]

INFINITY = math.inf

# ~18 digits; nothing in the package needs to factor beyond this.
FACTOR_LIMIT = 10**19


class FactorizationLimitError(ValueError):
    pass


def to_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


@dataclass(frozen=True, order=True)
class Place:
    """A place of Q: a finite prime ``p`` or the real place (``p is None``)."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None and not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @property
    def is_infinite(self) -> bool:
        return self.p is None

    def __str__(self) -> str:
        return "inf" if self.p is None else str(self.p)


REAL_PLACE = Place(None)


@dataclass(frozen=True)
class PrimeFactorization:
    sign: int
    factors: tuple[tuple[int, int], ...]

    def value(self) -> int:
        n = self.sign
        for p, e in self.factors:
            n *= p**e
        return n

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]


def is_prime(n: int) -> bool:
    return n >= 2 and sympy.isprime(n)


def padic_valuation(x: RationalLike, p: int) -> int | float:
    """v_p(x); ``math.inf`` for zero."""
    x = to_rational(x)
    if x == 0:
        return INFINITY
    return _vint(x.numerator, p) - _vint(x.denominator, p)


def _vint(n: int, p: int) -> int:
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def unit_part(x: RationalLike, p: int) -> Fraction:
    """x / p^{v_p(x)} for nonzero x."""
    x = to_rational(x)
    v = padic_valuation(x, p)
    return x / Fraction(p) ** v


@lru_cache(maxsize=4096)
def factor(n: int) -> PrimeFactorization:
    """Deterministic factorization of a nonzero integer below ``FACTOR_LIMIT``."""
    if n == 0:
        raise ValueError("cannot factor 0")
    if abs(n) >= FACTOR_LIMIT:
        raise FactorizationLimitError(f"{n} exceeds the factorization limit")
    fac = sympy.factorint(abs(n))
    return PrimeFactorization(1 if n > 0 else -1, tuple(sorted(fac.items())))


def prime_divisors(n: int) -> list[int]:
    if n == 0:
        raise ValueError("0 has every prime as a divisor")
    return factor(n).primes


def omega0(n: int) -> int:
    """Number of distinct odd primes dividing n."""
    return sum(1 for p in prime_divisors(n) if p != 2)


def is_squarefree(n: int) -> bool:
    if n == 0:
        return False
    return all(e == 1 for _, e in factor(n).factors)


def squarefree_part(n: int) -> int:
    """The squarefree integer in the class n·Q*^2."""
    f = factor(n)
    out = f.sign
    for p, e in f.factors:
        if e % 2:
            out *= p
    return out


def fundamental_discriminant(d: int) -> int:
    """Discriminant of Q(sqrt(d)) for squarefree d != 1."""
    return d if d % 4 == 1 else 4 * d


def is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def rational_sqrt(x: Fraction) -> Fraction | None:
    x = to_rational(x)
    if x < 0:
        return None
    a, b = x.numerator, x.denominator
    ra, rb = math.isqrt(a), math.isqrt(b)
    if ra * ra == a and rb * rb == b:
        return Fraction(ra, rb)
    return None


def mod_rational(x: RationalLike, m: int) -> int:
    """Image of a rational with denominator prime to m in Z/m."""
    x = to_rational(x)
    return x.numerator * pow(x.denominator, -1, m) % m


def kronecker_symbol(a: int, n: int) -> int:
    """Kronecker symbol (a/n) extending the Jacobi symbol to all n."""
    if n == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    if n == 1:
        return result
    return result * sympy.jacobi_symbol(a % n, n)


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def hilbert_symbol(a: RationalLike, b: RationalLike, v: Place | int | None) -> int:
    """Hilbert symbol (a, b)_v over Q_v, by the closed unit/valuation formulas."""
    a, b = to_rational(a), to_rational(b)
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol needs nonzero arguments")
    p = v.p if isinstance(v, Place) else v
    if p is None:
        return -1 if (a < 0 and b < 0) else 1
    # scale by squares to reach integers
    a = a.numerator * a.denominator
    b = b.numerator * b.denominator
    alpha, beta = _vint(a, p), _vint(b, p)
    u, w = a // p**alpha, b // p**beta
    if p != 2:
        sign = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
        return sign * legendre(u, p) ** beta * legendre(w, p) ** alpha
    eps = lambda t: ((t - 1) // 2) % 2  # noqa: E731
    omg = lambda t: ((t * t - 1) // 8) % 2  # noqa: E731
    u8, w8 = u % 8, w % 8
    e = eps(u8) * eps(w8) + alpha * omg(w8) + beta * omg(u8)
    return -1 if e % 2 else 1


def primes_up_to(n: int) -> list[int]:
    return list(sympy.primerange(2, n + 1))


def divisors_from(f: PrimeFactorization) -> list[int]:
    out = [1]
    for p, e in f.factors:
        out = [d * p**k for d in out for k in range(e + 1)]
    return sorted(out)
