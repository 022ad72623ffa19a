"""Finite fields F_p and F_{p^2} with polynomial root finding.

Elements are encoded as ints ``a + b*p`` (``b = 0`` for prime fields), with
``a + b*t`` in F_p[t]/(t^2 - c1*t - c0).
"""

from __future__ import annotations

from functools import lru_cache

BRUTE_FORCE_LIMIT = 10**4


class GF:
    def __init__(self, p: int, f: int = 1, modulus: tuple[int, int] | None = None):
        if f not in (1, 2):
            raise ValueError("only F_p and F_{p^2} are supported")
        self.p = p
        self.f = f
        self.q = p**f
        # t^2 = c0 + c1*t
        self.c0, self.c1 = (modulus if modulus else (0, 0))
        if f == 2:
            self.c0 %= p
            self.c1 %= p
            if self._has_root_naive():
                raise ValueError("modulus of F_{p^2} is reducible")

    def _has_root_naive(self):
        p = self.p
        return any((t * t - self.c1 * t - self.c0) % p == 0 for t in range(p))

    def __repr__(self):
        return f"GF({self.q})"

    def __eq__(self, other):
        return isinstance(other, GF) and (self.p, self.f, self.c0, self.c1) == (
            other.p,
            other.f,
            other.c0,
            other.c1,
        )

    def __hash__(self):
        return hash((self.p, self.f, self.c0, self.c1))

    # encoding
    def pair(self, x: int) -> tuple[int, int]:
        return x % self.p, x // self.p

    def enc(self, a: int, b: int = 0) -> int:
        return a % self.p + (b % self.p) * self.p if self.f == 2 else a % self.p

    def from_int(self, n: int) -> int:
        return n % self.p

    # arithmetic
    def add(self, x, y):
        if self.f == 1:
            return (x + y) % self.p
        (a, b), (c, d) = self.pair(x), self.pair(y)
        return self.enc(a + c, b + d)

    def neg(self, x):
        if self.f == 1:
            return -x % self.p
        a, b = self.pair(x)
        return self.enc(-a, -b)

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def mul(self, x, y):
        p = self.p
        if self.f == 1:
            return x * y % p
        (a, b), (c, d) = self.pair(x), self.pair(y)
        bd = b * d
        return self.enc(a * c + bd * self.c0, a * d + b * c + bd * self.c1)

    def pow(self, x, k: int):
        out = 1
        while k:
            if k & 1:
                out = self.mul(out, x)
            x = self.mul(x, x)
            k >>= 1
        return out

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of 0 in finite field")
        return self.pow(x, self.q - 2)

    def div(self, x, y):
        return self.mul(x, self.inv(y))

    def elements(self):
        return range(self.q)

    def is_square(self, x) -> bool:
        if x == 0 or self.p == 2:
            return True
        return self.pow(x, (self.q - 1) // 2) == 1

    def sqrt(self, x):
        roots = self.roots([self.neg(x), 0, 1])
        if not roots:
            return None
        return min(roots)

    def evaluate(self, coeffs, x):
        acc = 0
        for c in reversed(coeffs):
            acc = self.add(self.mul(acc, x), c)
        return acc

    def roots(self, coeffs) -> list[int]:
        """Distinct roots in the field of sum coeffs[i] x^i."""
        coeffs = _trim(list(coeffs))
        if len(coeffs) <= 1:
            if coeffs and coeffs[0] != 0:
                return []
            raise ValueError("zero polynomial has every element as a root")
        if self.q <= BRUTE_FORCE_LIMIT or self.p == 2:
            return [x for x in self.elements() if self.evaluate(coeffs, x) == 0]
        return sorted(_cz_roots(self, coeffs))

    def has_root(self, coeffs) -> bool:
        return bool(self.roots(coeffs))


def _trim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


# -- polynomial helpers over GF, lists low -> high ----------------------------


def _pmod(F: GF, a, m):
    a = _trim(list(a))
    m = _trim(list(m))
    inv_lead = F.inv(m[-1])
    while len(a) >= len(m):
        coef = F.mul(a[-1], inv_lead)
        shift = len(a) - len(m)
        for i, c in enumerate(m):
            a[shift + i] = F.sub(a[shift + i], F.mul(coef, c))
        a = _trim(a)
    return a


def _pmul(F: GF, a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] = F.add(out[i + j], F.mul(x, y))
    return _trim(out)


def _pgcd(F: GF, a, b):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(F, a, b)
    if not a:
        return a
    inv = F.inv(a[-1])
    return [F.mul(c, inv) for c in a]


def _ppowmod(F: GF, base, k, m):
    out = [1]
    base = _pmod(F, base, m)
    while k:
        if k & 1:
            out = _pmod(F, _pmul(F, out, base), m)
        base = _pmod(F, _pmul(F, base, base), m)
        k >>= 1
    return out


def _psub(F: GF, a, b):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim([F.sub(x, y) for x, y in zip(a, b)])


def _pdiv_exact(F: GF, a, m):
    a = _trim(list(a))
    m = _trim(list(m))
    inv_lead = F.inv(m[-1])
    q = [0] * max(len(a) - len(m) + 1, 1)
    while len(a) >= len(m) and a:
        coef = F.mul(a[-1], inv_lead)
        shift = len(a) - len(m)
        q[shift] = coef
        for i, c in enumerate(m):
            a[shift + i] = F.sub(a[shift + i], F.mul(coef, c))
        a = _trim(a)
    return _trim(q)


def _cz_roots(F: GF, coeffs) -> set[int]:
    """Cantor-Zassenhaus root extraction for odd q, deterministic shifts."""
    xq = _ppowmod(F, [0, 1], F.q, coeffs)
    g = _pgcd(F, coeffs, _psub(F, xq, [0, 1]))
    roots: set[int] = set()
    stack = [g]
    while stack:
        h = stack.pop()
        if len(h) <= 1:
            continue
        if len(h) == 2:
            roots.add(F.neg(F.div(h[0], h[1])))
            continue
        for delta in range(F.q):
            w = _ppowmod(F, [delta, 1], (F.q - 1) // 2, h)
            d = _pgcd(F, h, _psub(F, w, [1]))
            if 1 < len(d) < len(h):
                stack.append(d)
                stack.append(_pdiv_exact(F, h, d))
                break
    return roots


@lru_cache(maxsize=None)
def prime_field(p: int) -> GF:
    return GF(p)


@lru_cache(maxsize=None)
def quadratic_extension(p: int, c0: int, c1: int = 0) -> GF:
    return GF(p, 2, (c0, c1))
