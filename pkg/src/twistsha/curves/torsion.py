"""Torsion subgroups over Q and Q(sqrt D).

The order of E(K)_tors divides #E~(k_w) for every odd prime w of good
reduction unramified over Q, so the gcd of a few such counts bounds it.  The
l-primary parts are then found by repeated l-division: the x-coordinates of
the points Q with lQ = P are the roots in K of phi_l(x) - x(P) psi_l(x)^2.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd

import sympy

from twistsha.arith import factor, kronecker_symbol
from twistsha.curves.field import QuadElem, QuadField, field_sqrt
from twistsha.curves.weierstrass import CurveQ, Point

_X = sympy.Symbol("x")

BOUND_PRIMES = 12


def _reduction_counts(E: CurveQ, D: int | None, how_many: int = BOUND_PRIMES):
    from twistsha.localdata.tate import _count_prime_field

    disc = E.discriminant
    dens = 1
    for a in E.ainvs:
        dens *= a.denominator
    out = []
    p = 2
    while len(out) < how_many:
        p = int(sympy.nextprime(p))
        if disc.numerator % p == 0 or dens % p == 0 or disc.denominator % p == 0:
            continue
        if D is not None and (2 * D) % p == 0:
            continue
        ainvs = tuple(a.numerator * pow(a.denominator, -1, p) % p for a in E.ainvs)
        n = _count_prime_field(ainvs, p)
        if D is None or kronecker_symbol(D, p) == 1:
            out.append(n)
        else:
            ap = p + 1 - n
            out.append(p * p + 1 - (ap * ap - 2 * p))
    return out


def torsion_bound(E: CurveQ, field: QuadField | None = None) -> int:
    B = 0
    for n in _reduction_counts(E, field.D if field else None):
        B = gcd(B, n)
    return B


@lru_cache(maxsize=256)
def _division_data(ainvs, ell: int):
    """(f_ell-based psi_ell^2, phi_ell) as sympy Polys in x over QQ."""
    a1, a2, a3, a4, a6 = ainvs
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    x = _X

    def P(expr):
        return sympy.Poly(expr, x, domain="QQ")

    R = sympy.Rational
    b2, b4, b6, b8 = (R(c.numerator, c.denominator) for c in (b2, b4, b6, b8))
    F = P(4 * x**3 + b2 * x**2 + 2 * b4 * x + b6)
    f = {
        0: P(0),
        1: P(1),
        2: P(1),
        3: P(3 * x**4 + b2 * x**3 + 3 * b4 * x**2 + 3 * b6 * x + b8),
        4: P(
            2 * x**6
            + b2 * x**5
            + 5 * b4 * x**4
            + 10 * b6 * x**3
            + 10 * b8 * x**2
            + (b2 * b8 - b4 * b6) * x
            + (b4 * b8 - b6**2)
        ),
    }

    def get(m):
        if m in f:
            return f[m]
        k = m // 2
        if m % 2:
            if k % 2 == 0:
                val = F**2 * get(k + 2) * get(k) ** 3 - get(k - 1) * get(k + 1) ** 3
            else:
                val = get(k + 2) * get(k) ** 3 - F**2 * get(k - 1) * get(k + 1) ** 3
        else:
            val = get(k) * (get(k + 2) * get(k - 1) ** 2 - get(k - 2) * get(k + 1) ** 2)
        f[m] = val
        return val

    def psi_sq(m):
        return get(m) ** 2 * (F if m % 2 == 0 else 1)

    def phi(m):
        x_poly = P(x)
        if m % 2:
            return x_poly * psi_sq(m) - F * get(m + 1) * get(m - 1)
        return x_poly * psi_sq(m) - get(m + 1) * get(m - 1)

    return psi_sq(ell), phi(ell)


def _qq(c) -> sympy.Rational:
    return sympy.Rational(c.numerator, c.denominator)


def _roots_in_field(parts, D: int | None):
    """Roots in Q (D None) or Q(sqrt D) of g = parts[0] + sqrt(D)*parts[1].

    ``parts`` are sympy Polys over QQ.
    """
    A, B = parts
    if B.is_zero:
        N = A
    else:
        N = A * A - B * B * D
    if N.is_zero:
        raise ValueError("zero polynomial")
    cands = set()
    _, facs = sympy.factor_list(N.as_expr(), _X)
    for fac, _ in facs:
        poly = sympy.Poly(fac, _X, domain="QQ")
        deg = poly.degree()
        if deg == 1:
            c1, c0 = poly.all_coeffs()
            r = -c0 / c1
            cands.add(_frac(r))
        elif deg == 2 and D is not None:
            a, b, c = poly.all_coeffs()
            disc = b * b - 4 * a * c
            s = sympy.sqrt(disc / D)
            if s.is_Rational:
                for sign in (1, -1):
                    cands.add(QuadElem(_frac(-b / (2 * a)), _frac(sign * s / (2 * a)), D))
    roots = []
    for r in cands:
        if _eval_parts(A, B, r, D) == 0:
            roots.append(r)
    return roots


def _frac(r):
    r = sympy.Rational(r)
    return Fraction(int(r.p), int(r.q))


def _eval_poly(poly, x):
    acc = 0
    for c in poly.all_coeffs():
        acc = acc * x + _frac(c)
    return acc


def _eval_parts(A, B, x, D):
    val = _eval_poly(A, x)
    if not B.is_zero:
        val = val + _eval_poly(B, x) * QuadElem(0, 1, D)
    return val


def _split(c, D):
    """(rational part, sqrt(D) part) of a coordinate."""
    if isinstance(c, QuadElem):
        return c.a, c.b
    return c, Fraction(0)


def _points_with_x(E: CurveQ, x, field: QuadField | None):
    D = field.D if field else None
    F = E.two_division_value(x)
    s = field_sqrt(F, D)
    if s is None:
        return []
    lin = E.a1 * x + E.a3
    out = []
    for sign in (1, -1):
        y = (sign * s - lin) / 2
        out.append(Point(E, x, y, field))
    return out


def division_points(P: Point, ell: int, field: QuadField | None = None) -> list[Point]:
    """All Q over the field with ell*Q = P."""
    E = P.curve
    D = field.D if field else None
    psi2, phi = _division_data(E.ainvs, ell)
    if P.is_zero:
        parts = (psi2, sympy.Poly(0, _X, domain="QQ"))
        found = {Point.infinity(E, field)}
    else:
        xa, xb = _split(P.x, D)
        parts = (phi - psi2 * _qq(xa), psi2 * (-_qq(xb)))
        found = set()
    for x in _roots_in_field(parts, D):
        for Q in _points_with_x(E, x, field):
            if Q * ell == P.with_field(field):
                found.add(Q)
    return sorted(found)


def _primary_part(E: CurveQ, field, ell: int, e: int) -> set[Point]:
    O = Point.infinity(E, field)
    level = {O}
    frontier = [O]
    for _ in range(e):
        new = []
        for P in frontier:
            for Q in division_points(P, ell, field):
                if Q not in level:
                    new.append(Q)
        if not new:
            break
        level.update(new)
        frontier = new
    return level


def torsion_points(E: CurveQ, field: QuadField | None = None) -> list[Point]:
    """Every point of E(F)_tors, F = Q or the given quadratic field."""
    B = torsion_bound(E, field)
    pts = {Point.infinity(E, field)}
    for ell, e in factor(B).factors:
        part = _primary_part(E, field, ell, e)
        pts = {P + Q for P in pts for Q in part}
    return sorted(pts)


def finite_group_basis(points: list[Point]):
    """Generators and orders of a finite abelian group with at most two factors."""
    pts = list(points)
    N = len(pts)
    if N == 1:
        return [], []
    orders = {P: P.order(N) for P in pts}
    P1 = max(pts, key=lambda P: (orders[P], P.key()))
    n1 = orders[P1]
    if n1 == N:
        return [P1], [n1]
    n2 = N // n1
    cyc = {P1 * k for k in range(n1)}
    for Q in sorted(pts):
        if orders[Q] == n2 and not any(Q * k in cyc for k in range(1, n2)):
            return [P1, Q], [n1, n2]
    raise ArithmeticError("torsion group is not a product of two cyclic groups")
