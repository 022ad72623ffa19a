"""Tate's algorithm over Q_p and quadratic extensions of Q_p."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from twistsha.arith import prime_divisors
from twistsha.curves.field import QuadElem
from twistsha.curves.weierstrass import CurveQ, b_invariants, discriminant
from twistsha.localdata.fields import LocalArith, LocalFieldDesc, base_field
from twistsha.localdata.residue import GF, prime_field

GOOD = "good"
SPLIT_MULT = "split-multiplicative"
NONSPLIT_MULT = "nonsplit-multiplicative"
ADDITIVE = "additive"

ORDINARY = "ordinary"
SUPERSINGULAR = "supersingular"

DEFAULT_PRECISION = 64
MAX_PRECISION = 512


class LocalDataError(ValueError):
    pass


class PrecisionExhausted(LocalDataError):
    pass


@dataclass(frozen=True)
class ReductionData:
    kodaira: str
    v_min_disc: int
    tamagawa: int
    kind: str
    good_subkind: str = "n/a"
    conductor_exponent: int = 0
    minimal_model: tuple = ()

    @property
    def is_good(self) -> bool:
        return self.kind == GOOD

    @property
    def is_multiplicative(self) -> bool:
        return self.kind in (SPLIT_MULT, NONSPLIT_MULT)

    @property
    def is_additive(self) -> bool:
        return self.kind == ADDITIVE


@dataclass(frozen=True)
class ResidueCurveInfo:
    count: int
    two_torsion_dim: int
    trace: int
    q: int

    @property
    def supersingular(self) -> bool:
        p = _prime_of(self.q)
        return self.trace % p == 0


def _prime_of(q: int) -> int:
    for p in range(2, q + 1):
        if q % p == 0:
            return p
    raise ValueError(q)


def rst_transform(ainvs, r, s, t):
    """Coefficients after x = x' + r, y = y' + s x' + t."""
    a1, a2, a3, a4, a6 = ainvs
    return (
        a1 + 2 * s,
        a2 - s * a1 + 3 * r - s * s,
        a3 + r * a1 + 2 * t,
        a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t,
        a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1,
    )


def _clean(x):
    if isinstance(x, QuadElem) and x.b == 0:
        return x.a
    return x


def tate_reduction(E: CurveQ, L: LocalFieldDesc | int, precision: int = DEFAULT_PRECISION) -> ReductionData:
    """Minimal-model reduction data of E over the local field L."""
    if isinstance(L, int):
        L = base_field(L)
    if precision < 1:
        raise ValueError("precision must be positive")
    cap = precision
    while True:
        try:
            return _tate_cached(E.ainvs, L, cap)
        except PrecisionExhausted:
            if cap >= MAX_PRECISION:
                raise
            cap = min(2 * cap, MAX_PRECISION)


@lru_cache(maxsize=8192)
def _tate_cached(ainvs, L: LocalFieldDesc, cap: int) -> ReductionData:
    return _tate(tuple(ainvs), L, cap)


def _tate(A, L: LocalFieldDesc, cap: int) -> ReductionData:
    R = LocalArith(L)
    k = R.k
    p = R.p
    pi = R.pi
    val = R.val
    pdiv = R.divisible
    res = R.residue
    lift = R.lift

    def preduce(x):
        return _clean(R.reduce(x))

    def pquot(x, y):
        # lift of res(x)/res(y)
        return lift(k.div(res(x), res(y)))

    def proot(x, n):
        # unique n-th root in char n (Frobenius is bijective)
        return lift(k.pow(res(x), k.q // n))

    def quadroots(a, b, c) -> bool:
        a, b, c = res(a), res(b), res(c)
        if a == 0:
            return b != 0 or c == 0
        return k.has_root([c, b, a])

    def cubicroots(b, c, d) -> int:
        return len(k.roots([res(d), res(c), res(b), 1]))

    half = 0 if p == 2 else lift(k.inv(2))

    # integral model
    vals = [val(a) for a in A]
    shift = 0
    for i, v in zip((1, 2, 3, 4, 6), vals):
        if v != math.inf and v < 0:
            shift = max(shift, (-v + i - 1) // i)
    if shift:
        A = tuple(_clean(a * pi ** (i * shift)) for a, i in zip(A, (1, 2, 3, 4, 6)))

    while True:
        a1, a2, a3, a4, a6 = A
        b2, b4, b6, b8 = b_invariants(A)
        c4 = b2 * b2 - 24 * b4
        c6 = -(b2**3) + 36 * b2 * b4 - 216 * b6
        delta = discriminant(A)
        vd = val(delta)
        if vd > cap:
            raise PrecisionExhausted(f"valuation {vd} exceeds cap {cap}")
        if vd == 0:
            return _good(A, R, vd)

        # move the singular point to (0, 0)
        if p == 2:
            if pdiv(b2):
                r = proot(a4, 2)
                t = proot(((r + a2) * r + a4) * r + a6, 2)
            else:
                r = pquot(a3, a1)
                t = pquot(a4 + r * r, a1)
        elif p == 3:
            if pdiv(b2):
                r = proot(-b6, 3)
            else:
                r = -pquot(b4, b2)
            t = a1 * r + a3
        else:
            if pdiv(c4):
                r = -pquot(b2, 12)
            else:
                r = -pquot(c6 + b2 * c4, 12 * c4)
            t = -half * (a1 * r + a3)
        r, t = preduce(r), preduce(t)
        A = tuple(_clean(x) for x in rst_transform(A, r, 0, t))
        a1, a2, a3, a4, a6 = A
        b2, b4, b6, b8 = b_invariants(A)

        if not pdiv(b2):
            m = int(vd)
            if quadroots(1, a1, -a2):
                return ReductionData(f"I{m}", m, m, SPLIT_MULT, conductor_exponent=1, minimal_model=A)
            c = 2 if m % 2 == 0 else 1
            return ReductionData(f"I{m}", m, c, NONSPLIT_MULT, conductor_exponent=1, minimal_model=A)

        if val(a6) < 2:
            return _additive("II", vd, 1, A, 0)
        if val(b8) < 3:
            return _additive("III", vd, 2, A, 1)
        if val(b6) < 3:
            c = 3 if quadroots(1, a3 / pi, -a6 / pi**2) else 1
            return _additive("IV", vd, c, A, 2)

        if p == 2:
            s = proot(a2, 2)
            t = pi * proot(a6 / pi**2, 2)
        elif p == 3:
            s = a1
            t = a3
        else:
            s = -a1 * half
            t = -a3 * half
        A = tuple(_clean(x) for x in rst_transform(A, 0, s, t))
        a1, a2, a3, a4, a6 = A

        b = a2 / pi
        c = a4 / pi**2
        d = a6 / pi**3
        bb, cc, bc = b * b, c * c, b * c
        w = 27 * d * d - bb * cc + 4 * b * bb * d - 18 * bc * d + 4 * c * cc
        x = 3 * c - bb
        if pdiv(w):
            sw = 3 if pdiv(x) else 2
        else:
            sw = 1

        if sw == 1:
            return _additive("I0*", vd, 1 + cubicroots(b, c, d), A, 4)

        if sw == 2:
            if p == 2:
                r = proot(c, 2)
            elif p == 3:
                r = pquot(c, b)
            else:
                r = pquot(bc - 9 * d, 2 * x)
            r = pi * preduce(r)
            A = tuple(_clean(y) for y in rst_transform(A, r, 0, 0))
            a1, a2, a3, a4, a6 = A
            ix = iy = 3
            mx = my = pi**2
            while True:
                a2t = a2 / pi
                a3t = a3 / my
                a4t = a4 / (pi * mx)
                a6t = a6 / (mx * my)
                if pdiv(a3t * a3t + 4 * a6t):
                    if p == 2:
                        t = my * proot(a6t, 2)
                    else:
                        t = my * preduce(-a3t * half)
                    A = tuple(_clean(y) for y in rst_transform(A, 0, 0, t))
                    a1, a2, a3, a4, a6 = A
                    my = my * pi
                    iy += 1
                    a2t = a2 / pi
                    a3t = a3 / my
                    a4t = a4 / (pi * mx)
                    a6t = a6 / (mx * my)
                    if pdiv(a4t * a4t - 4 * a6t * a2t):
                        if p == 2:
                            r = mx * proot(a6t * lift(k.inv(res(a2t))), 2)
                        else:
                            r = mx * preduce(-a4t * lift(k.inv(res(2 * a2t))))
                        A = tuple(_clean(y) for y in rst_transform(A, r, 0, 0))
                        a1, a2, a3, a4, a6 = A
                        mx = mx * pi
                        ix += 1
                        if ix + iy > 2 * cap:
                            raise PrecisionExhausted("I_n* loop exceeded cap")
                    else:
                        cp = 4 if quadroots(a2t, a4t, a6t) else 2
                        break
                else:
                    cp = 4 if quadroots(1, a3t, -a6t) else 2
                    break
            m = ix + iy - 5
            return _additive(f"I{m}*", vd, cp, A, m + 4)

        # triple root
        if p == 2:
            r = b
        elif p == 3:
            r = proot(-d, 3)
        else:
            r = -b * lift(k.inv(3))
        r = pi * preduce(r)
        A = tuple(_clean(y) for y in rst_transform(A, r, 0, 0))
        a1, a2, a3, a4, a6 = A
        x3 = a3 / pi**2
        x6 = a6 / pi**4
        if not pdiv(x3 * x3 + 4 * x6):
            c = 3 if quadroots(1, x3, -x6) else 1
            return _additive("IV*", vd, c, A, 6)
        if p == 2:
            t = -(pi**2) * proot(x6, 2)
        else:
            t = pi**2 * preduce(-x3 * half)
        A = tuple(_clean(y) for y in rst_transform(A, 0, 0, t))
        a1, a2, a3, a4, a6 = A
        if val(a4) < 4:
            return _additive("III*", vd, 2, A, 7)
        if val(a6) < 6:
            return _additive("II*", vd, 1, A, 8)
        # non-minimal: scale by the uniformizer
        A = (
            _clean(a1 / pi),
            _clean(a2 / pi**2),
            _clean(a3 / pi**3),
            _clean(a4 / pi**4),
            _clean(a6 / pi**6),
        )


def _additive(kodaira, vd, c, A, m_components_minus_one):
    # Ogg: f = v(Delta) + 1 - m, m = number of geometric components
    m = m_components_minus_one + 1
    return ReductionData(kodaira, int(vd), c, ADDITIVE, conductor_exponent=int(vd) + 1 - m, minimal_model=A)


def _good(A, R: LocalArith, vd) -> ReductionData:
    info = _residue_info(A, R)
    sub = SUPERSINGULAR if info.supersingular else ORDINARY
    return ReductionData("I0", 0, 1, GOOD, sub, 0, A)


def _reduced_ainvs(A, R: LocalArith):
    return tuple(R.residue(a) for a in A)


def _residue_info(A, R: LocalArith) -> ResidueCurveInfo:
    k = R.k
    a = _reduced_ainvs(A, R)
    if k.f == 2 and R.L.kind != "base":
        # unramified quadratic: count over F_p first when the model is rational
        if all(not isinstance(x, QuadElem) for x in A):
            base = _count_points(tuple(x % R.p for x in a), prime_field(R.p))
            ap = R.p + 1 - base
            apq = ap * ap - 2 * R.p
            count = k.q + 1 - apq
            return ResidueCurveInfo(count, _two_torsion_dim(a, k), apq, k.q)
    count = _count_points(a, k)
    return ResidueCurveInfo(count, _two_torsion_dim(a, k), k.q + 1 - count, k.q)


def _count_points(a, k: GF) -> int:
    a1, a2, a3, a4, a6 = a
    if k.p == 2:
        total = 1
        for x in k.elements():
            rhs = k.add(k.mul(k.add(k.mul(k.add(x, a2), x), a4), x), a6)
            lin = k.add(k.mul(a1, x), a3)
            for y in k.elements():
                if k.add(k.mul(y, k.add(y, lin)), rhs) == 0:
                    total += 1
        return total
    if k.f == 1:
        return _count_prime_field(a, k.p)
    # y^2 = 4x^3 + b2 x^2 + 2 b4 x + b6 after completing the square
    b2, b4, b6 = _residue_b246(a, k)
    total = 1
    for x in k.elements():
        f = k.evaluate([b6, k.mul(k.enc(2), b4), b2, k.enc(4)], x)
        if f == 0:
            total += 1
        elif k.is_square(f):
            total += 2
    return total


@lru_cache(maxsize=65536)
def _count_prime_field(a, p: int) -> int:
    a1, a2, a3, a4, a6 = a
    b2 = (a1 * a1 + 4 * a2) % p
    b4 = (2 * a4 + a1 * a3) % p
    b6 = (a3 * a3 + 4 * a6) % p
    # Legendre sum via a table of squares
    sq = bytearray(p)
    for y in range(1, (p + 1) // 2):
        sq[y * y % p] = 1
    total = 1
    for x in range(p):
        f = (((4 * x + b2) * x + 2 * b4) * x + b6) % p
        if f == 0:
            total += 1
        elif sq[f]:
            total += 2
    return total


def _residue_b246(a, k: GF):
    a1, a2, a3, a4, a6 = a
    two, four = k.enc(2), k.enc(4)
    b2 = k.add(k.mul(a1, a1), k.mul(four, a2))
    b4 = k.add(k.mul(two, a4), k.mul(a1, a3))
    b6 = k.add(k.mul(a3, a3), k.mul(four, a6))
    return b2, b4, b6


def _two_torsion_dim(a, k: GF) -> int:
    a1, a2, a3, a4, a6 = a
    if k.p == 2:
        pts = 1
        for x in k.elements():
            lin = k.add(k.mul(a1, x), a3)
            if lin != 0:
                continue
            # y^2 = rhs has exactly one root in characteristic 2
            pts += 1
        return {1: 0, 2: 1, 4: 2}[pts]
    b2, b4, b6 = _residue_b246(a, k)
    n = len(k.roots([b6, k.mul(k.enc(2), b4), b2, k.enc(4)]))
    return {0: 0, 1: 1, 3: 2}[n]


def residue_curve_info(E: CurveQ, L: LocalFieldDesc | int) -> ResidueCurveInfo:
    """Point count, trace and 2-torsion rank of the reduction of a minimal model."""
    if isinstance(L, int):
        L = base_field(L)
    data = tate_reduction(E, L)
    if not data.is_good:
        raise LocalDataError(f"{E} has bad reduction over {L}")
    return _residue_info(data.minimal_model, LocalArith(L))


def conductor_exponent(E: CurveQ, p: int) -> int:
    return tate_reduction(E, p).conductor_exponent


def bad_prime_candidates(E: CurveQ) -> list[int]:
    """Primes dividing the discriminant or a coefficient denominator."""
    primes = set(prime_divisors(E.discriminant.numerator))
    for x in (E.discriminant, *E.ainvs):
        if x.denominator > 1:
            primes |= set(prime_divisors(x.denominator))
    return sorted(primes)


def conductor(E: CurveQ) -> int:
    N = 1
    for p in bad_prime_candidates(E):
        N *= p ** conductor_exponent(E, p)
    return N
