"""The Mazur-Kramer-Tunnell index delta(E, Q, K) for K = Q(sqrt D).

Two routes are implemented: the discriminant/Tamagawa product over the places
of S_0, and Kramer's decomposition delta_g + delta_m + delta_a where the
additive term reuses the product term at that place.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from twistsha.arith import (
    REAL_PLACE,
    Place,
    fundamental_discriminant,
    hilbert_symbol,
    omega0,
    padic_valuation,
    prime_divisors,
)
from twistsha.curves.field import QuadField
from twistsha.curves.weierstrass import CurveQ
from twistsha.localdata.fields import INERT, RAMIFIED_PRIME, local_field, splitting_type
from twistsha.localdata.tate import (
    ADDITIVE,
    GOOD,
    SPLIT_MULT,
    SUPERSINGULAR,
    bad_prime_candidates,
    residue_curve_info,
    tate_reduction,
)


class MktError(ArithmeticError):
    """A local term that should be a power of 2 is not (signals a local-data bug)."""


def _as_field(D) -> QuadField:
    return D if isinstance(D, QuadField) else QuadField(int(D))


@dataclass(frozen=True)
class PlaceClassification:
    S_inf1: frozenset
    S: frozenset
    S0: frozenset
    S_g: frozenset
    S_gu: frozenset
    S_a: frozenset
    S_ar: frozenset
    S_smr: frozenset
    S_nsmr_inert: frozenset
    S_nsmr_ramified: frozenset

    @property
    def S_nsmr(self) -> frozenset:
        return self.S_nsmr_inert | self.S_nsmr_ramified

    def kind_of(self, v: Place) -> str:
        for name in ("S_g", "S_gu", "S_a", "S_smr", "S_nsmr_inert", "S_nsmr_ramified"):
            if v in getattr(self, name):
                return name
        raise KeyError(v)


def bad_primes(E: CurveQ) -> list[int]:
    return [p for p in bad_prime_candidates(E) if not tate_reduction(E, p).is_good]


def classify_places(E: CurveQ, D) -> PlaceClassification:
    K = _as_field(D)
    ramified = set(prime_divisors(K.discriminant))
    S = sorted(ramified | set(bad_primes(E)))
    sets = {k: set() for k in ("S0", "S_g", "S_gu", "S_a", "S_smr", "S_nsmr_inert", "S_nsmr_ramified")}
    for p in S:
        kind = splitting_type(K.D, p)
        if kind not in (INERT, RAMIFIED_PRIME):
            continue
        v = Place(p)
        sets["S0"].add(v)
        red = tate_reduction(E, p)
        if red.kind == GOOD:
            sets["S_g" if p != 2 else "S_gu"].add(v)
        elif red.kind == ADDITIVE:
            sets["S_a"].add(v)
        elif red.kind == SPLIT_MULT:
            sets["S_smr"].add(v)
        elif kind == INERT:
            sets["S_nsmr_inert"].add(v)
        else:
            sets["S_nsmr_ramified"].add(v)
    return PlaceClassification(
        S_inf1=frozenset({REAL_PLACE}),
        S=frozenset(Place(p) for p in S),
        S0=frozenset(sets["S0"]),
        S_g=frozenset(sets["S_g"]),
        S_gu=frozenset(sets["S_gu"]),
        S_a=frozenset(sets["S_a"]),
        S_ar=frozenset(sets["S_a"]),
        S_smr=frozenset(sets["S_smr"]),
        S_nsmr_inert=frozenset(sets["S_nsmr_inert"]),
        S_nsmr_ramified=frozenset(sets["S_nsmr_ramified"]),
    )


def delta_infinity(E: CurveQ, D) -> int:
    K = _as_field(D)
    return int(K.D < 0 and E.discriminant > 0)


def twisted(E: CurveQ, D) -> CurveQ:
    return E.short_model().twist(_as_field(D).D)


@dataclass(frozen=True)
class LocalTerm:
    """Inputs and value of the product term at one place of S_0."""

    place: Place
    c_v: int
    c_Dv: int
    c_w: int
    v_disc: int
    v_disc_D: int
    ord_w_disc: int
    v_d_w: int
    residue_degree: int
    log2: int


def _log2_exact(x: Fraction) -> int | None:
    if x <= 0:
        return None
    for part in (x.numerator, x.denominator):
        if part & (part - 1):
            return None
    return x.numerator.bit_length() - x.denominator.bit_length()


def local_product_term(E: CurveQ, D, p: int) -> LocalTerm:
    K = _as_field(D)
    L = local_field(K.D, p)
    if L.is_base:
        raise ValueError(f"{p} splits in {K}; it contributes nothing")
    red_v = tate_reduction(E, p)
    red_D = tate_reduction(twisted(E, K), p)
    red_w = tate_reduction(E, L)
    v_d = padic_valuation(L.d_w, p)
    X = L.f * red_w.v_min_disc - red_v.v_min_disc - red_D.v_min_disc + 6 * v_d
    ratio = Fraction(red_v.tamagawa * red_D.tamagawa, red_w.tamagawa)
    if X % 12:
        raise MktError(f"valuation combination {X} at {p} is not divisible by 12")
    value = ratio * Fraction(p) ** (X // 12)
    lg = _log2_exact(value)
    if lg is None:
        raise MktError(f"local term {value} at {p} is not a power of 2")
    return LocalTerm(
        Place(p), red_v.tamagawa, red_D.tamagawa, red_w.tamagawa,
        red_v.v_min_disc, red_D.v_min_disc, red_w.v_min_disc, int(v_d), L.f, lg,
    )


def delta_f_product(E: CurveQ, D, places: PlaceClassification | None = None):
    """(delta_f, per-place product terms)."""
    places = places or classify_places(E, D)
    terms = [local_product_term(E, D, v.p) for v in sorted(places.S0)]
    return sum(t.log2 for t in terms), terms


def epsilon_2(E: CurveQ, D) -> int:
    """Kramer's term at a good place above 2 (base field Q, so [F_v : Q_2] = 1)."""
    K = _as_field(D)
    info = residue_curve_info(E, 2)
    if info.supersingular:
        return (1 - (-1) ** int(padic_valuation(K.discriminant, 2))) // 2
    return (3 + hilbert_symbol(E.discriminant, K.D, 2)) // 2


def kramer_local_term(E: CurveQ, D, v: Place, places: PlaceClassification) -> tuple[int, str]:
    """Contribution of one place of S_0 by the closed forms (additive: product term)."""
    K = _as_field(D)
    p = v.p
    kind = places.kind_of(v)
    if kind == "S_g":
        return residue_curve_info(E, p).two_torsion_dim, "dim2 residue 2-torsion"
    if kind == "S_gu":
        return epsilon_2(E, K), "epsilon(2)"
    if kind == "S_a":
        return local_product_term(E, K, p).log2, "product term"
    disc = E.discriminant
    vmin = tate_reduction(E, p).v_min_disc
    if kind == "S_smr":
        return (1 + hilbert_symbol(disc, K.D, p)) // 2, "split multiplicative"
    if kind == "S_nsmr_inert":
        return (1 + (-1) ** vmin) // 2, "nonsplit multiplicative, inert"
    h = hilbert_symbol(disc, K.D, p)
    return (1 + h) // 2 * (-1) ** vmin + 1, "nonsplit multiplicative, ramified"


def delta_kramer(E: CurveQ, D, places: PlaceClassification | None = None) -> tuple[int, int, int]:
    places = places or classify_places(E, D)
    g = m = a = 0
    for v in sorted(places.S0):
        val, _ = kramer_local_term(E, D, v, places)
        kind = places.kind_of(v)
        if kind in ("S_g", "S_gu"):
            g += val
        elif kind == "S_a":
            a += val
        else:
            m += val
    return g, m, a


@dataclass
class MktBreakdown:
    delta_inf: int
    delta_g: int
    delta_m: int
    delta_a: int
    delta_f: int
    total: int
    places: PlaceClassification
    ledger: list = field(default_factory=list)
    disagreements: list = field(default_factory=list)

    @property
    def paths_agree(self) -> bool:
        return not self.disagreements and self.delta_f == self.delta_g + self.delta_m + self.delta_a


def mkt_index(E: CurveQ, D) -> MktBreakdown:
    K = _as_field(D)
    places = classify_places(E, K)
    d_inf = delta_infinity(E, K)
    d_f, terms = delta_f_product(E, K, places)
    g = m = a = 0
    ledger, disagreements = [], []
    for t in terms:
        v = t.place
        kval, method = kramer_local_term(E, K, v, places)
        kind = places.kind_of(v)
        if kind in ("S_g", "S_gu"):
            g += kval
        elif kind == "S_a":
            a += kval
        else:
            m += kval
        ledger.append((v, t.log2, "product"))
        ledger.append((v, kval, method))
        if kval != t.log2:
            disagreements.append((v, t.log2, kval, method))
        if t.log2 < 0:
            raise MktError(f"negative local contribution {t.log2} at {v}")
    return MktBreakdown(d_inf, g, m, a, d_f, d_inf + d_f, places, ledger, disagreements)


def mkt_congruent_closed_form(n: int) -> int:
    """delta(E, Q, Q(sqrt n)) for E: y^2 = x^3 - x."""
    QuadField(n)  # validates n
    w = 2 * omega0(n)
    r = n % 8
    if n > 0:
        table = {1: 0, 5: 1, 7: 1, 6: 3, 2: 2, 3: 2}
    else:
        table = {1: 1, 5: 2, 7: 2, 2: 3, 3: 3, 6: 4}
    return table[r] + w


def fundamental_to_squarefree(disc: int) -> int:
    """Squarefree D with Q(sqrt D) of the given fundamental discriminant."""
    if disc % 4 == 0:
        d = disc // 4
        if fundamental_discriminant(d) != disc:
            raise ValueError(f"{disc} is not a fundamental discriminant")
        return d
    if fundamental_discriminant(disc) != disc:
        raise ValueError(f"{disc} is not a fundamental discriminant")
    return disc
