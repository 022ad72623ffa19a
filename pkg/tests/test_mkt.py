import random
from fractions import Fraction

import pytest

from twistsha.arith import REAL_PLACE, Place, is_squarefree
from twistsha.curves.weierstrass import CurveError, CurveQ
from twistsha.localdata.tate import conductor
from twistsha.mkt import (
    MktError,
    _log2_exact,
    classify_places,
    delta_infinity,
    epsilon_2,
    fundamental_to_squarefree,
    local_product_term,
    mkt_congruent_closed_form,
    mkt_index,
)

E_CONG = CurveQ.short(-1, 0)
E_37 = CurveQ.from_ainvs((0, 0, 1, -1, 0))
E_11 = CurveQ.from_ainvs((0, -1, 1, -10, -20))


def small_curves(count, seed=2024, max_conductor=2000):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        ainvs = tuple(rng.randint(-3, 3) for _ in range(5))
        try:
            E = CurveQ.from_ainvs(ainvs)
        except CurveError:
            continue
        if abs(E.discriminant) > 10**7:
            continue
        if conductor(E) > max_conductor:
            continue
        D = rng.choice([n for n in range(-50, 51) if n not in (0, 1) and is_squarefree(n)])
        out.append((E, D))
    return out


def test_log2_exact():
    assert _log2_exact(Fraction(8)) == 3
    assert _log2_exact(Fraction(1, 4)) == -2
    assert _log2_exact(Fraction(3)) is None
    assert _log2_exact(Fraction(0)) is None


@pytest.mark.parametrize("n,expected", [(17, 2), (5, 3), (7, 3), (3, 4), (2, 2), (6, 5), (-1, 2), (-6, 5), (-2, 4), (-3, 4), (-17, 4), (15, 5)])
def test_congruent_curve_values(n, expected):
    br = mkt_index(E_CONG, n)
    assert br.total == expected == mkt_congruent_closed_form(n)
    assert br.paths_agree


def test_classification_for_congruent_curve():
    pl = classify_places(E_CONG, 15)
    assert pl.S_g == {Place(3), Place(5)}
    assert pl.S_a == {Place(2)}
    assert not pl.S_smr and not pl.S_nsmr and not pl.S_gu
    assert pl.S_inf1 == {REAL_PLACE}
    pl = classify_places(E_CONG, 17)
    assert Place(2) not in pl.S0  # 2 splits


def test_delta_infinity():
    assert delta_infinity(E_CONG, -1) == 1
    assert delta_infinity(E_CONG, 5) == 0
    assert delta_infinity(E_11, -1) == 0  # negative discriminant


def test_additive_term_at_two():
    t = local_product_term(E_CONG, 7, 2)
    assert (t.c_v, t.c_Dv, t.c_w) == (2, 2, 4)
    assert (t.v_disc, t.v_disc_D, t.ord_w_disc) == (6, 6, 12)
    assert t.log2 == 1
    with pytest.raises(ValueError):
        local_product_term(E_CONG, 17, 2)


def test_heegner_curve_twists():
    for disc in (-7, -11, -47, -84, -164):
        br = mkt_index(E_37, fundamental_to_squarefree(disc))
        assert br.delta_inf == 1
        assert br.delta_g == 0
        assert br.paths_agree


def test_epsilon_two_supersingular():
    # 37a is supersingular at 2; epsilon depends on the parity of v_2(disc K)
    assert epsilon_2(E_37, -7) == 0
    assert epsilon_2(E_37, -21) == 0
    assert epsilon_2(E_37, 3) == 0


def test_multiplicative_places():
    # 11a1 is split at 11; -1 is inert at 11
    br = mkt_index(E_11, -1)
    assert Place(11) in br.places.S_smr
    assert br.paths_agree
    br = mkt_index(E_37, 2)  # 37a nonsplit at 37, 2 inert mod 37
    assert Place(37) in br.places.S_nsmr_inert
    assert br.paths_agree


def test_fundamental_to_squarefree():
    assert fundamental_to_squarefree(-84) == -21
    assert fundamental_to_squarefree(-7) == -7
    assert fundamental_to_squarefree(-4) == -1
    with pytest.raises(ValueError):
        fundamental_to_squarefree(-3 * 4)  # -12 is not fundamental
    with pytest.raises(ValueError):
        fundamental_to_squarefree(5 * 4)


def test_random_general_curves_paths_agree():
    for E, D in small_curves(40, seed=7):
        br = mkt_index(E, D)
        assert br.paths_agree, (E.ainvs, D, br.disagreements)
        assert br.total >= 0


def test_mkt_error_is_arithmetic_error():
    assert issubclass(MktError, ArithmeticError)
