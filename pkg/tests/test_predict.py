from fractions import Fraction

import pytest

from twistsha.arith import is_squarefree, omega0, prime_divisors
from twistsha.curves.field import QuadField
from twistsha.localdata.fields import SPLIT, splitting_type
from twistsha.localdata.tate import conductor
from twistsha.mkt import mkt_congruent_closed_form, mkt_index
from twistsha.predict import (
    CONGRUENT_CURVE,
    HEEGNER_CURVE,
    HEEGNER_LIST,
    ASSUMED_INDEX_EN,
    PredictError,
    bsd_assembly_en,
    example_g_check,
    heegner_37a,
    heegner_hypothesis,
    heegner_sha,
    parity_check,
    rank_parity_en,
    sha_en_over_q,
    sha_order_en,
    sha_ratio,
    theorem_classes,
)


def test_sha_ratio_examples():
    pred = sha_ratio(CONGRUENT_CURVE, 17, 0, 0, 4)
    assert pred.value == 4
    assert pred.exponents["delta"] == 2
    assert sha_ratio(CONGRUENT_CURVE, 5, 0, 3, 1, delta=3).value == 1
    with pytest.raises(PredictError):
        sha_ratio(CONGRUENT_CURVE, 17, 0, 0, 0)


def test_parity_check():
    assert parity_check(0, 0, 0, 2)
    assert parity_check(1, 0, 1, 3)
    assert not parity_check(0, 0, 0, 3)
    with pytest.raises(PredictError):
        parity_check(2, 0, 1, 1)


def test_rank_parity_examples():
    assert rank_parity_en(5) == "odd"
    assert rank_parity_en(17) == "even"
    # -6 = 2 mod 8, and E_{-6} = E_6 has rank 1
    assert rank_parity_en(-6) == "odd"
    assert rank_parity_en(-2) == "even"


def test_rank_parity_coherent_with_closed_form():
    for m in range(2, 501):
        if not is_squarefree(m):
            continue
        for n in (m, -m):
            parity = "odd" if mkt_congruent_closed_form(n) % 2 else "even"
            assert rank_parity_en(n) == parity


def test_sha_order_examples():
    p = sha_order_en(17)
    assert p.value == 1 and p.integral and p.perfect_square
    assert sha_order_en(3).value == 1
    p = sha_order_en(2)
    assert p.value == Fraction(1, 4)
    assert not p.integral and not p.perfect_square
    assert p.extras["direct_index"] == 2
    assert p.extras["index_corrected_value"] == 1
    p = sha_order_en(-1)
    assert p.value == Fraction(1, 4) and p.extras["index_corrected_value"] == 1


def test_sha_order_vanishing_coefficient():
    p = sha_order_en(41)
    assert p.value is None
    assert "hypothesis L != 0 fails" in p.notes
    assert not p.integral


def test_sha_order_rejects_other_classes():
    for n in (5, 6, 7, 13, -6, -5, -15):
        assert not theorem_classes(n)
        with pytest.raises(PredictError):
            sha_order_en(n)
    with pytest.raises(PredictError):
        sha_order_en(12)


def test_assumption_flags():
    p = sha_order_en(17)
    assert "full BSD for E_n/Q" in p.assumptions
    assert "L(E_n/Q,1) != 0" in p.assumptions


def test_consistency_triangle():
    # order = Sha(E/Q) Sha(E_n/Q) / ratio with ranks 0 and the index fixed at 4
    for m in range(2, 300):
        if not is_squarefree(m):
            continue
        for n in (m, -m):
            if not theorem_classes(n):
                continue
            pred = sha_order_en(n, direct_index=False)
            if pred.value is None:
                continue
            ratio = sha_ratio(CONGRUENT_CURVE, n, 0, 0, ASSUMED_INDEX_EN).value
            assert pred.value == sha_en_over_q(n) / ratio, n


def test_sha_en_over_q():
    assert sha_en_over_q(17) == Fraction(16, 4 ** omega0(17)) == 4
    assert sha_en_over_q(3) == 1


def test_example_g():
    r = example_g_check(3, 1)
    assert r["v2"] == 1 and r["matches"] and r["sha_prediction"] == 1
    assert example_g_check(11, 1)["v2"] == 1
    r = example_g_check(51, 2)
    assert r["a_n"] == 4 and r["v2"] == 2
    with pytest.raises(PredictError):
        example_g_check(17, 1)
    with pytest.raises(PredictError):
        example_g_check(3 * 11, 2)


def test_heegner_hypothesis_agrees_with_splitting():
    N = conductor(HEEGNER_CURVE)
    for disc in HEEGNER_LIST:
        K_D = disc if is_squarefree(disc) else disc // 4
        for p in prime_divisors(N):
            assert splitting_type(K_D, p) == SPLIT
        assert heegner_hypothesis(HEEGNER_CURVE, disc) == []
    assert heegner_hypothesis(HEEGNER_CURVE, -5) == [37]


def test_heegner_ratio_forms():
    nv = heegner_sha(HEEGNER_CURVE, -7, False, 2)
    v = heegner_sha(HEEGNER_CURVE, -7, True, 2)
    assert nv.kind == v.kind == "heegner-ratio"
    assert nv.value == Fraction(2) ** (1 - 1 - 0) * 4
    assert v.value == Fraction(2) ** (-1 - 1 - 0) * 4
    with pytest.raises(PredictError):
        heegner_sha(HEEGNER_CURVE, -5, True, 2)
    with pytest.raises(PredictError):
        heegner_sha(HEEGNER_CURVE, 5, True, 2)


def test_heegner_specialization():
    p = heegner_37a(-84)
    assert p.kind == "heegner-order"
    assert p.value == 1
    assert p.exponents["delta_g"] == 0 and p.exponents["epsilon_2"] == 0
    assert p.extras["index"] == 2 and not p.extras["P0_is_norm"]
    assert "Sha(E/K) trivial" in p.notes


def test_bsd_assembly():
    out = bsd_assembly_en(17)
    assert out["E_n/Q"].equal and out["E/K"].equal
    assert out["E/K"].lhs == Fraction(16, 16)  # a_17^2 / 16
    assert out["E/K"].tamagawa_product == 16  # 2 * 2 at infinity, 2 * 2 above 2
    assert out["E/K"].torsion_order == 4
    out = bsd_assembly_en(3)
    assert out["E/K"].equal and out["E/K"].disc_root_factor == 2
    out = bsd_assembly_en(41)
    assert out["E/K"].vacuous and out["E/K"].lhs == 0 == out["E/K"].rhs
    out = bsd_assembly_en(2)
    assert not out["E/K"].equal
    assert out["E/K index-corrected"].equal


def test_bsd_assembly_errors():
    with pytest.raises(PredictError, match="branch hypotheses unavailable"):
        bsd_assembly_en(-3)
    with pytest.raises(PredictError):
        bsd_assembly_en(5)


def test_bsd_assembly_positive_sweep():
    for n in range(2, 200):
        if is_squarefree(n) and theorem_classes(n):
            out = bsd_assembly_en(n)
            assert out["E_n/Q"].equal, n
            assert out["E/K"].equal or n == 2, n
