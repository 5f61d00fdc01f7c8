"""Bound engine: rule values, provenance, aggregation, asymptotics."""

from fractions import Fraction

import pytest

from bilmult.bounds import (
    BoundEngine,
    cq_constant,
)
from bilmult.decomp import verify_decomposition
from bilmult.errors import NotPrime
from bilmult.exactmath import epsilon


@pytest.fixture(scope="module")
def eng():
    return BoundEngine()


def test_epsilon_values():
    assert [epsilon(q) for q in (4, 9, 5, 13, 8)] == [4, 6, 4, 7, 5]
    assert epsilon(2) == 1 and epsilon(3) == 2
    assert epsilon(16) == 8 and epsilon(25) == 10
    assert epsilon(7) == 5 and epsilon(11) == 6


def test_lower_bound_values(eng):
    assert eng.lower_bound(2, 2).value == 3
    assert eng.lower_bound(2, 4).value == 9  # upgraded by the exact table
    assert eng.lower_bound(2, 5).value == 10
    assert eng.lower_bound(7, 1).value == 1


def test_exact_values(eng):
    assert eng.exact_value(4, 4).value == 8
    assert eng.exact_value(5, 3).value == 5
    assert eng.exact_value(5, 4).value == 8
    assert eng.exact_value(2, 4).value == 9
    # 7/2+1 = 4.5 < 5 < (7+1+5)/2 = 6.5
    assert eng.exact_value(7, 5).value == 10
    assert eng.exact_value(2, 3) is None
    assert eng.exact_value(9, 2).value == 3


def test_exact_rejects_non_prime_power(eng):
    with pytest.raises(NotPrime):
        eng.exact_value(6, 2)


def test_cq_bound_values(eng):
    assert eng.cq_bound(2, 8).value == 169  # min(176, floor(477*8/26 + 45/2))
    assert eng.cq_bound(2, 2).value == 44
    assert eng.cq_bound(3, 5).value == 135
    assert cq_constant(25) == (Fraction(4), "prime-square q>=25")
    assert cq_constant(16)[1] == "even-power q>=16"
    assert cq_constant(8) == (Fraction(42, 5), "q>=4")
    assert cq_constant(5) == (Fraction(9), "prime q>=5")


def test_tower_bound_simple_kash_route(eng):
    from bilmult.towers import GS_T3, TowerFamily, select_step

    # the table-backed step for q=5, n=10 yields 3n + 3g = 60
    step = select_step(TowerFamily(GS_T3, 5, 1), 10)
    assert 3 * 10 + 3 * step.genus_bound == 60
    # the aggregate may be sharper (the Kummer flavor also covers q = 5)
    agg = eng.tower_bound_simple(5, 10)
    assert agg is not None and agg.value <= 60


def test_tower_bound_simple_inapplicable_small_q(eng):
    assert eng.tower_bound_simple(2, 10) is None
    assert eng.tower_bound_simple(3, 10) is None


def test_tower_bound_simple_square_base(eng):
    b = eng.tower_bound_simple(25, 18)
    assert b is not None
    # never worse than the uniform cap 2(1 + 2/(p-3)) n = 4n = 72
    assert b.value <= 72


def test_derivative_deg1_reduces_to_plain_case(eng):
    b = eng.derivative_bound_deg1(16, 20)
    assert b is not None
    assert b.parameters["derivative_evaluations"] == 0
    plain = eng.tower_bound_simple(16, 20)
    assert b.value <= plain.value


def test_derivative_deg1_uses_derivative_evaluations_somewhere(eng):
    used = [
        n
        for n in range(13, 400)
        if (b := eng.derivative_bound_deg1(16, n)) is not None
        and b.parameters["derivative_evaluations"] > 0
    ]
    assert used, "the step-or-derivative alternative never chose derivatives"


def test_derivative_deg12_kash_row(eng):
    b = eng.derivative_bound_deg12(8, 7)
    assert b is not None and b.value <= 39  # 3n + (3/2) g on the q=8 row


def test_derivative_deg1_pinned_values(eng):
    # hand-derived from the guaranteed step data (q_t = 4 tower over F_16):
    # step (2,0) has genus 6, places >= 60, so n0 = 24; at n = 26 two
    # derivative evaluations give 2n + g - 1 + 4 = 61, beating the plain
    # step (2,1) at 85
    b = eng.derivative_bound_deg1(16, 26)
    assert b.value == 61
    assert (b.parameters["k"], b.parameters["s"]) == (2, 0)
    assert b.parameters["derivative_evaluations"] == 4

    # Kummer level 3 over F_25: exact genus 9, places >= 64, n0 = 23 >= 18
    b = eng.derivative_bound_deg1(25, 18)
    assert b.value == 44 and b.parameters["family"] == "kummer-p2"

    # below the selection threshold nothing fires
    assert eng.derivative_bound_deg1(16, 9) is None


def test_derivative_deg12_pinned_value(eng):
    # level (2,0) of the descended tower over F_5: genus 10, places >= 120,
    # n0 = 50 >= 30, so the plain value 3n + (3/2)g = 105 wins over the
    # Kummer alternative (121 at level 4)
    b = eng.derivative_bound_deg12(5, 30)
    assert b.value == 105
    assert b.parameters["family"] == "gs-t3" and b.parameters["k"] == 2


def test_tower_bound_simple_pinned_value(eng):
    b = eng.tower_bound_simple(25, 18)
    assert b.value == 44  # Kummer level 3: 2n + g - 1 with g = 9
    assert b.parameters["case"] == "rational-places"


def test_derivative_bounds_inapplicable(eng):
    assert eng.derivative_bound_deg1(2, 10) is None
    assert eng.derivative_bound_deg12(2, 10) is None
    assert eng.derivative_bound_deg1(4, 10) is None  # sqrt(4) = 2 <= 3


def test_composition_bound_values(eng):
    b = eng.composition_bound(2, 6)
    assert b.value == 15 and b.parameters["split"] == (2, 3)
    assert (b.parameters["inner"], b.parameters["outer"]) == (3, 5)
    assert eng.composition_bound(2, 4).value == 9  # 3 * 3 meets the exact value
    assert eng.composition_bound(2, 7) is None  # prime degree: no factorization
    assert eng.composition_bound(3, 4).value == 9


def test_composition_examples(eng):
    b = eng.best_upper_bound(2, 6)
    assert b.value == 15 and b.method == "composition"
    assert b.witness is not None and b.witness.rank == 15
    assert verify_decomposition(b.witness)

    b = eng.best_upper_bound(2, 4)
    assert b.value == 9 and b.method == "exact"
    # composition ties the exact value and supplies the witness
    assert b.witness is not None and b.witness.rank == 9
    assert b.parameters.get("witness_via") == "composition"


def test_best_upper_bound_examples(eng):
    b = eng.best_upper_bound(5, 3)
    assert b.value == 5 and b.method == "exact"
    assert b.witness is not None and b.witness.rank == 5
    assert b.parameters.get("witness_via") == "interpolation"

    assert eng.best_upper_bound(2, 8).value == 24  # 3 * exact mu(4, 4)
    assert eng.best_upper_bound(3, 5).value == 135  # only the uniform constant


def test_best_upper_prime_n_no_factorization(eng):
    b = eng.best_upper_bound(2, 7)
    assert b.method == "cq-linear"
    assert b.value == 150  # floor(477*7/26 + 45/2) beats 22*7


def test_witness_rank_equals_value(eng):
    for q, n in [(2, 2), (2, 4), (2, 6), (3, 4), (5, 3), (7, 4), (9, 4)]:
        b = eng.best_upper_bound(q, n)
        if b.witness is not None:
            assert b.witness.rank == b.value
            assert verify_decomposition(b.witness)


def test_no_rule_undercuts_an_exact_value(eng):
    # when the exact value is known, every rule's output is a valid upper
    # bound for it; anything smaller would falsify a theorem
    for q in (2, 3, 4, 5, 7, 8, 9):
        for n in range(1, 13):
            exact = eng.exact_value(q, n)
            if exact is None:
                continue
            for cand in eng.upper_bound_candidates(q, n):
                assert cand.value >= exact.value, (q, n, cand.method, cand.value)


def test_determinism_across_engines():
    a = BoundEngine()
    b = BoundEngine()
    for q, n in [(2, 6), (5, 10), (16, 33), (25, 18), (13, 12)]:
        x = a.best_upper_bound(q, n)
        y = b.best_upper_bound(q, n)
        assert (x.value, x.method, x.citation) == (y.value, y.method, y.citation)
        assert {k: v for k, v in x.parameters.items()} == {
            k: v for k, v in y.parameters.items()
        }


def test_bound_table_shape(eng):
    rows = eng.bound_table(2, 8)
    assert len(rows) == 8
    assert rows[3][0] == 4 and rows[3][2].value == 9
    for n, lo, hi in rows:
        assert lo.value <= hi.value


# -- slope caps (small smoke versions; the full ranges run in acceptance) -------


def test_slope_cap_deg1_smoke(eng):
    cap = Fraction(38, 9)
    for n in range(18, 300):
        b = eng.derivative_bound_deg1(16, n)
        assert b is not None
        limit = cap * n
        assert b.value <= -(-limit.numerator // limit.denominator)


def test_slope_cap_deg12_smoke(eng):
    cap = Fraction(19, 3)
    for n in range(5, 300):
        b = eng.derivative_bound_deg12(4, n)
        assert b is not None
        limit = cap * n
        assert b.value <= -(-limit.numerator // limit.denominator)


# -- asymptotics ---------------------------------------------------------------


def test_asymptotic_q2(eng):
    rep = eng.asymptotic_report(2)
    assert rep.best("m", "lower") == Fraction(88, 25)
    assert rep.best("M", "upper") == Fraction(27, 2)


def test_asymptotic_q25(eng):
    rep = eng.asymptotic_report(25)
    assert rep.a_q == 4 and rep.a_q_source == "drinfeld-vladut"
    assert rep.best("m", "upper") == 3
    assert rep.best("M", "upper") == 3


def test_asymptotic_q5(eng):
    rep = eng.asymptotic_report(5)
    assert rep.best("m", "upper") == Fraction(9, 2)
    # no Ihara constant known: the liminf tower row is inapplicable
    row = next(b for b in rep.bounds if b.method == "ihara-liminf")
    assert not row.applicable and "A(q)" in row.note


def test_asymptotic_user_supplied_a_is_conditional(eng):
    rep = eng.asymptotic_report(7, a_q=Fraction(5, 2))
    row = next(b for b in rep.bounds if b.method == "ihara-liminf")
    assert row.applicable and row.conditional
    assert row.value == 2 * (1 + 1 / (Fraction(5, 2) - 2))
    # conditional rows stay out of the unconditional best
    assert rep.best("m", "upper") == 3 * (1 + Fraction(1, 4))


def test_asymptotic_hankel_row_restricted(eng):
    rep3 = eng.asymptotic_report(3)
    row = next(b for b in rep3.bounds if b.method == "hankel-floor")
    assert row.applicable and row.value == 3
    rep9 = eng.asymptotic_report(9)
    row9 = next(b for b in rep9.bounds if b.method == "hankel-floor")
    assert not row9.applicable


def test_asymptotic_lower_le_upper_where_both_exist(eng):
    for q in (2, 3, 4, 5, 7, 8, 9, 13, 16, 25, 49, 64):
        rep = eng.asymptotic_report(q)
        for quantity in ("m", "M"):
            lo = rep.best(quantity, "lower")
            hi = rep.best(quantity, "upper")
            if lo is not None and hi is not None:
                assert lo <= hi, (q, quantity, lo, hi)
