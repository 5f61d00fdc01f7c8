"""Constructions: interpolation algorithms, truncated products, composition."""

import itertools
import random

import pytest

from bilmult.construct import (
    compose_decompositions,
    karatsuba_truncated,
    mat_inv,
    mat_mul,
    rebase_decomposition,
    toom_construct,
    tower_to_flat_isomorphism,
)
from bilmult.decomp import (
    decomposition_apply,
    decomposition_from_json,
    decomposition_to_json,
    exhaustive_product_check,
    verify_decomposition,
)
from bilmult.errors import FieldMismatch, TooFewPoints, UnsupportedTruncation
from bilmult.gf import prime_field

F2 = prime_field(2)
F3 = prime_field(3)
F4 = prime_field(2).extend(2)
F5 = prime_field(5)
F7 = prime_field(7)
F8 = prime_field(2).extend(3)
F9 = prime_field(3).extend(2)

SMALL_FIELDS = {
    2: F2,
    3: F3,
    4: F4,
    5: F5,
    7: F7,
    8: F8,
    9: F9,
    11: prime_field(11),
    13: prime_field(13),
    16: prime_field(2).extend(4),
}


def legal_degrees(q):
    # interpolation needs q >= 2n-2, i.e. n <= q/2 + 1
    return [n for n in range(1, q // 2 + 2)]


@pytest.mark.parametrize("q", sorted(SMALL_FIELDS))
def test_toom_all_legal_degrees_verify_with_exact_rank(q):
    field = SMALL_FIELDS[q]
    for n in legal_degrees(q):
        d = toom_construct(field, n)
        assert d.rank == 2 * n - 1
        assert verify_decomposition(d)


def test_toom_karatsuba_points():
    # q=2, n=2 is Karatsuba: evaluations at 0, 1 and the leading-coefficient
    # functional; rank 3
    d = toom_construct(F2, 2)
    assert d.rank == 3
    forms = [a for a, _, _ in d.triples]
    assert forms == [(1, 0), (1, 1), (0, 1)]


def test_toom_too_few_points():
    with pytest.raises(TooFewPoints):
        toom_construct(F2, 3)


def test_toom_deterministic():
    a = toom_construct(F5, 3)
    b = toom_construct(F5, 3)
    assert a.triples == b.triples


# -- truncated products ---------------------------------------------------------


def test_truncated_u1():
    alg = karatsuba_truncated(F3, 1)
    assert alg.rank == 1
    assert alg.apply((2,), (2,)) == (1,)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 11, 13, 16])
def test_truncated_u2_exhaustive(q):
    field = SMALL_FIELDS[q]
    alg = karatsuba_truncated(field, 2)
    assert alg.rank == 3
    elems = [field.from_int(i) for i in range(field.q)]
    for x0, x1, y0, y1 in itertools.product(elems, repeat=4):
        got = alg.apply((x0, x1), (y0, y1))
        want = (
            field.mul(x0, y0),
            field.add(field.mul(x0, y1), field.mul(x1, y0)),
        )
        assert got == want


def test_truncated_f3_hand_example():
    # (1+2x)(2+x) = 2 + 5x + 2x^2 = 2 + 2x mod (3, x^2)
    alg = karatsuba_truncated(F3, 2)
    assert alg.apply((1, 2), (2, 1)) == (2, 2)


def test_truncated_unsupported():
    with pytest.raises(UnsupportedTruncation):
        karatsuba_truncated(F2, 3)


def test_truncated_rank_table():
    from bilmult.construct import truncated_rank_upper

    assert truncated_rank_upper(1) == 1
    assert truncated_rank_upper(2) == 3
    # values beyond the table are unavailable, never estimated
    with pytest.raises(UnsupportedTruncation):
        truncated_rank_upper(3)


# -- isomorphism -----------------------------------------------------------------


def test_isomorphism_identity_when_chain_equals_flat():
    flat = F2.extend(4)
    M = tower_to_flat_isomorphism(flat, flat)
    n = 4
    ident = [[F2.one if i == j else F2.zero for j in range(n)] for i in range(n)]
    assert M == ident


def test_isomorphism_is_ring_isomorphism():
    chain = F2.extend(2).extend(2)  # F_2 -> F_4 -> F_16
    flat = F2.extend(4)
    M = tower_to_flat_isomorphism(chain, flat)
    M_inv = mat_inv(F2, M)
    assert mat_mul(F2, M, M_inv) == [
        [F2.one if i == j else F2.zero for j in range(4)] for i in range(4)
    ]

    def to_chain(x_flat):
        vec = flat.coords_over(x_flat, F2)
        out = [F2.zero] * 4
        for i in range(4):
            for j in range(4):
                out[i] = F2.add(out[i], F2.mul(M[i][j], vec[j]))
        return chain.from_coords_over(tuple(out), F2)

    # multiplicative on all pairs, and maps 1 to 1
    assert to_chain(flat.one) == chain.one
    for a in range(16):
        for b in range(16):
            xa, xb = flat.from_int(a), flat.from_int(b)
            assert to_chain(flat.mul(xa, xb)) == chain.mul(to_chain(xa), to_chain(xb))


def test_isomorphism_first_column_is_one():
    chain = F3.extend(2)
    flat = F3.extend(2)
    M = tower_to_flat_isomorphism(chain, flat)
    assert tuple(M[i][0] for i in range(2)) == (F3.one, F3.zero)


# -- composition ------------------------------------------------------------------


def test_compose_rank15_for_degree6_over_f2():
    inner = toom_construct(F2, 2)
    outer = toom_construct(F4, 3)
    d = compose_decompositions(outer, inner)
    assert d.rank == 15
    assert d.n == 6
    assert d.base == F2 and d.top == F2.extend(6)
    assert verify_decomposition(d)
    assert exhaustive_product_check(d)  # all 4096 pairs


def test_compose_with_trivial_inner_is_same_algorithm():
    inner = toom_construct(F5, 1)  # rank 1, degree 1
    outer = toom_construct(F5, 3)
    d = compose_decompositions(outer, inner)
    assert d.rank == outer.rank
    assert d.triples == outer.triples


def test_compose_f3_tower_rank9():
    inner = toom_construct(F3, 2)
    outer = toom_construct(F9, 2)
    d = compose_decompositions(outer, inner)
    assert d.rank == 9 and d.n == 4
    assert verify_decomposition(d)
    assert exhaustive_product_check(d)  # 81^... all 6561 pairs


def test_compose_rank_multiplicative():
    inner = toom_construct(F2, 2)
    outer = toom_construct(F4, 2)
    d = compose_decompositions(outer, inner)
    assert d.rank == outer.rank * inner.rank == 9


def test_compose_field_mismatch():
    inner = toom_construct(F2, 2)
    outer = toom_construct(F9, 2)
    with pytest.raises(FieldMismatch):
        compose_decompositions(outer, inner)


def test_compose_keep_tower_basis_and_rebase_later():
    inner = toom_construct(F2, 2)
    outer = toom_construct(F4, 3)
    tower = compose_decompositions(outer, inner, rebase=False)
    assert tower.top.chain == (F4.chain[0], outer.top.chain[-1])
    assert verify_decomposition(tower)  # verification works in the tower basis
    flat = rebase_decomposition(tower)
    assert flat.top == F2.extend(6)
    assert verify_decomposition(flat)
    # tower form serializes with a "tower" key and round-trips
    text = decomposition_to_json(tower)
    assert '"tower"' in text
    back = decomposition_from_json(text)
    assert back.triples == tower.triples


def test_compose_three_levels():
    # F_2 -> F_4 -> F_16 -> F_256, ranks 3 * 3 * 3 = 27
    d1 = toom_construct(F2, 2)
    mid = F2.extend(2)
    d2 = compose_decompositions(toom_construct(mid, 2), d1)  # F_16/F_2 rank 9
    top_field = F2.extend(4)
    outer = toom_construct(top_field, 2)
    d3 = compose_decompositions(outer, d2)
    assert d3.rank == 27 and d3.n == 8
    assert verify_decomposition(d3)
    # randomized product sampling stands in for the all-pairs check at 2^8
    rng = random.Random(7)
    top = d3.top
    for _ in range(400):
        x = top.from_int(rng.randrange(top.q))
        y = top.from_int(rng.randrange(top.q))
        assert decomposition_apply(d3, x, y) == top.mul(x, y)
