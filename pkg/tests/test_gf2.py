from __future__ import annotations

from hypothesis import given
from hypothesis import strategies as st

from rhoext import gf2
from oracles import dense_rank, span_size, to_dense

rows = st.lists(st.integers(min_value=0, max_value=(1 << 10) - 1), max_size=12)


def test_rank_of_empty_and_zero_rows():
    assert gf2.rank([]) == 0
    assert gf2.rank([0, 0]) == 0


def test_rank_small_example():
    assert gf2.rank([0b011, 0b110, 0b101]) == 2


@given(rows)
def test_rank_matches_dense_elimination(vs):
    assert gf2.rank(vs) == dense_rank(to_dense(v, 10) for v in vs)


@given(st.lists(st.integers(min_value=0, max_value=63), max_size=7))
def test_rank_matches_span_size(vs):
    assert 1 << gf2.rank(vs) == span_size(vs)


@given(rows)
def test_kernel_vectors_are_relations(vs):
    ker = gf2.kernel(vs)
    assert len(ker) == len(vs) - gf2.rank(vs)
    for k in ker:
        acc = 0
        for i in gf2.bits(k):
            acc ^= vs[i]
        assert acc == 0
    assert gf2.rank(ker) == len(ker)


@given(rows, st.integers(min_value=0, max_value=(1 << 10) - 1))
def test_solve_is_consistent_with_span(vs, target):
    sol = gf2.solve(vs, target)
    in_span = gf2.rank(vs + [target]) == gf2.rank(vs)
    assert (sol is not None) == in_span
    if sol is not None:
        acc = 0
        for i in gf2.bits(sol):
            acc ^= vs[i]
        assert acc == target


@given(rows, st.integers(min_value=0, max_value=(1 << 10) - 1))
def test_image_basis_membership(vs, target):
    ech = gf2.image_basis(vs)
    assert ech.contains(target) == (gf2.rank(vs + [target]) == gf2.rank(vs))


def test_bits_and_popcount():
    assert gf2.bits(0b10110) == [1, 2, 4]
    assert gf2.popcount(0b10110) == 3
