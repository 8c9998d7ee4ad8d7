from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rhoext.algebra import (
    AlgebraPresentation,
    NonHomogeneousError,
    TruncationWindow,
    basis_slice,
    generators_from_names,
    parse_presentation,
    format_presentation,
)
from rhoext.comodules import omega_presentation
from rhoext.ext import e1_presentation
from rhoext.grading import RODegree
from oracles import E1Model, random_rewrite

OMEGA = omega_presentation(2, "borel")


def nf(text: str) -> str:
    return OMEGA.fmt(OMEGA.normalize(OMEGA.element(text)))


def test_t0_squared():
    assert nf("t0^2") == OMEGA.fmt(OMEGA.element("a*t1 + u*e1"))


def test_unit_normalizes_to_itself():
    assert nf("1") == "1"


def test_t0_fourth_power():
    assert nf("t0^4") == OMEGA.fmt(OMEGA.element("a^3*t2 + a^2*u*e2 + u^2*e1^2"))


def _omega_rules():
    tb = OMEGA.table
    rules = []
    for n in range(2):
        lead = tb.gen(f"t{n}", 2)
        tail = [
            tuple(x + y for x, y in zip(tb.gen("a"), tb.gen(f"t{n + 1}"))),
            tuple(x + y for x, y in zip(tb.gen("u"), tb.gen(f"e{n + 1}"))),
        ]
        rules.append((lead, {m: 1 for m in tail}))
    return rules


@pytest.mark.parametrize("seed", range(8))
def test_t0_fourth_power_random_order(seed):
    tb = OMEGA.table
    got = random_rewrite({tb.gen("t0", 4): 1}, _omega_rules(), seed)
    assert got == OMEGA.normalize(OMEGA.element("t0^4"))


@given(
    st.integers(0, 5), st.integers(0, 3), st.integers(0, 2), st.integers(0, 3), st.integers(0, 4), st.integers(-4, 4),
    st.integers(0, 1000),
)
def test_normal_form_agrees_with_random_order_rewriting(t0, t1, t2, e1, a, u, seed):
    tb = OMEGA.table
    m = tb.monomial({"t0": t0, "t1": t1, "t2": t2, "e1": e1, "a": a, "u": u})
    # t2 is the top generator here and has no relation
    assert random_rewrite({m: 1}, _omega_rules(), seed) == OMEGA.normalize((m,))


def test_multiply_examples():
    e = OMEGA.element
    assert OMEGA.multiply(e("e1"), e("e1")) == e("e1^2")
    assert OMEGA.multiply(e("t0"), e("t0")) == OMEGA.normalize(e("a*t1 + u*e1"))
    assert OMEGA.multiply(e("u"), e("u^-1")) == OMEGA.one()


monos = st.builds(
    lambda *x: OMEGA.table.monomial(dict(zip(("t0", "t1", "e1", "e2", "a", "u"), x))),
    st.integers(0, 3), st.integers(0, 2), st.integers(0, 2), st.integers(0, 1), st.integers(0, 3), st.integers(-3, 3),
)
elements = st.frozensets(monos, max_size=3)


@given(elements, elements, elements)
def test_multiplication_is_associative_and_commutative(x, y, z):
    m = OMEGA.multiply
    assert m(m(x, y), z) == m(x, m(y, z))
    assert m(x, y) == m(y, x)


@given(elements, elements)
def test_normal_form_is_idempotent_and_additive(x, y):
    n = OMEGA.reduce
    assert n(n(x)) == n(x)
    assert n(x ^ y) == n(x) ^ n(y)


@given(monos)
def test_format_parse_round_trip(m):
    tb = OMEGA.table
    assert tb.parse_monomial(tb.format_monomial(m)) == m


def test_basis_slice_degree_one():
    tr = TruncationWindow(weight_cap=2, v_cap=1, a_cap=0)
    pres = omega_presentation(1, "borel")
    got = [pres.table.format_monomial(m) for m in basis_slice(pres, RODegree(1, 0), tr)]
    assert got == ["t0"]


def test_basis_slice_degree_zero():
    tr = TruncationWindow(weight_cap=2, v_cap=1, a_cap=0)
    pres = omega_presentation(1, "borel")
    assert basis_slice(pres, RODegree(0, 0), tr) == [pres.table.one()]


@pytest.mark.parametrize("stem,sigma,s,w", [(2, 1, 0, 2), (2, 1, 1, 2), (3, 3, 1, 4), (1, 1, 1, 2), (4, 0, 2, 3)])
def test_basis_slice_matches_enumeration_oracle(stem, sigma, s, w):
    e_cap = 2
    pres = e1_presentation(2, 4)
    model = E1Model(2, e_cap)
    for a_cap in (0, 3):
        tr = TruncationWindow(weight_cap=4, v_cap=2, a_cap=a_cap)
        got = basis_slice(pres, RODegree(stem - sigma, sigma), tr, adams=s, weight=w)
        want = sum(model.quotient_dim((stem, sigma, s, w, e)) for e in range(a_cap + 1))
        assert len(got) == want


def test_inhomogeneous_relation_rejected():
    tb = generators_from_names(["t0", "e1", "a", "u"])
    with pytest.raises(NonHomogeneousError):
        AlgebraPresentation(tb, [tb.parse_element("t0 + e1")])


def test_presentation_text_round_trip():
    text = format_presentation(OMEGA)
    again = parse_presentation(text)
    assert again.table.names == OMEGA.table.names
    assert again.normalize(again.element("t0^4")) == OMEGA.normalize(OMEGA.element("t0^4"))
