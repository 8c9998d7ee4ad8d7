from __future__ import annotations

import dataclasses
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rhoext import bockstein as bss
from rhoext.algebra import TruncationWindow, mono_mul
from rhoext.bockstein import (
    BSSContext,
    Page,
    check_kernel_lemma,
    check_transition,
    e1_page,
    einfty_page,
    einfty_report,
    forbidden_degree_keys,
    hidden_extensions,
    a_power_annihilator,
    vn_torsion_annihilator,
    page,
    page_differential,
    page_spec,
    permanent_cycle_check,
    restriction_check,
    run_to,
    synthetic_dgas,
    t0_bijection,
    torsion_check,
)
from oracles import E1Model

SMALL = TruncationWindow(weight_cap=4, v_cap=2, a_cap=6, stems=(-2, 6), sigmas=(-4, 4))


@pytest.fixture(scope="module")
def ctx():
    return BSSContext(SMALL, adams_cap=2)


@pytest.fixture(scope="module")
def oracle(ctx):
    return E1Model(ctx.N, ctx.K)


def keys_upto(ctx, weight, e_max):
    return [k for k in ctx.window_keys(e_max) if k[3] <= weight]


def mono(ctx, text):
    return ctx.monomial(text)


# --- E1 ----------------------------------------------------------------------------


def test_e1_dims_match_enumeration_oracle(ctx, oracle):
    pg = e1_page(ctx)
    for key in keys_upto(ctx, 4, 4):
        assert pg.dim(key) == oracle.quotient_dim(key), key


def test_e1_relation(ctx):
    e1 = ctx.e1
    assert e1.normalize(e1.element("t0^2 + u*e1")) == frozenset()


def test_d1_of_u(ctx):
    assert e1_page(ctx).d(mono(ctx, "u")) == frozenset([mono(ctx, "a*v0")])


def test_d1_of_a(ctx):
    assert e1_page(ctx).d(mono(ctx, "a")) == frozenset()


# --- transitions -------------------------------------------------------------------


def test_e3_matches_d1_homology_oracle_below_weight_4(ctx, oracle):
    e3 = page(ctx, 1)
    for key in keys_upto(ctx, 3, 4):
        assert e3.dim(key) == oracle.homology_d1(key), key


def test_weight4_cycle_outside_closed_form_e3(ctx, oracle):
    # a*e1^2*v1*u^5 = t0^2 * (a*e1*v1*u^4) is a d1-cycle that no class bounds,
    # but the closed form for E3 (a subalgebra of E1/(a v0)) sets it to zero
    z = mono(ctx, "a*e1^2*v1*u^5")
    key = ctx.key_of(z)
    assert e1_page(ctx).d(z) == frozenset()
    assert page(ctx, 1).normal_form(z) == frozenset()
    assert oracle.homology_d1(key) == page(ctx, 1).dim(key) + 1


def test_first_transition_below_weight_4(ctx):
    rep = check_transition(ctx, 0, keys_upto(ctx, 3, 6))
    assert rep.ok, rep


@pytest.fixture(scope="module")
def full_run(ctx):
    return run_to(3, ctx)


def test_run_reports_cover_every_transition(full_run):
    assert [r.n for r in full_run.reports] == [0, 1, 2]
    assert all(r.compared for r in full_run.reports)


def test_transition_mismatches_confined_to_weight_4(full_run):
    for rep in full_run.reports:
        assert {m.key[3] for m in rep.mismatches} <= {4}
        assert {k[3] for k in rep.lemma_mismatches} <= {4}
        assert not rep.ill_defined and not rep.not_closed
        assert not rep.intermediate_nonzero and not rep.permanent_failures


def test_last_transition_exact(full_run):
    assert full_run.reports[2].ok


def test_e3_page_kills_a_v0_and_keeps_u_squared(ctx):
    e3 = page(ctx, 1)
    assert e3.normal_form(mono(ctx, "a*v0")) == frozenset()
    assert e3.contains(mono(ctx, "u^2"))
    assert not e3.contains(mono(ctx, "u"))


def test_d3_of_u_squared(ctx):
    assert page(ctx, 1).d(mono(ctx, "u^2")) == frozenset([mono(ctx, "a^3*v1")])


def test_d7_of_u_fourth(ctx):
    assert page(ctx, 2).d(mono(ctx, "u^4")) == frozenset([mono(ctx, "a^7*v2")])


@pytest.mark.parametrize("n", range(3))
def test_permanent_cycles(ctx, n):
    assert permanent_cycle_check(ctx, n) == []


@pytest.mark.parametrize("n", range(3))
@given(seed=st.integers(0, 10_000))
def test_leibniz_and_d_squared(ctx, n, seed):
    rng = random.Random(seed)
    pg = page(ctx, n)
    keys = [k for k in ctx.window_keys(6) if k[3] <= 2]
    pool = []
    while len(pool) < 2:
        sd = pg.slice(rng.choice(keys))
        pool += [sd.monomials[i] for i in sd.basis]
    x, y = rng.sample(pool, 2)

    def dvec(m):
        t = page_differential(ctx, n, m)
        return ctx.nf_vector(n, t) if t else 0

    rhs = 0
    for a, b in ((x, y), (y, x)):
        t = page_differential(ctx, n, a)
        if t:
            rhs ^= ctx.nf_vector(n, mono_mul(t, b))
    assert dvec(mono_mul(x, y)) == rhs
    t = page_differential(ctx, n, x)
    assert t is None or page_differential(ctx, n, t) is None


def test_zero_differential_is_detected(ctx, monkeypatch):
    monkeypatch.setattr(bss, "page_differential", lambda c, n, m: None)
    fresh = BSSContext(SMALL, adams_cap=2)
    rep = check_transition(fresh, 0, keys_upto(fresh, 2, 4))
    assert rep.mismatches


def test_dropping_t0_from_next_page_is_detected(ctx):
    spec = page_spec(ctx, 1)
    t0 = ctx.table.gen("t0")
    broken = Page(ctx, dataclasses.replace(spec, name="broken", templates=tuple(t for t in spec.templates if t.rest != t0)))
    e1 = e1_page(ctx)
    keys = keys_upto(ctx, 2, 4)
    assert any(e1.homology_dim(k) != broken.dim(k) for k in keys)


# --- E-infinity --------------------------------------------------------------------


@pytest.fixture(scope="module")
def einfty(ctx):
    return einfty_report(ctx)


def test_einfty_report_ok(einfty):
    assert einfty.ok
    assert einfty.compared > 0


@pytest.mark.parametrize("j", range(3))
def test_torsion_relations(ctx, j):
    assert torsion_check(ctx, j) == (True, True)


def test_a2_v1_nonzero_a3_v1_zero(ctx):
    inf = einfty_page(ctx)
    assert inf.normal_form(mono(ctx, "a^2*v1"))
    assert not inf.normal_form(mono(ctx, "a^3*v1"))


def test_forbidden_degrees_empty(ctx):
    inf = einfty_page(ctx)
    keys = list(forbidden_degree_keys(ctx))
    assert keys
    assert all(inf.dim(k) == 0 for k in keys)


def test_t0_bijection(ctx):
    assert t0_bijection(ctx) == []


def test_restriction_matches_classical(ctx):
    assert restriction_check(ctx) == []


def test_hidden_extensions_are_annotations(ctx):
    ext = hidden_extensions()
    assert (ext[0].source, ext[0].multiplier, ext[0].target, ext[0].weight) == ("t0^2", "v0", "a^2*v1*e1", 2)
    inf = einfty_page(ctx)
    # the product in the presentation itself is not the hidden target
    prod = inf.normal_form(mono(ctx, "t0^2*v0"))
    assert prod != inf.normal_form(mono(ctx, "a^2*v1*e1"))


# --- annihilators ------------------------------------------------------------------


def test_a_is_not_a_zero_divisor_on_e1(ctx):
    pg = e1_page(ctx)
    a = ctx.table.gen("a")
    for key in keys_upto(ctx, 4, 4):
        ker, _ = pg.annihilator(a, key)
        assert ker == [], key


def test_e1_annihilates_a_v0_on_e1(ctx):
    pg = e1_page(ctx)
    assert pg.normal_form(mono(ctx, "a*v0")) != frozenset()
    # e1 * v0 = r_1 is zero in E1, so e1 * a v0 = a r_1 vanishes
    assert pg.normal_form(mono(ctx, "e1*a*v0")) == frozenset()


@pytest.mark.parametrize("n", range(3))
def test_a_power_annihilators_below_weight_4(ctx, n):
    assert a_power_annihilator(ctx, n, keys_upto(ctx, 3, 4)).ok


def test_a_power_annihilator_weight_4_gap(ctx):
    # a * e1^2 v1 = a * e2 v0 = 0 in E1/(a v0), outside the ideal (u^(2k) v0)
    keys = [k for k in ctx.window_keys(4) if k[3] == 4]
    assert a_power_annihilator(ctx, 0, keys).ok
    rep = a_power_annihilator(ctx, 1, keys)
    assert rep.annihilator_not_claimed and not rep.claimed_not_annihilating


@pytest.mark.parametrize("n", [0, 2])
def test_vn_torsion_annihilators(ctx, n):
    rep = vn_torsion_annihilator(ctx, n, keys_upto(ctx, 4, 4))
    assert rep.ok
    assert rep.slices > 0


def test_vn_torsion_annihilator_n1_below_weight_4(ctx):
    assert vn_torsion_annihilator(ctx, 1, keys_upto(ctx, 3, 4)).ok


def test_vn_torsion_annihilator_n1_weight_4_gap(ctx):
    # t0^2 e1 a^4 u^8 kills a^3 v1 in the ambient quotient but is not in (e1^2, u^(2k) v0)
    keys = [k for k in ctx.window_keys(4) if k[3] == 4]
    rep = vn_torsion_annihilator(ctx, 1, keys)
    assert rep.annihilator_not_claimed
    assert not rep.claimed_not_annihilating


def test_missing_annihilator_generator_is_detected(ctx):
    x = mono(ctx, "a*v0")
    rep = bss.annihilator(ctx, x, page(ctx, 0), [], keys_upto(ctx, 2, 4))
    assert rep.annihilator_not_claimed


# --- kernel-generator lemma on synthetic algebras -----------------------------------


@pytest.mark.parametrize("dga", synthetic_dgas(), ids=lambda d: d.name)
def test_kernel_lemma_on_synthetic_dgas(dga):
    res = check_kernel_lemma(dga)
    assert res.ok
    assert res.degrees > 0


def test_kernel_lemma_without_annihilator_fails():
    dga = synthetic_dgas()[2]
    broken = dataclasses.replace(dga, annihilator=[])
    assert not check_kernel_lemma(broken).ok


# --- appendix rings ----------------------------------------------------------------


@pytest.mark.parametrize("k,bound", [(0, 6), (1, 10)])
def test_appendix_domain_small(k, bound):
    rep = bss.appendix_domain_check(k, bound)
    assert rep.ok
    assert rep.pairs > 0 and rep.regular_slices > 0


def test_appendix_non_domain_is_detected(monkeypatch):
    real = bss.appendix_relation

    def squashed(table, n, k):
        if n == 1:
            return frozenset([table.gen("e0", 1 << (k + 1))])
        return real(table, n, k)

    monkeypatch.setattr(bss, "appendix_relation", squashed)
    rep = bss.appendix_domain_check(0, 4)
    assert rep.zero_divisor_pairs


def test_appendix_rejects_negative_k():
    with pytest.raises(ValueError):
        bss.appendix_domain_check(-1, 4)
