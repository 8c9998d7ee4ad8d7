from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rhoext.algebra import TruncationWindow
from rhoext.comodules import (
    ComoduleSpec,
    DyerLashof,
    ModuleAlgebra,
    classical_replay,
    compare_derived,
    derive_coaction,
    omega_comodule,
    omega_dyer_lashof_values,
    omega_presentation,
    random_module_monomials,
    restriction_consistency,
    trivial_comodule,
)
from rhoext.steenrod import equivariant_exterior, equivariant_steenrod, graded_exterior

GENUINE = omega_comodule(2, equivariant_steenrod(2, a_cap=6), "genuine", 6)


def coact(spec, text):
    return spec.fmt(spec.coact(spec.module.element(text)))


def test_t1_coaction():
    assert coact(GENUINE, "t1") == "t1|1 + e1|tau0"


def test_t0_is_primitive():
    assert coact(GENUINE, "t0") == "t0|1"


def test_e2_coaction():
    assert coact(GENUINE, "e2") == "e2|1 + e1^2|xi1"


@pytest.fixture(scope="module")
def ops():
    module = ModuleAlgebra(omega_presentation(2, "genuine"))
    return module, DyerLashof(module, omega_dyer_lashof_values(module))


def test_q1_of_t0(ops):
    module, dl = ops
    assert dl.q1(module.element("t0")) == module.element("t1")


def test_q0_of_e1(ops):
    module, dl = ops
    assert dl.q0(module.element("e1")) == module.element("e1^2")


def test_q0_of_e1_squared_is_frobenius(ops):
    module, dl = ops
    x = module.element("e1")
    assert dl.q0(module.multiply(x, x)) == module.multiply(dl.q0(x), dl.q0(x))
    assert dl.q0(module.element("e1^2")) == module.element("e1^4")


def test_derived_coaction_n1():
    rows = compare_derived(1)
    assert rows["e1"][0] == "e1|1"
    assert all(ok for _, _, ok in rows.values())


def test_derived_coaction_n2():
    rows = compare_derived(2)
    assert rows["t2"][0] == "t2|1 + e2|tau0 + e1^2|tau1"
    assert all(ok for _, _, ok in rows.values())


def test_derived_coaction_n0_is_trivial():
    spec = derive_coaction(0)
    assert list(spec.coaction) == ["t0"]
    assert spec.fmt(spec.coaction["t0"]) == "t0|1"


def test_derive_rejects_negative():
    with pytest.raises(ValueError):
        derive_coaction(-1)


def test_restriction_consistency():
    rep = restriction_consistency(4)
    assert rep.ok
    assert rep.assignment["t0"] == "x1"
    assert rep.candidates["e1"] == 1
    assert rep.assignment["e1"] == "x1^2*u^-1"


def test_classical_replay():
    rows = classical_replay(4)
    assert rows["x2"][1] == "x1^2|cxi1 + x2|1"
    assert all(ok for _, _, ok in rows.values())


SPECS = {
    "genuine": lambda: GENUINE,
    "borel": lambda: omega_comodule(2, equivariant_exterior(3, a_cap=6), "borel", 6),
    "graded": lambda: omega_comodule(2, graded_exterior(3, a_cap=6), "graded", 6),
    "trivial": lambda: trivial_comodule(graded_exterior(1, a_cap=6), 6),
}


@pytest.mark.parametrize("name", sorted(SPECS))
def test_generators_coassociative_and_counital(name):
    spec = SPECS[name]()
    for g in spec.module.table.names:
        x = spec.module.gen(g)
        assert spec.coassociativity_defect(x) == frozenset(), g
        assert spec.counit_defect(x) == frozenset(), g


@pytest.mark.parametrize("name", ["genuine", "borel", "graded"])
@given(seed=st.integers(0, 10_000))
def test_random_monomials_coassociative(name, seed):
    spec = SPECS[name]()
    tr = TruncationWindow(weight_cap=4, v_cap=2, a_cap=4)
    for m in random_module_monomials(spec, 3, seed, tr):
        assert spec.coassociativity_defect((m,)) == frozenset()
        assert spec.counit_defect((m,)) == frozenset()


def test_broken_coaction_is_detected():
    spec = SPECS["borel"]()
    wrong = dict(spec.coaction)
    wrong["t1"] = spec.coact(spec.module.element("t1")) ^ spec.coact(spec.module.element("e1"))
    broken = ComoduleSpec("broken", spec.module, spec.host, wrong)
    assert broken.counit_defect(spec.module.element("t1")) != frozenset()


def test_text_round_trip():
    spec = SPECS["borel"]()
    again = ComoduleSpec.from_text("copy", spec.to_text(), spec.host, 6)
    assert again.coaction == spec.coaction
