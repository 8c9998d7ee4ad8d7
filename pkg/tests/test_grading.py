from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rhoext.grading import RHO, SIGMA, MultiDegree, RODegree, UnknownGenerator, degree_of_generator, rho

ints = st.integers(min_value=-20, max_value=20)
ro_degrees = st.builds(RODegree, ints, ints)


def test_a_sigma_degree():
    d = degree_of_generator("a")
    assert d.ro == RODegree(0, -1)
    assert (d.adams, d.bockstein, d.weight) == (0, 1, 0)


def test_e2_degree():
    d = degree_of_generator("e2")
    assert d.ro == RODegree(3, 3)
    assert (d.adams, d.bockstein, d.weight) == (0, 0, 4)


def test_unit_degree():
    d = MultiDegree(RODegree(0, 0))
    assert d.ro == RODegree(0, 0)
    assert (d.adams, d.bockstein, d.weight) == (0, 0, 0)


@pytest.mark.parametrize("i", range(0, 6))
def test_v_degree_is_multiple_of_rho(i):
    d = degree_of_generator(f"v{i}")
    assert d.ro == rho((1 << i) - 1)
    assert d.adams == 1


@pytest.mark.parametrize("n", range(0, 5))
def test_t_degree_and_weight(n):
    d = degree_of_generator(f"t{n}")
    assert d.ro == RODegree(1 << n, (1 << n) - 1)
    assert d.weight == 1 << n


def test_u_degree_and_stem():
    d = degree_of_generator("u")
    assert d.ro == RODegree(1, -1)
    assert d.ro.underlying == 0


def test_unknown_generator():
    with pytest.raises(UnknownGenerator):
        degree_of_generator("zz7")


def test_rho_and_sigma():
    assert RHO == RODegree(1, 1)
    assert SIGMA == RODegree(0, 1)
    assert rho(3) == RHO.scale(3)


@given(ro_degrees, ro_degrees)
def test_addition_is_componentwise(x, y):
    z = x + y
    assert z.underlying == x.underlying + y.underlying
    assert z - y == x


@given(ints)
def test_rho_multiples_have_rho_shape(k):
    assert rho(k).rho_shape() is not None
