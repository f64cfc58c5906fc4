import pytest

from chowwitt.errors import ParamError, UnsupportedField
from chowwitt.fields import GF, FieldModel
from chowwitt.linalg import FpAbGroup, isomorphic
from chowwitt.scalars import (fundamental_ideal_power, grothendieck_witt, gw_as_fiber_product,
                              hyperbolic, ibar, minus_one_form, witt_ring)

# (field, GW, W) as (invariant factors, free rank)
RINGS = [
    ("C", ((), 1), ((2,), 0)),
    ("R", ((), 2), ((), 1)),
    ("F3", ((2,), 1), ((4,), 0)),      # q = 3 mod 4: W = Z/4
    ("F5", ((2,), 1), ((2, 2), 0)),    # q = 1 mod 4: W = Z/2[Z/2]
    ("F7", ((2,), 1), ((4,), 0)),
    ("F9", ((2,), 1), ((2, 2), 0)),
]


@pytest.mark.parametrize("name, gw, w", RINGS)
def test_gw_and_w_groups(name, gw, w):
    f = FieldModel.parse(name)
    assert grothendieck_witt(f).group.invariants() == gw
    assert witt_ring(f).group.invariants() == w


@pytest.mark.parametrize("name", ["C", "R", "F3", "F5", "F9", "F13"])
def test_gw_is_the_fiber_product(name):
    f = FieldModel.parse(name)
    assert isomorphic(gw_as_fiber_product(f), grothendieck_witt(f).group)


def test_hyperbolic_is_zero_in_w(any_field):
    w = witt_ring(any_field)
    assert w.is_zero(hyperbolic(any_field))
    gw = grothendieck_witt(any_field)
    assert not gw.is_zero(hyperbolic(any_field))


def test_minus_one_squared_is_one(any_field):
    gw = grothendieck_witt(any_field)
    m = minus_one_form(any_field)
    assert gw.equal(gw.mul(m, m), gw.from_int(1))


def test_ideal_powers_over_reals():
    f = FieldModel("R")
    # I^j(R) = 2^j Z inside W(R) = Z
    for j in range(4):
        assert ibar(f, j).invariants() == ((2,), 0)
        assert fundamental_ideal_power(f, j)[0].invariants() == ((), 1)


def test_ideal_powers_over_finite_fields():
    f = FieldModel.parse("F3")
    assert ibar(f, 0).invariants() == ((2,), 0)
    assert ibar(f, 1).invariants() == ((2,), 0)
    assert fundamental_ideal_power(f, 2)[0].is_trivial


def test_ibar_is_z2_over_c():
    f = FieldModel("C")
    assert ibar(f, 0).invariants() == ((2,), 0)
    assert ibar(f, 1).is_trivial


def test_gf_arithmetic():
    F = GF(9)
    assert len(F.squares) == 4
    assert all(F.mul(a, F.neg(a)) == F.neg(F.mul(a, a)) for a in range(9))
    assert F.add(1, F.neg(1)) == 0


@pytest.mark.parametrize("text", ["F2", "F4", "F6", "Q", "F17"])
def test_unsupported_fields(text):
    with pytest.raises(UnsupportedField):
        FieldModel.parse(text)


def test_characteristic_exclusion():
    with pytest.raises(ParamError):
        FieldModel.parse("F3").excluding(6)
    assert FieldModel.parse("F5").excluding(6).allows(6)
    assert FieldModel.parse("F5") == FieldModel.parse("F5").excluding(3)


def test_field_names_round_trip():
    for name in ["C", "R", "F3", "F5", "F9", "F13"]:
        assert FieldModel.parse(name).name == name
    assert FieldModel.parse("Fq(7)").name == "F7"
    assert isinstance(witt_ring(FieldModel("C")).group, FpAbGroup)
