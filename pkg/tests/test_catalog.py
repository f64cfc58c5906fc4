"""Closed-form presentations against the independently derived models."""

import pytest

from chowwitt import catalog
from chowwitt.errors import InvalidCorrespondence, ParamError, UnknownCase
from chowwitt.fields import FieldModel
from chowwitt.spaces import build_space


@pytest.mark.parametrize("space", ["BGm", "BGm x BGm", "Bmu(3)", "Bmu(4)", "BGm x Bmu(3)",
                                   "BGm x Bmu(6)", "Bmu(3) x Bmu(5)", "Bmu(3) x Bmu(4)",
                                   "Bmu(2) x Bmu(4)"])
@pytest.mark.parametrize("theory", ["CW", "hI"])
def test_derived_matches_closed_form(space, theory, any_field):
    try:
        sp = build_space(space, any_field, 4)
    except ParamError as exc:          # char(k) divides n
        pytest.skip(str(exc))
    assert sp.compare_to_catalog(theory).verdict == "iso"


@pytest.mark.parametrize("q, r", [(2, 2), (2, 3), (3, 3)])
@pytest.mark.parametrize("theory", ["CW", "hI", "CH", "Ch"])
def test_projective_products(q, r, theory):
    sp = build_space(f"P({q}) x P({r})", FieldModel("R"))
    assert sp.compare_to_catalog(theory).verdict == "iso"


def test_printed_projective_product_misses_hr_relations():
    from chowwitt.graded import compare
    f = FieldModel("R")
    sp = build_space("P(2) x P(2)", f)
    printed = catalog.product_chow_witt(f, 2, 2, literal=True)
    assert compare(printed, sp.model, None, "CW", 4).verdict == "surj-only"


@pytest.mark.parametrize("n", [2, 4])
def test_printed_bmu_coefficients_are_inconsistent(n):
    f = FieldModel("R")
    sp = build_space(f"Bmu({n})", f, 3)
    with pytest.raises(InvalidCorrespondence):
        sp.compare_to_catalog("CW", literal=True)


@pytest.mark.parametrize("r", [1, 2, 3, 4, 5])
def test_projective_space_groups(r):
    sp = build_space(f"P({r})", FieldModel("R"))
    names = {"GW": "Z^2", "Z": "Z", "2Z": "Z", None: "0"}
    for d in range(r + 1):
        for t in (0, 1):
            kind = catalog.projective_table(r, d, t)
            assert sp.piece("CW", d, (t,)).describe() == names[kind]
            rho = [row for row in sp.rows("CW", (t,), with_generators=False) if row.degree == d][0]
            if kind == "2Z":
                assert rho.rho_image_index == 2


def test_bgm_table():
    sp = build_space("BGm", FieldModel.parse("F3"), 5)
    names = {"GW": "Z + Z/2", "Z": "Z", "2Z": "Z"}
    for d in range(6):
        for t in (0, 1):
            assert sp.piece("CW", d, (t,)).describe() == names[catalog.bgm_table(d, t)]


def test_unknown_cases():
    f = FieldModel("R")
    with pytest.raises(UnknownCase):
        catalog.closed_form("Grassmannian", f)
    with pytest.raises(UnknownCase):
        catalog.closed_form("BGm", f, "CH")
    with pytest.raises(UnknownCase):
        catalog.bmu_bmu_chow_witt(f, 2, 3)


def test_real_points_ring_degrees():
    R = catalog.real_points_ring()
    assert [g.degree for g in R.gens] == [2, 2, 3]
