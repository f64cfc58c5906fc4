import pytest

from chowwitt.errors import OutOfScope
from chowwitt.linalg import FpAbGroup
from chowwitt.oracle import (cycle_class_check, cycle_class_sweep, point, product_cohomology,
                             product_model, real_points, real_ring_embedding,
                             real_ring_vs_oracle, rp_cohomology, rp_model)
from chowwitt.spaces import build_space


def desc(groups):
    return [g.describe() for g in groups]


def test_rp_untwisted():
    assert desc(rp_cohomology(5)) == ["Z", "0", "Z/2", "0", "Z/2", "Z"]
    assert desc(rp_cohomology(4)) == ["Z", "0", "Z/2", "0", "Z/2"]


def test_rp_twisted():
    assert desc(rp_cohomology(4, twisted=True)) == ["0", "Z/2", "0", "Z/2", "Z"]
    assert desc(rp_cohomology(3, twisted=True)) == ["0", "Z/2", "0", "Z/2"]


def test_rp_rejects_degenerate():
    with pytest.raises(ValueError):
        rp_cohomology(0)


@pytest.mark.parametrize("N, tw", [(3, False), (4, True), (6, False)])
def test_square_zero(N, tw):
    assert rp_model(N, tw).check_square_zero()
    assert product_model(rp_model(N, tw), rp_model(N - 1, not tw)).check_square_zero()


def test_product_of_infinite_rps():
    got = product_cohomology(rp_model(8), rp_model(8))
    assert got[3].describe() == "Z/2"
    assert got[4].invariants() == FpAbGroup(3, [{0: 2}, {1: 2}, {2: 2}]).invariants()


def test_components_repeat():
    M = rp_model(3, components=2)
    assert M.cohomology(0).invariants() == ((), 2)
    assert point().cohomology(0).describe() == "Z"


def test_real_points_shapes(real):
    sp = build_space("BGm x Bmu(3)", real, 2)
    assert real_points(sp, (0,), 2).top == 4
    sp = build_space("Bmu(4)", real, 2)
    assert real_points(sp, (0,), 2).components == 2


def test_real_ring_embedding_is_iso():
    assert real_ring_embedding(8).verdict == "iso"


def test_real_ring_matches_oracle():
    rows = real_ring_vs_oracle(8)
    assert len(rows) == 9 and all(ok for *_, ok in rows)


@pytest.mark.parametrize("q, r", [(2, 2), (2, 3), (3, 4)])
def test_projective_products_match(q, r, real):
    sp = build_space(f"P({q}) x P({r})", real)
    res = cycle_class_sweep(sp, extra=2)
    assert res and all(x.status == "match" for x in res)


def test_bmu_odd_degree_zero_agrees(real):
    sp = build_space("Bmu(5)", real, 4)
    r = cycle_class_check(sp, 0, 0, ())
    assert r.agree and r.derived == r.oracle == "Z"


def test_bmu_even_diagonal_disagrees_in_degree_two(real):
    # j = i is below the certified level, and the groups really differ
    sp = build_space("Bmu(4)", real, 4)
    r = cycle_class_check(sp, 2, 2, (0,))
    assert r.status == "not-applicable" and not r.agree


def test_quotient_above_diagonal_is_not_derived(real):
    sp = build_space("Bmu(4)", real, 4)
    r = cycle_class_check(sp, 1, 2, (0,))
    assert r.status == "not-applicable" and r.derived == "?"


def test_oracle_needs_reals_and_j_at_least_i(real):
    with pytest.raises(OutOfScope):
        cycle_class_check(build_space("P(2)", real), 2, 1, (0,))
    from chowwitt.fields import FieldModel
    with pytest.raises(OutOfScope):
        cycle_class_check(build_space("P(2)", FieldModel("C")), 1, 1, (0,))
