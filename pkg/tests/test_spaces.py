import pytest

from chowwitt.errors import ArityError, DegreeBoundExceeded, OutOfScope, ParamError, SpaceSyntaxError
from chowwitt.fields import FieldModel
from chowwitt.spaces import (REMARK_FLAG, Atom, SpaceExpr, build_space, kunneth_verdict,
                             parse_space, regression_cases, render_table, witt_degree0_product)


@pytest.mark.parametrize("text, atoms", [
    ("P(3) x P(4)", (Atom("P", 3), Atom("P", 4))),
    ("Bmu(6) x BGm", (Atom("Bmu", 6), Atom("BGm"))),
    ("  BGm  ", (Atom("BGm"),)),
    ("Bmu( 5 )xBGm", (Atom("Bmu", 5), Atom("BGm"))),
])
def test_parse(text, atoms):
    assert parse_space(text).atoms == atoms


@pytest.mark.parametrize("text", ["P(3) x P(4)", "Bmu(6) x BGm", "BGm", "Bmu(2) x Bmu(4)"])
def test_printer_round_trip(text):
    e = parse_space(text)
    assert parse_space(str(e)) == e
    assert str(e) == text


@pytest.mark.parametrize("text, pos", [("Q(2)", 0), ("P(2) y P(3)", 5), ("P(", 2),
                                        ("Bmu(3", 5), ("P(a)", 2), ("", 0)])
def test_syntax_errors_carry_positions(text, pos):
    with pytest.raises(SpaceSyntaxError) as info:
        parse_space(text)
    assert info.value.position == pos


def test_arity_and_params():
    with pytest.raises(ArityError):
        parse_space("BGm x BGm x BGm")
    with pytest.raises(ParamError):
        parse_space("P(0)")
    with pytest.raises(ParamError):
        parse_space("Bmu(-2)")


def test_char_exclusion_and_scope():
    with pytest.raises(ParamError):
        build_space("Bmu(6)", FieldModel.parse("F3"))
    with pytest.raises(OutOfScope):
        build_space("P(2) x BGm", FieldModel("R"))


def test_factor_order_is_canonical(real):
    sp = build_space("Bmu(6) x BGm", real, 2)
    assert str(sp.expr) == "BGm x Bmu(6)"
    assert sp.swapped and "reorder" in sp.derivation_log[0]
    sp = build_space("Bmu(4) x Bmu(3)", real, 2)
    assert str(sp.expr) == "Bmu(3) x Bmu(4)"


def test_derivation_log_records_parity_branch(real):
    odd = build_space("Bmu(5)", real, 2).derivation_log
    even = build_space("Bmu(4)", real, 2).derivation_log
    assert any("odd" in line for line in odd)
    assert any("even" in line for line in even)


def test_bound_is_enforced(real):
    sp = build_space("BGm", real, 3)
    with pytest.raises(DegreeBoundExceeded):
        sp.piece("CW", 4, (0,))
    assert [r.margin for r in sp.rows("CW", (0,), with_generators=False)] == [3, 2, 1, 0]
    assert all(r.margin is None for r in build_space("P(2)", real).rows("CW"))


def test_pic_rank(real):
    assert build_space("Bmu(3) x Bmu(5)", real, 1).pic_mod2_rank == 0
    assert build_space("Bmu(3) x Bmu(4)", real, 1).pic_mod2_rank == 1
    assert build_space("BGm x Bmu(4)", real, 1).pic_mod2_rank == 2


def test_bmu_odd_rows(real):
    rows = build_space("Bmu(5)", real, 4).rows("CW")
    assert [(r.degree, r.invariant_factors, r.free_rank) for r in rows] == \
        [(0, (), 2)] + [(d, (5,), 0) for d in range(1, 5)]
    assert rows[1].generators == ["e"]


def test_generator_names_for_mixed_product(real):
    rows = build_space("BGm x Bmu(4)", real, 2).rows("CW", (1, 0))
    assert rows[1].generators == ["e1", "H2*e3"] or set(rows[1].generators) >= {"e1"}


@pytest.mark.parametrize("m, n, names", [
    (3, 5, ["1"]), (3, 4, ["1", "U2"]), (2, 4, ["1", "U2", "U1", "U1*U2"])])
def test_witt_degree0_product(m, n, names, real):
    got, G = witt_degree0_product(m, n, real)
    assert got == names
    assert G.free_rank == len(names)
    # agrees with the derived degree-0 I-cohomology
    sp = build_space(f"Bmu({m}) x Bmu({n})", real, 0)
    assert sp.piece("hI", 0, (0,) * sp.pic_mod2_rank).invariants() == G.invariants()


@pytest.mark.parametrize("space, verdict", [
    ("BGm x Bmu(3)", "iso"), ("BGm x Bmu(2)", "neither"), ("BGm x BGm", "inj-only")])
def test_kunneth_settled_cells(space, verdict, real):
    assert kunneth_verdict(space, real, 4).verdict == verdict


def test_kunneth_odd_odd_is_flagged(real):
    kv = kunneth_verdict("Bmu(3) x Bmu(5)", real, 4)
    assert kv.flag == REMARK_FLAG
    assert kv.verdict == "iso"


def test_kunneth_needs_two_factors(real):
    with pytest.raises(ArityError):
        kunneth_verdict("BGm", real)


def test_regression_cases_skip_bad_characteristic():
    cases = regression_cases()
    assert ("Bmu(3)", "F3") not in cases and ("Bmu(3)", "F5") in cases


def test_render_table_is_deterministic(real):
    a = render_table(build_space("Bmu(2) x Bmu(4)", real, 2))
    b = render_table(build_space("Bmu(2) x Bmu(4)", real, 2))
    assert a == b and a.startswith("space Bmu(2) x Bmu(4)\n")
    assert isinstance(parse_space("BGm"), SpaceExpr)
