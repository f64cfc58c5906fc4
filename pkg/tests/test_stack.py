import pytest

from chowwitt.errors import InjectivityUnknown, OutOfScope
from chowwitt.linalg import GroupHom
from chowwitt.models import ProjectiveModel, QuotientModel
from chowwitt.stack import (TheoryStack, assemble_chow_witt, assemble_nondiagonal,
                            check_euler_formula, check_sign_independence,
                            check_truncation_stability, euler_case_split, euler_class,
                            euler_of_tensor)


def _models(f):
    bgm2 = ProjectiveModel((8, 8), f, bound=6)
    return {
        "P3": (ProjectiveModel((3,), f), 3),
        "P2xP3": (ProjectiveModel((2, 3), f), 5),
        "BGm": (ProjectiveModel((8,), f, bound=6), 6),
        "BGm2": (bgm2, 6),
        "Bmu4": (QuotientModel(ProjectiveModel((8,), f, bound=6), 0, 4), 6),
        "Bmu2xBmu4": (QuotientModel(QuotientModel(bgm2, 1, 4), 0, 2), 6),
    }


@pytest.mark.parametrize("name", ["P3", "P2xP3", "BGm", "BGm2", "Bmu4", "Bmu2xBmu4"])
def test_structural_checks_pass(name, any_field):
    model, bound = _models(any_field)[name]
    results = TheoryStack(model, bound).run_checks()
    assert results and all(r.passed for r in results), [r.line() for r in results]


def test_projective_models_run_all_four_checks(real):
    model, bound = _models(real)["P2xP3"]
    names = {r.name for r in TheoryStack(model, bound).run_checks()}
    assert names == {"rho o h = 2", "CH -> CH~ -> H(I) -> 0 exact",
                     "central square commutes", "Bar sequence exact"}


class _BrokenStack(TheoryStack):
    def h_map(self, d, t):
        f = super().h_map(d, t)
        return GroupHom(f.domain, f.codomain,
                        [{k: 3 * a for k, a in v.items()} for v in f.images])


def test_rho_h_check_detects_a_wrong_hyperbolic_map(real):
    stack = _BrokenStack(ProjectiveModel((2,), real), 2)
    assert not stack.check_rho_h().passed


def test_certificates(real):
    model, bound = _models(real)["P3"]
    certs = {a.certificate for a in assemble_chow_witt(TheoryStack(model, bound))}
    assert certs == {"no 2-torsion"}
    model, bound = _models(real)["Bmu4"]
    certs = {a.certificate for a in assemble_chow_witt(TheoryStack(model, bound))}
    assert certs == {"localization"}


def test_strict_assembly_never_guesses(real):
    for model, bound in _models(real).values():
        for a in assemble_chow_witt(TheoryStack(model, bound), strict=True):
            assert a.certificate != "unknown"
    assert issubclass(InjectivityUnknown, Exception)


def test_nondiagonal_groups(real):
    model = ProjectiveModel((3,), real)
    # H^3(P^3, I^2) = W(R) from the orientation class of the odd-dimensional P^3
    assert assemble_nondiagonal(model, 3, 2, (0,)).describe() == "Z"
    assert assemble_nondiagonal(model, 2, 1, (0,)).describe() == "0"
    with pytest.raises(OutOfScope):
        assemble_nondiagonal(model, 2, 2, (0,))


def test_sign_independence(any_field):
    def build(sign):
        base = ProjectiveModel((8, 8), any_field, bound=6)
        return QuotientModel(QuotientModel(base, 1, 4, sign=sign), 0, 3, sign=sign) \
            if any_field.allows(3) else QuotientModel(base, 1, 4, sign=sign)
    assert check_sign_independence(build, 6).passed


def test_truncation_stability(any_field):
    build = lambda b: QuotientModel(ProjectiveModel((b + 2, b + 2), any_field, bound=b), 1, 4)  # noqa: E731
    assert check_truncation_stability(build, 6).passed


def test_euler_formula(any_field):
    assert check_euler_formula(any_field, span=6).passed


def test_euler_case_split_values(real):
    alg = ProjectiveModel((4,), real).algebra
    assert alg.format(euler_case_split(alg, 3)) == "-3*e"
    assert alg.format(euler_case_split(alg, -4)) == "2*H*e"


def test_euler_of_tensor_shifts_by_hyperbolic(real):
    alg = ProjectiveModel((4,), real).algebra
    # e(O(1) (x) O(1)^2) = e(O(1)) - h e
    out = euler_of_tensor(alg, (1,), (1,))
    assert out == alg.sub(euler_class(alg, (1,)), alg.parse("h*e"))
