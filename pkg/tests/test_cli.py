import json

import pytest

from chowwitt.cli import GOLDEN_ENV, golden_name, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_compute_table(capsys):
    code, out, _ = run(capsys, "compute", "Bmu(3)", "--max-deg", "3")
    assert code == 0
    assert "Z/3" in out and "PASS" in out


def test_compute_json_schema(capsys):
    code, out, _ = run(capsys, "compute", "BGm x Bmu(4)", "--max-deg", "2", "--format", "json")
    data = json.loads(out)
    assert code == 0
    assert set(data) == {"space", "field", "bound", "bidegrees", "checks"}
    assert set(data["bidegrees"][0]) == {"degree", "twist", "invariant_factors", "free_rank",
                                         "rho_image_index", "generators"}
    assert all(c["passed"] for c in data["checks"])


def test_compute_twist_filter(capsys):
    _, out, _ = run(capsys, "compute", "BGm x Bmu(4)", "--max-deg", "2", "--twist", "10",
                    "--format", "json", "--no-checks")
    data = json.loads(out)
    assert {b["twist"] for b in data["bidegrees"]} == {"10"}
    assert data["checks"] == []


def test_compare_exit_codes(capsys):
    assert run(capsys, "compare", "BGm x Bmu(3)", "--max-deg", "3")[0] == 0
    code, out, _ = run(capsys, "compare", "P(2) x P(2)", "--theory", "hI", "--format", "json")
    assert code == 0 and json.loads(out)["verdict"] == "iso"


def test_kunneth_always_succeeds(capsys):
    code, out, _ = run(capsys, "kunneth", "BGm x Bmu(2)", "--max-deg", "3", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["verdict"] == "neither"
    code, out, _ = run(capsys, "kunneth", "Bmu(3) x Bmu(5)", "--max-deg", "2")
    assert code == 0 and "flag:" in out


def test_oracle_command(capsys):
    code, out, _ = run(capsys, "oracle", "P(2) x P(2)", "--extra", "1")
    assert code == 0 and "match" in out and "MISMATCH" not in out


def test_oracle_needs_reals(capsys):
    code, _, err = run(capsys, "oracle", "P(2)", "--field", "C")
    assert code == 2 and err.startswith("error: oracle")


@pytest.mark.parametrize("argv, kind", [
    (("compute", "Q(3)"), "SpaceSyntaxError"),
    (("compute", "P(0)"), "ParamError"),
    (("compute", "BGm x BGm x BGm"), "ArityError"),
    (("compute", "Bmu(3)", "--field", "F3"), "ParamError"),
    (("compute", "P(2) x BGm"), "OutOfScope"),
])
def test_errors_exit_two(capsys, argv, kind):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == ""
    assert kind in err and argv[1] in err


def test_bad_twist_is_an_argparse_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["compute", "BGm", "--twist", "2"])
    assert info.value.code == 2


def test_golden_name():
    assert golden_name("Bmu(2) x Bmu(4)", "R") == "Bmu_2_x_Bmu_4__R.txt"


def test_regress_update_then_verify(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv(GOLDEN_ENV, str(tmp_path))
    import chowwitt.cli as cli
    monkeypatch.setattr(cli, "regression_cases", lambda: [("BGm", "R"), ("Bmu(4)", "F3")])
    assert run(capsys, "regress")[0] == 1              # nothing there yet
    assert run(capsys, "regress", "--update")[0] == 0
    assert run(capsys, "regress")[0] == 0
    path = tmp_path / golden_name("BGm", "R")
    path.write_text(path.read_text().replace("Z", "Q", 1))
    code, out, _ = run(capsys, "regress")
    assert code == 1 and "DIFF" in out


@pytest.mark.slow
def test_shipped_goldens_match(capsys):
    code, out, _ = run(capsys, "regress")
    assert code == 0, out
