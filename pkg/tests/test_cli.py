import json

import pytest

from foamcalc import cli
from foamcalc.diagrams import bundled_path


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_homology_text_and_json(capsys):
    code, out, _ = run(capsys, "homology", "--pd", "unknot", "--N", "3")
    assert code == 0 and "t^0q^-2 + t^0q^0 + t^0q^2" in out
    code, out, _ = run(capsys, "homology", "--pd", "trefoil_right", "--N", "2", "--format", "json")
    rep = json.loads(out)
    assert code == 0 and rep["ring"] == "Z"
    assert any(g["torsion"] == [2] for g in rep["groups"])


def test_homology_csv_from_path(capsys):
    code, out, _ = run(capsys, "homology", "--pd", str(bundled_path("hopf")), "--N", "2", "--format", "csv")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "h,q,rank,torsion" and len(lines) == 5


def test_reduced_and_basepoints(capsys):
    code, out, _ = run(capsys, "reduced", "--pd", "trefoil_right", "--N", "2", "--basepoint", "q")
    assert code == 0 and out.strip().endswith("t^-3q^8 + t^-2q^6 + t^0q^2")


def test_evaluators(capsys):
    assert run(capsys, "moy-eval", "--graph", "graph_theta")[1].strip() == "q^(-3) + 2*q^(-1) + 2*q + q^3"
    code, out, _ = run(capsys, "foam-eval", "--foam", str(bundled_path("foam_sphere_x2")))
    assert code == 0 and out.strip() == "-1"


def test_statespace_reports(capsys):
    code, out, _ = run(capsys, "statespace", "--graph", "graph_circle2", "--format", "csv")
    assert code == 0 and out.splitlines()[0] == "q,expected,rank,spanning"
    code, out, _ = run(capsys, "statespace", "--pd", "hopf", "--N", "3", "--resolution", "11", "--format", "json")
    assert code == 0 and json.loads(out)["resolution"] == "11"


def test_checks(capsys):
    assert run(capsys, "composite-check", "--N", "4", "--mod", "4")[1].strip() == "Zero"
    assert run(capsys, "composite-check", "--N", "3")[1].strip() == "Identity"
    code, out, _ = run(capsys, "verify-thm1", "--pd", "hopf", "--P", "2", "--format", "json")
    assert code == 0 and json.loads(out)["passed"]


def test_grassmann(capsys, tmp_path):
    target = tmp_path / "nabla.json"
    code, _, _ = run(capsys, "grassmann", "--k", "2", "--N", "4", "--mod", "2", "--format", "json", "--out", str(target))
    rep = json.loads(target.read_text())
    assert code == 0 and len(rep["matrix"]) == 6
    code, out, _ = run(capsys, "grassmann", "iso", "--k", "1", "--N", "3", "--format", "json")
    assert code == 0 and json.loads(out)["partitions"] == [[], [1], [2]]


@pytest.mark.parametrize("argv,code,kind", [
    (["homology", "--pd", "no_such_file.json", "--N", "2"], 2, "input"),
    (["homology", "--pd", "hopf"], 2, "input"),
    (["homology", "--pd", "hopf", "--N", "2", "--ring", "Z/1"], 3, "precondition"),
    (["reduced", "--pd", "hopf", "--N", "2", "--mod", "4"], 3, "precondition"),
    (["reduced", "--pd", "hopf", "--N", "2", "--basepoint", "zz"], 3, "precondition"),
    (["verify-thm1", "--pd", "hopf", "--P", "2", "--ring", "Q"], 3, "precondition"),
    (["grassmann", "--k", "2", "--N", "4", "--mod", "3"], 3, "precondition"),
])
def test_error_codes(capsys, argv, code, kind):
    got, out, err = run(capsys, *argv)
    assert got == code and not out
    assert json.loads(err)["error"] == kind


def test_unknown_command_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["frobnicate"])
    assert exc.value.code == 2


def test_future_fixture_version_is_rejected(capsys, tmp_path):
    data = json.loads(bundled_path("hopf").read_text())
    data["version"] = 2
    path = tmp_path / "hopf_v2.json"
    path.write_text(json.dumps(data))
    code, _, err = run(capsys, "homology", "--pd", str(path), "--N", "2")
    assert code == 2 and "version" in json.loads(err)["message"]
