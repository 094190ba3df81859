import json

import pytest

from alexlab.cli import main, run
from alexlab.serialize import dump, poly_document

from .conftest import CORPUS, poly

TREFOIL = str(CORPUS / "trefoil.fp")
SOLBUNDLE = str(CORPUS / "solbundle.fp")


def test_delta_text():
    assert run(["delta", TREFOIL, "--k", "1"]) == (0, "t^2 - t + 1\n")
    assert run(["delta", TREFOIL]) == (0, "t^2 - t + 1\n")
    assert run(["delta", TREFOIL, "--k", "2"]) == (0, "1\n")


def test_delta_machine_output():
    code, out = run(["delta", TREFOIL, "--machine"])
    assert code == 0
    assert out == dump({"k": 1, "delta": poly_document(poly("t^2 - t + 1"))})
    assert json.loads(out)["delta"]["terms"] == [{"e": [0], "c": 1}, {"e": [1], "c": -1}, {"e": [2], "c": 1}]


def test_thickness_and_norm():
    assert run(["thickness", TREFOIL]) == (0, "1\n")
    assert run(["norm", str(CORPUS / "t24link.fp"), "--phi", "1,1"]) == (0, "2\n")


def test_abelianize_check():
    code, out = run(["abelianize", TREFOIL, "--check"])
    assert code == 0
    assert out == "b1: 1\ntorsion: none\na -> (3)\nb -> (2)\nfox identity: ok\n"


def test_test_qp_reports_the_witness():
    code, out = run(["test", "qp", SOLBUNDLE])
    assert code == 0
    lines = out.splitlines()
    assert "verdict: OBSTRUCTED" in lines
    assert "witness: non-cyclotomic factor t^2 - 3*t + 1" in lines


def test_test_kahler_machine():
    code, out = run(["test", "kahler", TREFOIL, "--kmax", "1", "--machine"])
    doc = json.loads(out)
    assert code == 0
    assert doc["verdict"] == "OBSTRUCTED"
    assert doc["witnesses"][0] == "b1 = 1 is odd"


def test_cv_at_a_character():
    assert run(["cv", TREFOIL, "--rho", "1/6", "--k", "1"]) == (0, "dim: 1\nin V_1: yes\n")
    assert run(["cv", TREFOIL, "--rho", "1/2"]) == (0, "dim: 0\n")


def test_cv_sweep():
    assert run(["cv", TREFOIL, "--sweep", "2"]) == (0, "(1/2) 0\nmismatches at k=1: 0\n")


def test_tori_intersect():
    code, out = run(["tori", "intersect", "--t1", "n=2;rows=(1,0);q=(1/2,0)", "--t2", "n=2;rows=(0,1)"])
    assert (code, out) == (0, "meets: yes\ndim: 0\nparallel: no\n")
    code, out = run(["tori", "intersect", "--t1", "n=2;rows=(1,1);q=(1/2,0)", "--t2", "n=2;rows=(1,1)"])
    assert (code, out) == (0, "meets: no\nparallel: yes\n")


def test_build():
    assert run(["build", "torusknot", "--p", "2", "--q", "3"]) == (0, "gens a b\nrel a^2 b^-3\n")
    code, out = run(["build", "torusbundle", "--matrix", "2,1;1,1"])
    assert code == 0
    assert out == (CORPUS / "solbundle.fp").read_text().split("\n", 1)[1]
    code, out = run(["build", "freebycyclic", "--image", "x y", "--image", "y x y", "--names", "x", "y"])
    assert code == 0
    assert out.startswith("gens x y t\n")


def test_mcmullen():
    code, out = run(["mcmullen", str(CORPUS / "t24link.fp"), "--data", str(CORPUS / "t24link.thurston")])
    assert code == 0
    assert out.splitlines() == [
        "phi=(1,0) alexander=1 thurston=1 PASS",
        "phi=(1,1) alexander=2 thurston=2 PASS",
        "phi=(1,-1) alexander=0 thurston=0 PASS",
    ]


def test_sum():
    code, out = run(["sum", SOLBUNDLE, str(CORPUS / "z2mod.fp")])
    assert code == 0
    assert "product first order: 2*t^2 - 6*t + 2" in out.splitlines()
    assert "additive: yes" in out.splitlines()


def test_batch(tmp_path):
    missing = str(tmp_path / "missing.fp")
    code, out = run(["batch", TREFOIL, missing, "--jobs", "2", "--kmax", "1"])
    assert code == 1
    lines = out.splitlines()
    assert lines[0] == f"{TREFOIL}: b1=1 thickness=1 kahler=OBSTRUCTED qp=CONSISTENT"
    assert lines[1].startswith(f"{missing}: error: ")


def test_batch_machine_has_no_exit_key():
    code, out = run(["batch", TREFOIL, "--machine"])
    assert code == 0
    assert "exit" not in json.loads(out)


# -- exit codes ---------------------------------------------------------------------

def test_missing_file(tmp_path):
    assert run(["delta", str(tmp_path / "nope.fp")]) == (1, "")


def test_parse_error(tmp_path, capsys):
    bad = tmp_path / "bad.fp"
    bad.write_text("gens a\nrel a b\n")
    assert run(["delta", str(bad)]) == (1, "")
    assert "line 2" in capsys.readouterr().err


def test_computation_limit(monkeypatch):
    monkeypatch.setenv("ALEXLAB_MAX_VARS", "1")
    assert run(["delta", str(CORPUS / "z2.fp")]) == (2, "")


def test_invalid_input():
    assert run(["norm", TREFOIL, "--phi", "1,0"]) == (3, "")
    assert run(["build", "torusbundle", "--matrix", "2,0;0,1"]) == (3, "")
    assert run(["build", "torusknot", "--p", "0", "--q", "3"]) == (3, "")


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["delta"],
        ["cv", TREFOIL],
        ["build", "torusbundle", "--matrix", "2,x"],
        ["tori", "intersect", "--t1", "rows=(1,0)", "--t2", "n=2"],
    ],
)
def test_usage_and_malformed_arguments(argv):
    assert run(argv) == (1, "")


def test_bad_environment(monkeypatch):
    monkeypatch.setenv("ALEXLAB_KMAX", "lots")
    assert run(["test", "qp", TREFOIL]) == (1, "")


def test_main_exits_with_the_code(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["thickness", TREFOIL])
    assert excinfo.value.code == 0
    assert capsys.readouterr().out == "1\n"


def test_batch_reports_undecodable_files(tmp_path):
    binary = tmp_path / "binary.fp"
    binary.write_bytes(b"\xff\xfe\x00gens")
    code, out = run(["batch", TREFOIL, str(binary), "--kmax", "1"])
    assert code == 1
    lines = out.splitlines()
    assert lines[0] == f"{TREFOIL}: b1=1 thickness=1 kahler=OBSTRUCTED qp=CONSISTENT"
    assert lines[1].startswith(f"{binary}: error: ")
