import json

import pytest

from symplift import cocycles as cc
from symplift.cli import main
from symplift.transvections import canonical_lifts
from symplift.zmod import dump_matrices


def _lines(capsys):
    out = capsys.readouterr().out
    return [json.loads(ln) for ln in out.splitlines() if ln.strip()]


def test_verify_ok(capsys):
    assert main(["verify", "lemma-minus1", "--trials", "10"]) == 0
    (row,) = _lines(capsys)
    assert row["id"] == "lemma-minus1" and row["status"] == "verified"


def test_verify_unknown_id(capsys):
    assert main(["verify", "nope"]) == 2
    assert "unknown check id" in capsys.readouterr().err


def test_verify_falsified_exit_code(capsys):
    assert main(["verify", "prop-mod16", "--mutate-delta", "--sample", "1", "--trials", "0"]) == 1
    (row,) = _lines(capsys)
    assert row["status"] == "falsified" and row["evidence"]["counterexample"]


def test_verify_json_file(tmp_path, capsys):
    path = tmp_path / "v.json"
    assert main(["verify", "prop-N-c", "--json", str(path)]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(path.read_text())["status"] == "verified"


def test_enumerate_level4(capsys):
    assert main(["enumerate", "--level", "4", "--g", "2"]) == 0
    rows = _lines(capsys)
    assert len(rows) == 16
    assert rows[0]["label"] == "level=4 g=2 c=0000 d=-"


def test_enumerate_level8_one_type_with_order(capsys):
    assert main(["enumerate", "--level", "8", "--c", "0000"]) == 0
    assert len(_lines(capsys)) == 16


def test_closure_from_matrices(tmp_path, capsys):
    lifts = canonical_lifts(2)
    f = tmp_path / "gens.txt"
    f.write_text("# star lifts mod 4\n" + dump_matrices(lifts.t(1, j, 2) for j in range(2, 6)))
    assert main(["closure", "--mod", "2^2", "--gens", str(f)]) == 0
    (row,) = _lines(capsys)
    assert row["order"] == 122880 and row["top_layer_dim"] == 10


def test_closure_from_words(tmp_path, capsys):
    phi = cc.build_phi_c((0, 1, 0, 0), 2)
    f = tmp_path / "words.txt"
    f.write_text("\n".join(str(w) for w in cc.subgroup_generators(phi)) + "\n")
    assert main(["closure", "--mod", "4", "--gens", str(f), "--g", "2"]) == 0
    (row,) = _lines(capsys)
    assert row["order"] == 7680 and row["top_layer_dim"] == 6


@pytest.mark.parametrize("argv", [
    ["closure", "--mod", "6", "--gens", "x"],
    ["closure", "--mod", "2^2", "--gens", "/nonexistent/file"],
])
def test_closure_usage_errors(argv, capsys):
    assert main(argv) == 2


def test_closure_words_need_genus(tmp_path):
    f = tmp_path / "w.txt"
    f.write_text("t[1,2]\n")
    assert main(["closure", "--mod", "2", "--gens", str(f)]) == 2


def test_closure_rejects_non_symplectic(tmp_path):
    f = tmp_path / "m.txt"
    f.write_text("g=1 k=2 3 0 0 1\n")
    assert main(["closure", "--mod", "4", "--gens", str(f)]) == 2


def test_closure_cap_overflow(tmp_path):
    f = tmp_path / "m.txt"
    f.write_text(dump_matrices(canonical_lifts(2).t(1, j, 2) for j in range(2, 6)))
    assert main(["closure", "--mod", "4", "--gens", str(f), "--cap", "100"]) == 2


def test_list_checks(capsys):
    assert main(["list-checks"]) == 0
    rows = _lines(capsys)
    assert rows[0]["id"] == "rep-image-order"
    assert main(["list-checks", "--coverage"]) == 0
    cov = {r["operation"]: r["checks"] for r in _lines(capsys)}
    assert "thm-mod8" in cov["build_phi_cd"]
