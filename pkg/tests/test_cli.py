import json

import pytest

from psl2z.catalog import CatalogLabel, ParamPair, make_catalog_rep, six_dim_rep
from psl2z.cli import main
from psl2z.exactalg import QQ, Mat, field_make

Q = field_make(QQ)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def write_rep(tmp_path, name, rep):
    path = tmp_path / name
    path.write_text(json.dumps(rep.to_json()))
    return str(path)


# --- catalog and orbit -------------------------------------------------------------


@pytest.mark.parametrize("char,n", [(0, 11), (7, 11), (3, 4), (2, 6)])
def test_catalog_counts(capsys, char, n):
    code, doc = run_json(capsys, "catalog", "--char", str(char))
    assert code == 0 and doc["ok"]
    assert len(doc["entries"]) == n
    assert all(e["irreducible"] for e in doc["entries"])


def test_catalog_bad_fields(capsys):
    assert main(["catalog", "--char", "4"]) == 2
    assert main(["catalog", "--char", "3", "--extension", "zeta"]) == 2
    capsys.readouterr()


def test_catalog_table(capsys):
    code, out = run(capsys, "catalog", "--char", "7", "--table")
    assert code == 0 and out.startswith("catalog over GF(7)")


def test_orbit(capsys):
    code, doc = run_json(capsys, "orbit", "2", "3")
    assert code == 0 and doc["ok"]
    got = {tuple(o["params"]) for o in doc["orbit"]}
    assert got == {("2", "3"), ("1/2", "1/3"), ("3", "1/6"), ("1/3", "6"), ("1/6", "2"), ("6", "1/2")}
    assert not doc["excluded"]


def test_orbit_bad_parameter(capsys):
    assert main(["orbit", "0", "3"]) == 2
    assert main(["orbit", "x", "3"]) == 2
    capsys.readouterr()


# --- classify --------------------------------------------------------------------------


def test_classify_catalog_file(tmp_path, capsys):
    path = write_rep(tmp_path, "d3.json", make_catalog_rep(CatalogLabel(3, "-"), Q))
    code, doc = run_json(capsys, "classify", path)
    assert code == 0 and doc["status"] == "classified" and doc["label"] == "dim3/-"


def test_classify_dim6_file(tmp_path, capsys):
    path = write_rep(tmp_path, "d6.json", six_dim_rep(ParamPair.of(Q, 6, "1/2")))
    code, doc = run_json(capsys, "classify", path)
    assert code == 0 and doc["status"] == "classified" and doc["dim"] == 6


def test_classify_reducible_file(tmp_path, capsys):
    path = write_rep(tmp_path, "red.json", six_dim_rep(ParamPair.of(Q, 1, 1)))
    code, doc = run_json(capsys, "classify", path)
    assert code == 1 and doc["status"] == "reducible"


def test_classify_outside_hypothesis(tmp_path, capsys):
    from psl2z.rep import Rep

    r = Rep(Mat.permutation(Q, [1, 0, 2, 3]), Mat.permutation(Q, [0, 2, 3, 1]))
    code, doc = run_json(capsys, "classify", write_rep(tmp_path, "perm.json", r))
    assert code == 1 and doc["status"] == "outside-hypothesis"


def test_classify_malformed(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"field": {"char": 0},\n "n": 1 "X": []}')
    code, doc = run_json(capsys, "classify", str(path))
    assert code == 2 and doc["status"] == "parse-error" and "line 2" in doc["error"]
    assert main(["classify", str(tmp_path / "missing.json")]) == 2


def test_classify_invalid_relations(tmp_path, capsys):
    path = tmp_path / "inv.json"
    path.write_text(json.dumps({"field": {"char": 0}, "n": 1, "X": [["2"]], "Y": [["1"]]}))
    code, doc = run_json(capsys, "classify", str(path))
    assert code == 1 and doc["status"] == "invalid"


# --- census and elimination ---------------------------------------------------------------


def test_census_single_case(capsys):
    code, doc = run_json(capsys, "census", "--case", "5")
    assert code == 0 and doc["ok"]
    (case,) = doc["cases"]
    assert (case["arrangements"], case["nonsingular"], case["survivors"]) == (30, 14, 12)


def test_census_unknown_case(capsys):
    assert main(["census", "--case", "6"]) == 2
    capsys.readouterr()


def test_census_char2(capsys):
    code, doc = run_json(capsys, "census", "--char", "2")
    verdicts = {c["case"]: c["pattern_verdict"] for c in doc["cases"]}
    assert verdicts["8"] == verdicts["9a"] == "InfeasibleInverse"
    assert code == 0


def test_elimination_only(capsys):
    code, doc = run_json(capsys, "elimination", "--only", "R1F1")
    assert code == 0 and doc["ok"]
    assert [c["script_id"] for c in doc["chains"]] == ["R1F1"]
    assert main(["elimination", "--only", "nope"]) == 2
    capsys.readouterr()


# --- verify-all and determinism ------------------------------------------------------------


def test_verify_all_subset(capsys):
    code, doc = run_json(capsys, "verify-all", "--criteria", "4,6", "--sweep", "5")
    assert code == 0 and doc["ok"]
    assert [c["criterion"] for c in doc["criteria"]] == [4, 6]
    assert all("seconds" not in c for c in doc["criteria"])


def test_verify_all_bad_arguments(capsys):
    assert main(["verify-all", "--criteria", "12"]) == 2
    assert main(["verify-all", "--criteria", "a"]) == 2
    assert main(["verify-all", "--sweep", "0"]) == 2
    capsys.readouterr()


def test_output_is_deterministic(capsys, tmp_path):
    a = run(capsys, "verify-all", "--criteria", "1,2", "--sweep", "5", "--seed", "3")[1]
    b = run(capsys, "verify-all", "--criteria", "1,2", "--sweep", "5", "--seed", "3")[1]
    assert a == b
    out = tmp_path / "r.json"
    assert main(["census", "--out", str(out)]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(out.read_text())["ok"]


def test_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("PSL2Z_SEED", "3")
    _, env = run_json(capsys, "verify-all", "--criteria", "1", "--sweep", "3")
    monkeypatch.delenv("PSL2Z_SEED")
    _, flag = run_json(capsys, "verify-all", "--criteria", "1", "--sweep", "3", "--seed", "3")
    assert env == flag and env["seed"] == 3


def test_timings_flag(capsys):
    _, doc = run_json(capsys, "verify-all", "--criteria", "4", "--sweep", "3", "--timings")
    assert "seconds" in doc["criteria"][0]


def test_unknown_command_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
    capsys.readouterr()
