import json
import subprocess
import sys

import pytest

from selmer_orbits.cli import main
from selmer_orbits.errors import ValidationError
from selmer_orbits.harness import ExperimentConfig, StatReport, run


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_ffcount(capsys):
    code, out, _ = run_cli(["ffcount", "--n", "1", "--p", "5", "--poly", "0,1"], capsys)
    assert code == 0
    rep = json.loads(out)
    row = rep["rows"][0]
    assert rep["ok"] and row["total"] == 120 and row["num_orbits"] == 2


def test_padic_shape(capsys):
    code, out, _ = run_cli(["padic", "shape", "--p", "7", "--poly", "0,1"], capsys)
    assert code == 0
    assert json.loads(out)["rows"][0]["degrees"] == [1, 1, 1]


def test_padic_chabauty(capsys):
    code, out, _ = run_cli(["padic", "chabauty", "--curve", "2,2"], capsys)
    assert code == 0
    assert json.loads(out)["rows"][0]["bound"] == 1


def test_descent_orbit(capsys):
    code, out, _ = run_cli(["descent", "orbit", "--curve", "0,1", "--points", "(2,3)",
                            "--p", "5", "--prec", "6"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["checks"] == {"certificate": True, "invariants_mod_pk": True}


@pytest.mark.parametrize("args,code", [
    (["ffcount", "--n", "1", "--p", "4", "--poly", "0,1"], 2),        # not prime
    (["ffcount", "--n", "0", "--p", "5"], 2),                         # nonpositive n
    (["descent", "orbit", "--curve", "0,1", "--points", "(2,4)", "--p", "5"], 2),  # off curve
    (["enumerate", "--X", "-3"], 2),
    (["nonsense"], 2),
    (["ffcount", "--n", "3", "--p", "5"], 3),                         # box too large
    (["descent", "orbit", "--curve", "0,1", "--points", "(-1,0)", "--p", "5"], 4),  # Weierstrass
    (["descent", "orbit", "--curve", "0,1", "--points", "(2,3)", "--p", "2"], 4),
])
def test_exit_codes(args, code, capsys):
    assert run_cli(args, capsys)[0] == code


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "selmer_orbits", "lemmacheck", "--n", "2"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["ok"]


def test_config_strict():
    with pytest.raises(ValidationError):
        ExperimentConfig.from_dict({"subcommand": "enumerate", "X": 10, "colour": "red"})
    with pytest.raises(ValidationError):
        ExperimentConfig.from_dict({"X": 10})
    with pytest.raises(ValidationError):
        ExperimentConfig(subcommand="enumerate", workers=0)
    with pytest.raises(ValidationError):
        ExperimentConfig(subcommand="enumerate", format="xml")


def test_report_renders_fractions():
    rep = StatReport("x", {})
    rep.ratio("r", 2, 6)
    d = rep.to_dict()
    assert d["ratios"]["r"] == {"num": "1", "den": "3", "decimal": "0.333333"}
    assert "section,key,value" in rep.to_csv()


def test_deterministic_across_workers(tmp_path):
    outs = []
    for w in (1, 2):
        cfg = ExperimentConfig(subcommand="localmass", n=1, X=40, workers=w)
        outs.append(run(cfg).to_json())
    assert outs[0] == outs[1]
    cfg = ExperimentConfig(subcommand="enumerate", n=1, X=200, workers=2)
    a = run(cfg).to_json()
    cfg = ExperimentConfig(subcommand="enumerate", n=1, X=200, workers=1)
    assert a == run(cfg).to_json()


def test_enumerate_cache(tmp_path, capsys):
    args = ["enumerate", "--X", "100", "--cache-dir", str(tmp_path)]
    code, first, _ = run_cli(args, capsys)
    assert code == 0
    cache = tmp_path / "curves_n1_X100.jsonl"
    assert cache.exists()
    code, second, _ = run_cli(args, capsys)
    assert first == second
    # a corrupted record is detected through its stored discriminant
    lines = cache.read_text().splitlines()
    rec = json.loads(lines[0])
    rec["disc"] = "1"
    lines[0] = json.dumps(rec)
    cache.write_text("\n".join(lines) + "\n")
    assert run_cli(args, capsys)[0] == 2


def test_enumerate_report(capsys):
    code, out, _ = run_cli(["enumerate", "--X", "100"], capsys)
    rep = json.loads(out)
    assert code == 0
    assert rep["counts"]["curves"] == sum(rep["counts"]["m_histogram"].values())


def test_descent_batch_from_file(tmp_path, capsys):
    data = {"curves": [
        {"c": [0, 1], "points": [[2, 3]]},
        {"c": [0, 1], "points": "(0,1)"},
        {"c": [0, 1], "points": [[-1, 0]]},
        {"c": [0, 0, -1, 1], "points": [[0, 1], [1, -1]]},
    ]}
    path = tmp_path / "pts.json"
    path.write_text(json.dumps(data))
    code, out, _ = run_cli(["descent", "--input", str(path), "--p", "3,5"], capsys)
    rep = json.loads(out)
    assert code == 0
    assert [r["status"] for r in rep["rows"]] == ["ok", "ok", "unsupported", "ok"]
    assert rep["counts"]["failure_taxonomy"] == {"weierstrass": 1}
    assert rep["ok"]


def test_descent_point_search(capsys):
    code, out, _ = run_cli(["descent", "--curve", "0,1", "--search-bound", "10", "--p", "5"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["rows"][0]["status"] == "ok"


def test_csv_output(tmp_path, capsys):
    out_path = tmp_path / "r.csv"
    code, out, _ = run_cli(["chabauty", "--X", "60", "--format", "csv", "--out", str(out_path)], capsys)
    assert code == 0
    assert out_path.read_text() == out
    assert out.splitlines()[0].startswith("a")  # header row of per-curve records


def test_orbit_kinds(capsys):
    for args in (["orbit", "--poly", "0,1"], ["orbit", "--poly", "1,1", "--p", "7"],
                 ["orbit", "--kind", "regular", "--n", "3"], ["orbit", "--kind", "subregular", "--n", "2", "--d", "5"]):
        code, out, _ = run_cli(args, capsys)
        assert code == 0 and json.loads(out)["ok"], args


def test_ffcensus(capsys):
    code, out, _ = run_cli(["ffcensus", "--p", "3,5"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["ok"]
    assert rep["per_prime"]["5"]["regular_vectors"] == 3000
