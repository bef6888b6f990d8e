import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from genpos.cli import RunConfig, InputError, parse_and_dispatch
from genpos.report import emit_report, format_real

CANTOR = {"dim": 1, "maps": [{"matrix": [[1 / 3]], "offset": [0.0]}, {"matrix": [[1 / 3]], "offset": [2 / 3]}],
          "hull": {"lo": [0.0], "hi": [1.0]}}


def run(argv, capsys):
    code = parse_and_dispatch(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def cantor_file(tmp_path):
    p = tmp_path / "cantor.json"
    p.write_text(json.dumps(CANTOR))
    return str(p)


def test_moran(capsys):
    code, out, _ = run(["moran", "--ratios", "0.5,0.5"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["s"] == 1.0 and abs(data["residual"]) <= 1e-12


def test_moran_terms(capsys):
    code, out, _ = run(["moran", "--terms", "1:0.1,1:0.1,-1:0.01,1:0.1111111111111111", "--bracket", "0.3,0.6"], capsys)
    assert code == 0
    assert json.loads(out)["s"] == pytest.approx(0.4267875692166912, abs=1e-12)


def test_case_out_of_range(capsys):
    code, _, err = run(["case", "exact-overlap", "--t", "0.2", "--b", "0.1"], capsys)
    assert code == 2
    assert err.count("\n") == 1 and "t must lie" in err


def test_case_json_and_csv(capsys):
    code, out, _ = run(["case", "exact-overlap", "--t", "0.05", "--b", "0.1"], capsys)
    assert code == 0 and json.loads(out)["verified"] is True
    code, out, _ = run(["case", "one-point", "--p", "0.02", "--q", "0.0137", "--r", "0.025", "--max-mn", "1",
                        "--format", "csv"], capsys)
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["m", "n", "j", "i", "status", "gap_or_overlap", "depth"]


def test_certify_not_holding_still_emits(tmp_path, capsys):
    fam = tmp_path / "fam.json"
    fam.write_text(json.dumps({"kind": "exact-overlap", "b": 0.1}))
    code, out, err = run(["certify", "--family", str(fam), "--j", "1", "--k", "2", "--cj", "1", "--Ck", "1"], capsys)
    assert code == 1
    assert json.loads(out)["holds"] is False
    assert "not certified" in err


def test_certify_corollary(capsys):
    code, out, _ = run(["certify", "--corollary", "ssc", "--ratios", "0.1,0.1,0.1", "--n", "1"], capsys)
    assert code == 0 and json.loads(out)["holds"] is True


def test_certify_with_spot_check(tmp_path, capsys):
    fam = tmp_path / "fam.json"
    fam.write_text(json.dumps({"kind": "one-point", "p": 0.02, "r": 0.02}))
    argv = ["certify", "--family", str(fam), "--j", "3,1,2", "--k", "4,6,5", "--samples", "50", "--seed", "3"]
    code, out, _ = run(argv, capsys)
    data = json.loads(out)
    assert data["displacement_check"]["passed"] and data["displacement_check"]["seed"] == 3
    assert code == (0 if data["holds"] else 1)


def test_separate(cantor_file, capsys):
    code, out, _ = run(["separate", "--system", cantor_file, "--j", "1", "--k", "2"], capsys)
    assert code == 0 and json.loads(out)["status"] == "Disjoint"
    code, out, _ = run(["separate", "--system", cantor_file, "--ssc"], capsys)
    assert code == 0 and json.loads(out)["holds"] is True


def test_separate_bad_inputs(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(["separate", "--system", str(bad), "--ssc"], capsys)
    assert code == 2 and "system" in err and err.count("\n") == 1
    code, _, err = run(["separate", "--system", str(tmp_path / "missing.json"), "--ssc"], capsys)
    assert code == 2
    code, _, err = run(["separate", "--system", str(bad), "--ssc", "--tol", "-1"], capsys)
    assert code == 2 and "tol" in err
    code, _, err = run(["frobnicate"], capsys)
    assert code == 2


def test_comparable_words_exit_2(cantor_file, capsys):
    code, _, err = run(["separate", "--system", cantor_file, "--j", "1", "--k", "1,2"], capsys)
    assert code == 2 and "comparable" in err


def test_sweep_rows_and_determinism(tmp_path, capsys):
    fam = tmp_path / "fam.json"
    fam.write_text(json.dumps({"kind": "exact-overlap", "b": 0.05}))
    outs = []
    for i in range(2):
        out = tmp_path / f"sweep{i}.csv"
        summary = tmp_path / f"summary{i}.json"
        code, _, _ = run(["sweep", "--family", str(fam), "--j", "1,3", "--k", "2,3", "--cells", "37",
                          "--out", str(out), "--summary", str(summary)], capsys)
        assert code == 1
        outs.append((out.read_bytes(), summary.read_bytes()))
    assert outs[0] == outs[1]
    rows = list(csv.reader(io.StringIO(outs[0][0].decode())))
    assert rows[0] == ["cell_lo", "cell_hi", "status", "gap_or_overlap", "depth"]
    assert len(rows) - 1 == 37
    assert json.loads(outs[0][1])["grid"]["cells_per_axis"] == 37


def test_unwritable_out(capsys):
    code, _, err = run(["moran", "--ratios", "0.5,0.5", "--out", "/nonexistent/dir/x.json"], capsys)
    assert code == 2 and "out" in err


def test_csv_only_for_tables(capsys):
    code, _, _ = run(["moran", "--ratios", "0.5,0.5", "--format", "csv"], capsys)
    assert code == 2


def test_wsp_witness(capsys):
    code, out, _ = run(["wsp-witness", "--kind", "exact-overlap", "--t", "0.05", "--b", "0.1", "--tol", "0.01"], capsys)
    assert code == 0
    ws = json.loads(out)["witnesses"]
    assert [w["m"] for w in ws][:3] == [1, 3, 7]
    code, _, _ = run(["wsp-witness", "--kind", "exact-overlap", "--t", "0.01", "--b", "0.1"], capsys)
    assert code == 2


def test_run_config_validation():
    with pytest.raises(InputError):
        RunConfig(command="moran", options={"cells": 0})
    with pytest.raises(InputError):
        RunConfig(command="plot")
    assert RunConfig(command="sweep").seed == 0


def test_canonical_json():
    text = emit_report({"b": 1.0, "a": [0.1, 2, True, None], "c": np.float64(1 / 3)})
    assert text == '{"a": [0.10000000000000001, 2, true, null], "b": 1.0, "c": 0.33333333333333331}\n'
    assert json.loads(text)["c"] == 1 / 3


def test_format_real_round_trips():
    rng = np.random.default_rng(5)
    for x in np.concatenate([rng.normal(size=100) * 10.0 ** rng.integers(-300, 300, 100), [0.0, -0.0, 1e-320]]):
        assert float(format_real(float(x))) == x


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "genpos", "moran", "--ratios", "0.25,0.25,0.25,0.25"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["s"] == pytest.approx(1.0, abs=1e-12)
