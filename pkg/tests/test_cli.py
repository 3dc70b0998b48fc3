import csv
import io
import json

import pytest

from isoquot import cli
from isoquot.gorenstein import SingularityRecord


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_validate_exit_codes(capsys):
    assert run(["validate", "--type", "I", "--m", "5", "--n", "4", "--r", "4"], capsys)[0] == 0
    code, out, err = run(["validate", "--type", "III", "--m", "1", "--n", "4", "--r", "1"], capsys)
    assert code == 1 and "n must be odd" in out + err
    code, out, _ = run(["validate", "--type", "I", "--m", "1", "--n", "1", "--r", "1"], capsys)
    assert code == 0 and "trivial group" in out


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "spec.cfg"
    cfg.write_text("type = I\nm = 5\nn = 4\nr = 4\n")
    assert run(["--config", str(cfg), "validate"], capsys)[0] == 0
    # flags override the file
    code, out, err = run(["--config", str(cfg), "validate", "--type", "III", "--m", "1"], capsys)
    assert code == 1
    js = tmp_path / "spec.json"
    js.write_text(json.dumps({"type": "I", "m": 1, "n": 7, "r": 1}))
    assert run(["--config", str(js), "validate"], capsys)[0] == 0


def test_build_rep_and_verify(capsys):
    code, out, _ = run(["build-rep", "--type", "I", "--m", "5", "--n", "4", "--r", "4",
                        "--family", "pi", "--rep-k", "1", "--rep-l", "1"], capsys)
    assert code == 0 and "B" in out
    code, out, _ = run(["verify", "--type", "III", "--m", "1", "--n", "3", "--r", "1"], capsys)
    assert code == 0
    code, _, err = run(["build-rep", "--type", "I", "--m", "5", "--n", "4", "--r", "4",
                        "--family", "pi", "--rep-k", "5", "--rep-l", "1"], capsys)
    assert code == 1


def test_sweep_small(tmp_path, capsys):
    out_file = tmp_path / "report.json"
    code, _, _ = run(["sweep", "--max-order", "24", "--out", str(out_file)], capsys)
    assert code == 0
    report = json.loads(out_file.read_text())
    assert report["counts"]
    assert run(["sweep", "--max-order", "1"], capsys)[0] == 0


def test_enumerate_json_roundtrip(capsys):
    code, out, _ = run(["enumerate", "--dim", "3", "--max-order", "30", "--gorenstein"], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    recs = [SingularityRecord.from_json(json.loads(x)) for x in lines]
    assert recs and all(r.spec.kind == "I" and r.spec.d == 1 for r in recs)
    assert [json.dumps(r.to_json(), sort_keys=True) for r in recs] == \
        [json.dumps(json.loads(x), sort_keys=True) for x in lines]


def test_enumerate_deterministic_and_csv(capsys):
    argv = ["enumerate", "--dim", "2", "--max-order", "48", "--gorenstein"]
    a = run(argv, capsys)[1]
    b = run(argv + ["--workers", "2"], capsys)[1]
    assert a == b
    code, out, _ = run(argv + ["--format", "csv"], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == len(a.strip().splitlines())
    assert {r["kind"] for r in rows} >= {"I", "III"}


def test_molien_command(capsys):
    code, out, _ = run(["molien", "--cyclic", "2", "--exponents", "1,1"], capsys)
    assert code == 0
    assert "(1+t^2)/(1-t^2)^2" in out and "symmetric: yes" in out
    code, out, _ = run(["molien", "--cyclic", "1", "--exponents", "0,0"], capsys)
    assert "1/(1-t)^2" in out and "smooth: yes" in out
    code, out, _ = run(["molien", "--cyclic", "5", "--exponents", "1,1"], capsys)
    assert "symmetric: no" in out


def test_bound_exit_code(capsys):
    code, _, err = run(["molien", "--type", "V", "--m", "1", "--n", "1", "--r", "1",
                        "--bound", "50"], capsys)
    assert code == 2 and "bound" in err
