import csv
import json

import pytest

from normality_lab import __version__
from normality_lab.cli import main


@pytest.fixture
def write_json(tmp_path):
    def _write(name, obj):
        path = tmp_path / name
        path.write_text(json.dumps(obj))
        return str(path)

    return _write


def test_exit_codes(tmp_path, write_json, capsys):
    assert main(["definitely-not-a-command"]) == 1
    bad = write_json("bad.json", {"kind": "mystery", "base": 2})
    assert main(["expand", "--spec", bad, "--n", "4"]) == 2
    assert main(["expand", "--spec", str(tmp_path / "missing.json"), "--n", "4"]) == 3
    capsys.readouterr()


def test_expand_csv(tmp_path, write_json):
    spec = write_json(
        "r.json", {"kind": "rational", "base": 2, "numerator": 1, "denominator": 3}
    )
    out = tmp_path / "digits.csv"
    assert main(["expand", "--spec", spec, "--n", "4", "--out", str(out)]) == 0
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["position", "digit"]
    assert [r[1] for r in rows[1:]] == ["0", "1", "0", "1"]


def test_freq_csv_example(tmp_path, write_json):
    spec = write_json("p.json", {"kind": "periodic", "base": 2, "word": "000011"})
    out = tmp_path / "freq.csv"
    code = main(
        ["freq", "--spec", spec, "--k", "2", "--horizons", "12",
         "--mode", "float", "--out", str(out)]
    )
    assert code == 0
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["n", "00", "01", "10", "11"]
    values = [float(v) for v in rows[1][1:]]
    assert values == pytest.approx([0.5, 1 / 6, 1 / 6, 1 / 6], abs=1e-9)

    # rational mode gives the exact oracle values
    assert main(["freq", "--spec", spec, "--k", "2", "--horizons", "12",
                 "--out", str(out)]) == 0
    rows = list(csv.reader(out.open()))
    assert rows[1] == ["12", "1/2", "1/6", "1/6", "1/6"]


def test_simplex_enumerate_deterministic(tmp_path):
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    for out in (out1, out2):
        assert main(["simplex", "enumerate", "--b", "2", "--k", "2",
                     "--max-den", "3", "--out", str(out)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    report = json.loads(out1.read_text())
    assert report["metadata"]["version"] == __version__
    assert report["metadata"]["mode"] == "rational"
    assert report["count"] == len(report["points"])


def test_synth_report(tmp_path, write_json):
    target = write_json(
        "t.json",
        {"base": 2, "k": 2, "entries": [[1, 2], [1, 6], [1, 6], [1, 6]]},
    )
    out = tmp_path / "synth.json"
    assert main(["synth", "--target", target, "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["connected_support"] is True
    assert sorted(report["word"]) == sorted("000011")
    assert report["stream"]["kind"] == "periodic"


def test_st_check_cesaro(tmp_path, write_json):
    matrix = write_json("m.json", {"kind": "cesaro"})
    out = tmp_path / "st.json"
    assert main(["st-check", "--matrix", matrix, "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["regular"] is True
    assert report["strong_norm"] == 1.0
    assert report["metadata"]["version"] == __version__


def test_core_remark(tmp_path, write_json):
    matrix = write_json("m.json", {"kind": "remark"})
    spec = write_json("p.json", {"kind": "periodic", "base": 2, "word": "01"})
    out = tmp_path / "core.json"
    code = main(["core", "--matrix", matrix, "--spec", spec, "--k", "1",
                 "--horizon", "5e3", "--out", str(out)])
    assert code == 0
    report = json.loads(out.read_text())
    assert report["horizon_limited"] is True
    assert report["rows_used"] >= 100


def test_gamma_report(tmp_path, write_json):
    spec = write_json("p.json", {"kind": "periodic", "base": 2, "word": "01"})
    out = tmp_path / "gamma.json"
    code = main(["gamma", "--spec", spec, "--k", "1", "--ideal", "counting",
                 "--horizon", "4e3", "--max-den", "4", "--out", str(out)])
    assert code == 0
    report = json.loads(out.read_text())
    assert len(report["retained"]) == 1
    assert report["retained"][0]["target"] == [[1, 2], [1, 2]]


def test_witness_report(tmp_path, write_json):
    plan = write_json(
        "w.json",
        {
            "targets": [
                {"base": 2, "k": 1, "entries": [[1, 1], [0, 1]]},
                {"base": 2, "k": 1, "entries": [[1, 2], [1, 2]]},
            ],
            "ratio": 9.0,
        },
    )
    out = tmp_path / "witness.json"
    code = main(["witness", "--plan", plan, "--horizon", "1e4",
                 "--eps", "0.15", "--out", str(out)])
    assert code == 0
    report = json.loads(out.read_text())
    assert all(t["empirical_upper_density"] >= 0.1 for t in report["targets"])


def test_demo_remark(tmp_path, capsys):
    out = tmp_path / "demo.json"
    assert main(["demo", "remark", "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["transformed_values"] == [3.0] * 5
    assert report["violation"] == pytest.approx(2.0, abs=1e-9)
    assert "core violation 2" in capsys.readouterr().out


def test_demo_example10(tmp_path, capsys):
    out = tmp_path / "demo.json"
    assert main(["demo", "example10", "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["retained"] == [["1/2", "1/2"]]
    capsys.readouterr()
