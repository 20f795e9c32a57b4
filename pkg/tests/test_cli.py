import csv
import io

import pytest
import yaml

from farpoint.cli import CONFIG_ENV, load_config, main

SQUARE = """dimension: 2
A: [[1, 0], [0, 1], [-1, 0], [0, -1]]
b: [-1, -1, 0, 0]
C: [0.5, 0.5]
R_circ: 0.7071067811865476
C0: [0.3, 0.4]
rho: 2.0
"""


@pytest.fixture
def square(tmp_path):
    p = tmp_path / "square.yaml"
    p.write_text(SQUARE)
    return p


@pytest.fixture(autouse=True)
def _no_user_config(monkeypatch, tmp_path):
    monkeypatch.setenv("HOME", str(tmp_path / "home"))
    monkeypatch.delenv(CONFIG_ENV, raising=False)


def test_solve_report(square, capsys):
    assert main(["solve", str(square), "--oracle", "--residual"]) == 0
    doc = yaml.safe_load(capsys.readouterr().out)
    assert doc["on_sphere"] is True
    assert abs(doc["upper_bound"] - 0.85 ** 0.5) <= 1e-6
    assert abs(doc["lower_bound"] - 0.85 ** 0.5) <= 1e-6
    assert doc["oracle"]["vertex"] == [1.0, 1.0]
    assert set(doc["timings"]) >= {"chain", "upper_bound", "lower_bound"}


def test_solve_writes_file(square, tmp_path):
    out = tmp_path / "report.yaml"
    assert main(["solve", str(square), "-o", str(out), "--method", "bisect",
                 "--bracket", "0.2,1.0", "--tol", "1e-9"]) == 0
    assert yaml.safe_load(out.read_text())["method"] == "bisect"


def test_missing_field_exits_1(tmp_path, caplog):
    p = tmp_path / "bad.yaml"
    p.write_text(SQUARE.replace("b: [-1, -1, 0, 0]\n", ""))
    assert main(["solve", str(p)]) == 1
    assert "'b'" in caplog.text


def test_budget_exhausted_exits_2(square, capsys):
    assert main(["solve", str(square), "--max-generations", "1"]) == 2
    assert yaml.safe_load(capsys.readouterr().out)["exit_generation"] is None


def test_frame_error_exits_1(tmp_path):
    p = tmp_path / "small.yaml"
    p.write_text(SQUARE.replace("R_circ: 0.7071067811865476", "R_circ: 0.5"))
    assert main(["solve", str(p)]) == 1


def test_bad_bracket_exits_2(square):
    assert main(["solve", str(square), "--bracket", "2,1"]) == 2


def test_config_env(square, tmp_path, monkeypatch, capsys):
    cfg = tmp_path / "cfg.yaml"
    cfg.write_text("tol_obj: 1.0e-8\n")
    monkeypatch.setenv(CONFIG_ENV, str(cfg))
    assert load_config().tol_obj == 1e-8
    assert main(["solve", str(square)]) == 0
    cfg.write_text("no_such_option: 1\n")
    assert main(["solve", str(square)]) == 1
    monkeypatch.setenv(CONFIG_ENV, str(tmp_path / "missing.yaml"))
    assert main(["solve", str(square)]) == 1


def test_hypercube_batch_stdout(capsys):
    assert main(["hypercube-batch", "--n", "2", "--seed", "4"]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert len(rows) == 1 and rows[0]["status"] == "ok"
    r = rows[0]
    assert abs(float(r["upper"]) - float(r["oracle"])) <= 1e-6
    assert abs(float(r["lower"]) - float(r["oracle"])) <= 1e-6


def test_hypercube_batch_empty(capsys):
    assert main(["hypercube-batch", "--n", ""]) == 0
    assert capsys.readouterr().out.count("\n") == 1


def test_hypercube_batch_files(tmp_path):
    out = tmp_path / "runs"
    assert main(["hypercube-batch", "--n", "2,3", "--seeds", "0,1", "--emit-csv",
                 str(out)]) == 0
    assert (out / "summary.csv").exists() and len(list(out.glob("run_*.csv"))) == 4


def test_ssp_command(capsys):
    assert main(["ssp", "--S", "2,4", "--T", "3", "--beta", "1", "--oracle",
                 "--max-generations", "100"]) == 0
    doc = yaml.safe_load(capsys.readouterr().out)
    assert doc["verdict"] == "certified_no" and doc["oracle_solvable"] is False


def test_plot2d_command(square, tmp_path):
    svg, table = tmp_path / "f.svg", tmp_path / "f.csv"
    assert main(["plot2d", str(square), "--emit-svg", str(svg), "--emit-csv", str(table),
                 "--generations", "0"]) == 0
    assert svg.read_text().startswith("<svg")
    first = table.read_bytes()
    assert main(["plot2d", str(square), "--emit-csv", str(table), "--generations", "0"]) == 0
    assert table.read_bytes() == first


def test_plot2d_rejects_3d(tmp_path):
    p = tmp_path / "cube.yaml"
    p.write_text("""dimension: 3
A: [[1, 0, 0], [0, 1, 0], [0, 0, 1], [-1, 0, 0], [0, -1, 0], [0, 0, -1]]
b: [-1, -1, -1, 0, 0, 0]
C: [0.5, 0.5, 0.5]
R_circ: 0.8660254037844386
C0: [0.3, 0.4, 0.9]
""")
    assert main(["plot2d", str(p), "--emit-svg", str(tmp_path / "x.svg")]) == 1
    assert main(["solve", str(p)]) == 0


def test_plot2d_needs_an_output(square):
    assert main(["plot2d", str(square)]) == 1
