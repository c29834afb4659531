"""CLI surface: table formats, determinism, exit codes, figures, compare."""

import json
import math
import os

import numpy as np
import pytest

from schwinger_kit.cli import main, parse_grid


def _lines(path):
    return path.read_text().strip().splitlines()


# ---------------------------------------------------------------------------
# grids and config
# ---------------------------------------------------------------------------

def test_parse_grid_forms():
    g = parse_grid("1..10:4")
    assert np.allclose(g, [1.0, 4.0, 7.0, 10.0])
    g = parse_grid("1..100:3:log")
    assert np.allclose(g, [1.0, 10.0, 100.0])
    g = parse_grid("0.5,1.5,2")
    assert np.allclose(g, [0.5, 1.5, 2.0])


def test_w0_csv_deterministic(tmp_path):
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["w0", "--kind", "sg", "--N", "2", "--eps", "5e-3",
            "--gamma", "1.2..4:20"]
    assert main(argv + ["-o", str(out1)]) == 0
    assert main(argv + ["-o", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    header = _lines(out1)[0].split(",")
    assert header == ["gamma", "w0", "branch", "x4_frac"]


def test_w0_multi_series_with_references(tmp_path):
    out = tmp_path / "w0.csv"
    rc = main(["w0", "--kind", "sg", "--N", "2,5", "--eps", "5e-3",
               "--gamma", "2..6:5", "--with-references", "-o", str(out)])
    assert rc == 0
    header = _lines(out)[0].split(",")
    assert header == ["gamma", "w0_sg_N2", "w0_sg_N5", "w0_sauter", "w0_lorentzian"]


def test_profiles_origin_row(tmp_path):
    out = tmp_path / "prof.csv"
    rc = main(["profiles", "--kind", "sg", "--N", "1", "--t", "-2..2:101",
               "-o", str(out)])
    assert rc == 0
    rows = [line.split(",") for line in _lines(out)[1:]]
    mid = rows[50]
    assert float(mid[0]) == pytest.approx(0.0, abs=1e-12)
    assert float(mid[1]) == pytest.approx(1.0, rel=1e-12)
    # an even grid has no exact t=0 node; the peak row still carries g = 1
    out2 = tmp_path / "prof100.csv"
    assert main(["profiles", "--kind", "sg", "--N", "1", "--t", "-2..2:100",
                 "-o", str(out2)]) == 0
    peak = max(float(line.split(",")[1]) for line in _lines(out2)[1:])
    assert peak == pytest.approx(1.0, abs=1e-9)


def test_integral_check_json(tmp_path):
    out = tmp_path / "ic.json"
    rc = main(["integral-check", "--kind", "sauter", "--format", "json",
               "-o", str(out)])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["meta"]["version"]
    assert doc["data"][0]["value"] == pytest.approx(math.sqrt(0.5 * math.pi), abs=1e-6)


def test_exit_code_2_on_config_errors(tmp_path, capsys):
    assert main(["w0", "--kind", "sg", "--N", "2", "--eps", "1e-3",
                 "--gamma", "1..2:5", "--omega", "0.1..0.2:5"]) == 2
    assert main(["w0", "--kind", "nosuch", "--eps", "1e-3", "--gamma", "1..2:5"]) == 2
    assert main(["w0", "--kind", "sg", "--N", "2", "--eps", "1e-3",
                 "--gamma", "1..2:1"]) == 2
    err = capsys.readouterr().err
    assert "config error" in err


def test_exit_code_3_on_numerical_failure(capsys):
    rc = main(["w0", "--kind", "gaussian", "--eps", "1e-3", "--gamma", "1.2..2:3"])
    assert rc == 3
    err = capsys.readouterr().err
    assert "numerical failure in 'w0'" in err
    assert "Gaussian" in err or "closed form" in err


def test_compare_run_against_itself(tmp_path, capsys):
    out = tmp_path / "ref.csv"
    main(["w0", "--kind", "lorentzian", "--eps", "5e-3", "--gamma", "1.2..6:30",
          "-o", str(out)])
    rep = tmp_path / "rep.json"
    assert main(["compare", str(out), str(out), "-o", str(rep)]) == 0
    doc = json.loads(rep.read_text())
    assert doc["max_rel_dev"] == 0.0
    assert doc["mean_rel_dev"] == 0.0


def test_compare_sg3000_vs_lorentzian(tmp_path):
    a, b = tmp_path / "sg.csv", tmp_path / "lor.csv"
    main(["w0", "--kind", "sg", "--N", "3000", "--eps", "5e-3",
          "--gamma", "1.2..10:50", "-o", str(a)])
    main(["w0", "--kind", "lorentzian", "--eps", "5e-3",
          "--gamma", "1.2..10:50", "-o", str(b)])
    rep = tmp_path / "rep.json"
    assert main(["compare", str(a), str(b), "--column", "w0", "-o", str(rep)]) == 0
    doc = json.loads(rep.read_text())
    assert doc["max_rel_dev"] < 0.01


def test_compare_signed_report_sg2_below_sauter(tmp_path):
    a, b = tmp_path / "sg2.csv", tmp_path / "sau.csv"
    main(["w0", "--kind", "sg", "--N", "2", "--eps", "5e-3",
          "--gamma", "1.7..8:25", "-o", str(a)])
    main(["w0", "--kind", "sauter", "--eps", "5e-3",
          "--gamma", "1.7..8:25", "-o", str(b)])
    rep = tmp_path / "rep.json"
    assert main(["compare", str(a), str(b), "--column", "w0", "-o", str(rep)]) == 0
    doc = json.loads(rep.read_text())
    assert doc["max_signed_rel_dev"] < 0.0  # strictly below the reference
    assert doc["min_signed_rel_dev"] < 0.0


def test_compare_grid_mismatch(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["w0", "--kind", "lorentzian", "--eps", "5e-3", "--gamma", "1.2..6:10", "-o", str(a)])
    main(["w0", "--kind", "lorentzian", "--eps", "5e-3", "--gamma", "1.2..6:11", "-o", str(b)])
    assert main(["compare", str(a), str(b)]) == 2


def test_svg_output_and_figure(tmp_path):
    svg = tmp_path / "fig.svg"
    rc = main(["transform", "--kind", "sauter,lorentzian", "--x", "0..10:60",
               "--format", "svg", "-o", str(svg)])
    assert rc == 0
    body = svg.read_text()
    assert "<svg" in body and "polyline" in body or "path" in body
    png = tmp_path / "fig.png"
    out = tmp_path / "t.csv"
    rc = main(["transform", "--kind", "sauter", "--x", "0..10:60",
               "-o", str(out), "--figure", str(png)])
    assert rc == 0
    assert out.exists() and png.stat().st_size > 0


def test_svg_deterministic_no_date(tmp_path):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    argv = ["transform", "--kind", "sauter", "--x", "0..5:30", "--format", "svg"]
    assert main(argv + ["-o", str(a)]) == 0
    assert main(argv + ["-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_config_file_defaults_and_flag_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("kind=sg:2\neps=5e-3\ngamma=1.2..4:7\n")
    out1 = tmp_path / "one.csv"
    assert main(["w0", "--config", str(cfg), "-o", str(out1)]) == 0
    assert len(_lines(out1)) == 1 + 7
    out2 = tmp_path / "two.csv"
    assert main(["w0", "--config", str(cfg), "--gamma", "1.2..4:4",
                 "-o", str(out2)]) == 0
    assert len(_lines(out2)) == 1 + 4  # explicit flag wins


def test_xi_table(tmp_path):
    out = tmp_path / "xi.csv"
    rc = main(["xi", "--N", "1,2,5", "--eps", "5e-3,1e-3", "-o", str(out)])
    assert rc == 0
    lines = _lines(out)
    assert lines[0] == "N,xi_eps0.005,xi_eps0.001"
    vals = [float(line.split(",")[1]) for line in lines[1:]]
    assert vals[0] > vals[1] > vals[2]


def test_saddle_table_columns(tmp_path):
    out = tmp_path / "saddle.csv"
    rc = main(["saddle", "--E", "1e-4", "--gamma", "1.1..3:5", "-o", str(out)])
    assert rc == 0
    header = _lines(out)[0].split(",")
    assert header[0] == "gamma"
    assert any(c.startswith("residual_E") for c in header)
    assert any(c.startswith("valid_E") for c in header)


def test_orders_table(tmp_path):
    out = tmp_path / "orders.csv"
    rc = main(["orders", "--kind", "lorentzian", "--n-photons", "1,2,3",
               "--E", "1e-4", "--gamma", "1.5..4:6", "-o", str(out)])
    assert rc == 0
    rows = [line.split(",") for line in _lines(out)[1:]]
    for row in rows:
        assert float(row[1]) == pytest.approx(float(row[2]), rel=1e-12)
        assert float(row[1]) == pytest.approx(float(row[3]), rel=1e-12)


def test_instanton_table_and_summary(tmp_path, capsys):
    out = tmp_path / "loop.csv"
    fig = tmp_path / "loop.svg"
    rc = main(["instanton", "--N", "1", "--eps", "1e-3", "--gamma", "1.5",
               "--samples", "64", "-o", str(out), "--figure", str(fig)])
    assert rc == 0
    err = capsys.readouterr().err
    assert "action=" in err
    lines = _lines(out)
    assert lines[0] == "u,x3,x4,v3,v4"
    assert len(lines) == 1 + 64
    assert "<svg" in fig.read_text()


README_FIGURE_RECIPES = [
    # keep in sync with the "Figure recipes" section of README.md
    "profiles --kind sg:1,sg:5,sg:20,sauter,modified-sauter,lorentzian "
    "--modified-sauter-shift pi/2 --t -2.5..2.5:400",
    "xi --N 1,2,3,5,8,12,20,35,60,100,200 --eps 5e-3,1e-3,5e-4,1e-4",
    "w0 --kind sg --N 2,5,20,100,3000 --eps 5e-3 --gamma 1.2..10:200 --with-references",
    "saddle --E 1e-2,1e-4,1e-6 --gamma 1.05..5:120",
    "transform --kind sg:1,rect,sauter,modified-sauter,lorentzian,gaussian --x 0..8:300",
]


@pytest.mark.parametrize("recipe", README_FIGURE_RECIPES, ids=lambda r: r.split()[0])
def test_readme_figure_recipes_emit_tables(tmp_path, recipe):
    out = tmp_path / "table.csv"
    fig = tmp_path / "figure.svg"
    argv = recipe.split() + ["-o", str(out), "--figure", str(fig)]
    assert main(argv) == 0
    lines = _lines(out)
    assert len(lines) > 2  # nonempty table
    assert fig.stat().st_size > 0


def test_thread_env_does_not_change_bytes(tmp_path, monkeypatch):
    argv = ["w0", "--kind", "sg", "--N", "3", "--eps", "1e-3", "--gamma", "1.5..5:40"]
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    monkeypatch.setenv("SCHWINGER_KIT_THREADS", "1")
    assert main(argv + ["-o", str(out1)]) == 0
    monkeypatch.setenv("SCHWINGER_KIT_THREADS", "4")
    assert main(argv + ["-o", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
