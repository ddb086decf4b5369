import json
import math

import numpy as np
import pytest
from click.testing import CliRunner

from sectorwalk.cli import entry_point, main


@pytest.fixture
def runner():
    return CliRunner()


def _data_lines(text):
    return [line for line in text.splitlines() if not line.startswith("#")]


def test_exact2_csv(runner):
    result = runner.invoke(main, ["exact2", "--a", "0.5", "--points", "10"])
    assert result.exit_code == 0
    lines = _data_lines(result.output)
    assert lines[0] == "r,pdf_radius,cdf_radius,theta,pdf_angle,cdf_angle"
    assert len(lines) == 11
    first = [float(v) for v in lines[1].split(",")]
    assert first[0] == pytest.approx(2.0 * math.cos(0.5), abs=1e-12)
    assert first[2] == pytest.approx(0.0, abs=1e-12)
    header = [line for line in result.output.splitlines() if line.startswith("#")]
    assert "# command=exact2" in header
    assert any(line.startswith("# version=") for line in header)


def test_support_header(runner):
    result = runner.invoke(main, ["support", "--n", "4", "--a", "1.4", "--points", "32"])
    assert result.exit_code == 0
    header = {
        line[2:].split("=", 1)[0]: line[2:].split("=", 1)[1]
        for line in result.output.splitlines()
        if line.startswith("#") and "=" in line
    }
    assert float(header["r_min"]) == pytest.approx(0.680, abs=1e-3)
    assert header["unique"] == "false"
    assert float(header["uniqueness_threshold"]) == pytest.approx(0.9553, abs=1e-3)
    lines = _data_lines(result.output)
    assert lines[0] == "t,radius_inner,angle_inner,radius_outer,angle_outer"


def test_recurse_writes_three_tables(runner, tmp_path):
    out = tmp_path / "grid.csv"
    result = runner.invoke(
        main,
        ["recurse", "--n", "3", "--a", "0.5", "--grid-r", "120", "--grid-theta", "120",
         "--phi-nodes", "16", "-o", str(out)],
    )
    assert result.exit_code == 0
    assert out.exists()
    assert (tmp_path / "grid_marginal_radius.csv").exists()
    assert (tmp_path / "grid_marginal_angle.csv").exists()
    text = out.read_text()
    assert "r,theta,pdf" in text
    assert any(line.startswith("# raw_mass=") for line in text.splitlines())


def test_approx_tables(runner, tmp_path):
    out = tmp_path / "approx.csv"
    result = runner.invoke(
        main, ["approx", "--n", "30", "--a", "0.5", "--points", "50", "-o", str(out)]
    )
    assert result.exit_code == 0
    assert out.exists()
    assert (tmp_path / "approx_joint.csv").exists()
    body = _data_lines(out.read_text())
    assert body[0] == "r,pdf_radius,cdf_radius,theta,pdf_angle,cdf_angle"
    assert len(body) == 51


def test_genchi2_json(runner):
    result = runner.invoke(
        main,
        ["genchi2", "--weights", "1,1", "--dofs", "1,1", "--noncentralities", "0,0",
         "--x", "1.0,2.0", "--format", "json"],
    )
    assert result.exit_code == 0
    doc = json.loads(result.output)
    assert doc["command"] == "genchi2"
    expect = [1.0 - math.exp(-0.5), 1.0 - math.exp(-1.0)]
    assert np.allclose(doc["cdf"], expect, atol=1e-8)
    assert len(doc["pdf"]) == 2


def test_genchi2_bad_list(runner):
    result = runner.invoke(main, ["genchi2", "--weights", "1,zzz", "--dofs", "1,1",
                                  "--noncentralities", "0,0", "--x", "1.0"])
    assert result.exit_code == 2


def test_sample_deterministic(runner):
    args = ["sample", "--n", "2", "--a", "0.5", "--count", "1000", "--seed", "3"]
    first = runner.invoke(main, args)
    second = runner.invoke(main, args)
    assert first.exit_code == 0
    assert first.output == second.output
    lines = _data_lines(first.output)
    assert lines[0] == "radius,angle"
    assert len(lines) == 1001


def test_sample_histogram(runner):
    result = runner.invoke(
        main, ["sample", "--n", "2", "--a", "0.5", "--count", "1000", "--bins", "10"]
    )
    assert result.exit_code == 0
    lines = _data_lines(result.output)
    assert lines[0].startswith("radius_bin,radius_density,radius_count")
    assert len(lines) == 11


def test_compare_byte_identical(runner):
    args = ["compare", "--regime", "exact2", "--n", "2", "--a", "0.5",
            "--count", "20000", "--seed", "1"]
    first = runner.invoke(main, args)
    second = runner.invoke(main, args)
    assert first.exit_code == 0
    assert first.output == second.output
    doc = json.loads(first.output)
    assert doc["ks_radius"] < 0.02 and doc["ks_angle"] < 0.02


def test_compare_csv_overlay(runner):
    result = runner.invoke(
        main,
        ["compare", "--regime", "exact2", "--n", "2", "--a", "0.5", "--count", "20000",
         "--seed", "1", "--bins", "20", "--format", "csv"],
    )
    assert result.exit_code == 0
    lines = _data_lines(result.output)
    assert lines[0].startswith("radius_bin,radius_mc_density,radius_model_density")
    assert len(lines) == 21


def test_config_file_defaults(runner, tmp_path):
    cfg = tmp_path / "conf.json"
    cfg.write_text(json.dumps({"exact2": {"points": 7}}))
    result = runner.invoke(main, ["--config", str(cfg), "exact2", "--a", "0.5"])
    assert result.exit_code == 0
    assert len(_data_lines(result.output)) == 8


def test_usage_error_exit_code():
    assert entry_point(["exact2"]) == 2  # missing required --a
    assert entry_point(["no-such-command"]) == 2


def test_convergence_error_exit_code(capsys):
    # density request whose inversion has no attainable tail bound
    code = entry_point(
        ["genchi2", "--weights", "1,-1", "--dofs", "1,1", "--noncentralities", "0,0",
         "--gaussian-sd", "0", "--x", "1e18"]
    )
    err = capsys.readouterr().err
    assert code == 3
    assert "ConvergenceError" in err and "genchi2" in err
