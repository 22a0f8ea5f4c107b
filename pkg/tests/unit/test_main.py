"""
Unit tests for src.main module.
"""

import json
import math

import pytest

from src.main import (
    EXIT_FAILED, EXIT_OK, EXIT_USAGE, CommandReport, UsageError, load_json, main,
)
from src.verification import CheckResult


def run_cli(monkeypatch, capsys, *argv):
    """Run main() with the given arguments and return (exit code, stdout, stderr)."""
    monkeypatch.setattr("sys.argv", ["qwf", *argv])
    code = main()
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.mark.unit
def test_main_no_command(monkeypatch, capsys):
    """Test that running without a command prints the usage summary."""
    code, out, _ = run_cli(monkeypatch, capsys)
    assert code == EXIT_OK
    assert "Available commands" in out
    assert "selftest" in out


@pytest.mark.unit
def test_rotate_vector_quarter_turn(monkeypatch, capsys):
    """Test rotating î by π/2 about k̂."""
    code, out, _ = run_cli(monkeypatch, capsys, "rotate", '{"vector": [1, 0, 0]}',
                           json.dumps({"kappa": [0, 0, math.pi / 2]}))
    report = json.loads(out)
    assert code == EXIT_OK
    assert report["command"] == "rotate"
    assert report["outputs"]["vector"] == pytest.approx([0.0, 1.0, 0.0], abs=1e-12)
    assert report["passed"] is True
    assert "wall_time" not in report


@pytest.mark.unit
def test_rotate_spinor_reports_sign_flip(monkeypatch, capsys):
    """Test that the rotate command reports −1 after a full turn."""
    spinor = json.dumps({"spinor": {"xiL": [0.6, 0.2], "chiL": -0.3, "xiR": [0, 1], "chiR": 0.5}})
    code, out, _ = run_cli(monkeypatch, capsys, "rotate", spinor, '{"kappa": [0.3, -0.4, 1.2]}')
    report = json.loads(out)
    assert code == EXIT_OK
    assert report["outputs"]["sign_after_full_turn"] == -1
    assert {c["name"] for c in report["checks"]} == {"current_covariance", "spinor_sign_flip"}


@pytest.mark.unit
def test_rotate_rejects_rapidity(monkeypatch, capsys):
    """Test that rotate refuses a generator with a boost part."""
    code, out, err = run_cli(monkeypatch, capsys, "rotate", '{"vector": [1, 0, 0]}',
                             '{"kappa": [0, 0, 1], "lambda": [0.1, 0, 0]}')
    assert code == EXIT_USAGE
    assert out == ""
    assert "pure rotation" in err


@pytest.mark.unit
def test_boost_rest_vector(monkeypatch, capsys):
    """Test boosting the rest four-velocity along x."""
    code, out, _ = run_cli(monkeypatch, capsys, "boost", '{"fourvector": [1, 0, 0, 0]}',
                           '{"lambda": [0.4, 0, 0]}', "--timing")
    report = json.loads(out)
    assert code == EXIT_OK
    assert report["outputs"]["fourvector"] == pytest.approx([math.cosh(0.4), math.sinh(0.4), 0.0, 0.0])
    assert report["outputs"]["minkowski_norm"] == pytest.approx(1.0)
    assert report["wall_time"] >= 0


@pytest.mark.unit
def test_boost_rejects_plain_vector(monkeypatch, capsys):
    """Test that 3-vectors can only be rotated."""
    code, _, err = run_cli(monkeypatch, capsys, "boost", '{"vector": [1, 0, 0]}', '{"lambda": [0.4, 0, 0]}')
    assert code == EXIT_USAGE
    assert "only be rotated" in err


@pytest.mark.unit
def test_boost_field_strength(monkeypatch, capsys):
    """Test that the field invariant is reported unchanged."""
    code, out, _ = run_cli(monkeypatch, capsys, "boost", '{"field": {"B": [0, 0, 1], "E": [0.5, 0, 0]}}',
                           '{"lambda": [0, 0.7, 0]}')
    report = json.loads(out)
    assert code == EXIT_OK
    # B² − E² + 2iB·E
    assert report["outputs"]["invariant"] == pytest.approx([0.75, 0.0], abs=1e-12)


@pytest.mark.unit
def test_dirac_on_shell_plane_wave(monkeypatch, capsys):
    """Test the dirac command on a solved plane wave."""
    code, out, _ = run_cli(monkeypatch, capsys, "dirac", '{"mass": 1, "momentum": [0.3, 0, 0.4]}')
    report = json.loads(out)
    assert code == EXIT_OK
    assert report["outputs"]["on_shell"] is True
    assert report["outputs"]["energy"] == pytest.approx(math.sqrt(1.25))
    assert [c["name"] for c in report["checks"]] == [
        "quaternionic_residual", "weyl_oracle_agreement", "split_form_agreement"]


@pytest.mark.unit
def test_dirac_off_shell_fails(monkeypatch, capsys):
    """Test that an off-shell energy gives exit code 1."""
    code, out, _ = run_cli(monkeypatch, capsys, "dirac", '{"mass": 1, "momentum": [0, 0, 0], "energy": 1.1}')
    report = json.loads(out)
    assert code == EXIT_FAILED
    assert report["passed"] is False
    assert report["outputs"]["residual_norm"] == pytest.approx(0.21 * math.sqrt(0.5))


@pytest.mark.unit
def test_dirac_rest_frame(monkeypatch, capsys, tmp_path):
    """Test the rest-frame relation, with points read from a file."""
    points = tmp_path / "points.json"
    points.write_text("[[0, 0, 0, 0], [0.5, 1, -1, 2]]", encoding="utf-8")
    code, out, _ = run_cli(monkeypatch, capsys, "dirac", '{"mass": 2, "rest": true}', "--points", f"@{points}")
    report = json.loads(out)
    assert code == EXIT_OK
    assert report["inputs"]["points"] == [[0, 0, 0, 0], [0.5, 1, -1, 2]]
    assert "rest_frame_relation" in {c["name"] for c in report["checks"]}


@pytest.mark.unit
def test_pauli_landau_levels(monkeypatch, capsys):
    """Test the spin splitting B/m."""
    code, out, _ = run_cli(monkeypatch, capsys, "pauli", "--B", "2", "--mass", "1", "--gaussian-units")
    report = json.loads(out)
    assert code == EXIT_OK
    assert report["outputs"]["splitting"] == pytest.approx(2.0, abs=1e-9)
    assert report["outputs"]["kinetic_level"] == pytest.approx(1.0)
    assert "hamiltonian" in report["outputs"]["gaussian_units"]


@pytest.mark.unit
def test_pauli_rejects_zero_mass(monkeypatch, capsys):
    """Test the --mass check."""
    code, _, err = run_cli(monkeypatch, capsys, "pauli", "--mass", "0")
    assert code == EXIT_USAGE
    assert "--mass must be positive" in err


@pytest.mark.unit
def test_maxwell_vacuum_plane_wave(monkeypatch, capsys):
    """Test the eight-residual table of a vacuum wave."""
    family = '{"family": "plane_wave_em", "polarization": [0, 1, 0], "wave_vector": [1, 0, 0]}'
    code, out, _ = run_cli(monkeypatch, capsys, "maxwell", family)
    report = json.loads(out)
    assert code == EXIT_OK
    assert set(report["outputs"]["residuals"]) == {
        "gauss", "ampere_x", "ampere_y", "ampere_z", "faraday_x", "faraday_y", "faraday_z", "no_monopole"}
    assert len(report["checks"]) == 8


@pytest.mark.unit
def test_maxwell_with_classical_source(monkeypatch, capsys):
    """Test that a non-vacuum potential fails alone and passes against its source."""
    family = json.dumps({"family": "custom_polynomial",
                         "components": ["x**2*y - t*z", "t**2*y + x*z", "x*y*z", "t*x**2 - y**2"]})
    code, _, _ = run_cli(monkeypatch, capsys, "maxwell", family)
    assert code == EXIT_FAILED
    code, out, _ = run_cli(monkeypatch, capsys, "maxwell", family, "--with-source", "--tol", "1e-9")
    assert code == EXIT_OK
    assert json.loads(out)["inputs"]["with_source"] is True


@pytest.mark.unit
def test_cpt_constant_and_plane_wave(monkeypatch, capsys):
    """Test the cpt command on a constant spinor and on a plane wave."""
    spinor = {"xiL": [0.5, 0.1], "chiL": 0.2, "xiR": -0.3, "chiR": [0, 1]}
    code, out, _ = run_cli(monkeypatch, capsys, "cpt", json.dumps(spinor))
    assert code == EXIT_OK
    assert json.loads(out)["outputs"]["verdict"] == "C∘P∘T ψ(x) = ψ(−x)·k̂"

    wave = {"spinor": spinor, "energy": 1.5, "momentum": [0.2, -0.1, 0.4]}
    code, out, _ = run_cli(monkeypatch, capsys, "cpt", json.dumps(wave), "--point", "[0.1, 0.2, 0.3, 0.4]")
    report = json.loads(out)
    assert code == EXIT_OK
    assert report["inputs"]["point"] == [0.1, 0.2, 0.3, 0.4]
    assert {c["name"] for c in report["checks"]} == {"cpt_composition", "charge_conjugation_square"}


@pytest.mark.unit
def test_cpt_rejects_bad_point(monkeypatch, capsys):
    """Test the point validation."""
    code, _, err = run_cli(monkeypatch, capsys, "cpt", '{"xiL": 1}', "--point", "[1, 2]")
    assert code == EXIT_USAGE
    assert "four coordinates" in err


@pytest.mark.unit
def test_vary_matches_packaged_golden(monkeypatch, capsys):
    """Test the derived equations against the packaged golden file."""
    code, out, _ = run_cli(monkeypatch, capsys, "vary")
    report = json.loads(out)
    assert code == EXIT_OK
    assert report["outputs"]["equations"] == ["left: iDψ_L − mψ_Rĵ = 0", "right: iD̃ψ_R + mψ_Lĵ = 0"]
    assert report["outputs"]["diff"] == []


@pytest.mark.unit
def test_vary_reports_diff_against_other_golden(monkeypatch, capsys, tmp_path):
    """Test the unified diff and exit code 1 for a mismatching golden file."""
    golden = tmp_path / "other.golden"
    golden.write_text("left: iDψ_L = 0\nright: iD̃ψ_R + mψ_Lĵ = 0\n", encoding="utf-8")
    code, out, _ = run_cli(monkeypatch, capsys, "vary", "--golden", str(golden))
    report = json.loads(out)
    assert code == EXIT_FAILED
    assert "+left: iDψ_L − mψ_Rĵ = 0" in report["outputs"]["diff"]
    assert report["checks"][0]["residual"] == 1.0


@pytest.mark.unit
def test_selftest_subset(monkeypatch, capsys):
    """Test running a named subset of the acceptance checks."""
    code, out, _ = run_cli(monkeypatch, capsys, "selftest", "--only", "det_equals_qnorm", "exp_vs_series")
    report = json.loads(out)
    assert code == EXIT_OK
    assert report["outputs"] == {"passed": 2, "total": 2}


@pytest.mark.unit
def test_selftest_unknown_check(monkeypatch, capsys):
    """Test that an unknown check name is a usage error."""
    code, _, err = run_cli(monkeypatch, capsys, "selftest", "--only", "no_such_check")
    assert code == EXIT_USAGE
    assert "Unknown checks" in err


@pytest.mark.unit
def test_selftest_forwards_seed_backend_and_names(mocker, monkeypatch, capsys):
    """Test that selftest hands its options to run_checks and reports a failure."""
    mock_run = mocker.patch("src.main.run_checks", return_value=[CheckResult("broken", 1.0, 1e-12, "fd")])
    code, out, _ = run_cli(monkeypatch, capsys, "selftest", "--seed", "5", "--backend", "fd", "--only", "broken")
    report = json.loads(out)
    assert code == EXIT_FAILED
    assert report["outputs"] == {"passed": 0, "total": 1}
    args = mock_run.call_args.args
    assert args[0] == 5
    assert args[1].value == "fd"
    assert args[2] == ["broken"]


@pytest.mark.unit
def test_malformed_json_is_usage_error(monkeypatch, capsys):
    """Test that unparsable JSON input gives exit code 2."""
    code, _, err = run_cli(monkeypatch, capsys, "boost", "{not json", '{"lambda": [0.1, 0, 0]}')
    assert code == EXIT_USAGE
    assert err.startswith("Error:")


@pytest.mark.unit
def test_main_with_keyboard_interrupt(monkeypatch, capsys):
    """Test handling of KeyboardInterrupt."""
    def interrupted(args):
        raise KeyboardInterrupt()

    monkeypatch.setattr("src.main.cmd_vary", interrupted)
    code, _, err = run_cli(monkeypatch, capsys, "vary")
    assert code == EXIT_USAGE
    assert "cancelled" in err


@pytest.mark.unit
def test_main_with_unexpected_exception(monkeypatch, capsys):
    """Test that unexpected errors are logged and reported."""
    def broken(args):
        raise RuntimeError("boom")

    monkeypatch.setattr("src.main.cmd_vary", broken)
    code, _, err = run_cli(monkeypatch, capsys, "vary")
    assert code == EXIT_USAGE
    assert "boom" in err


@pytest.mark.unit
def test_load_json(tmp_path):
    """Test inline literals, @file references and unreadable files."""
    assert load_json('{"a": [1, 2]}') == {"a": [1, 2]}
    path = tmp_path / "target.json"
    path.write_text('{"fourvector": [1, 0, 0, 0]}', encoding="utf-8")
    assert load_json(f"@{path}") == {"fourvector": [1, 0, 0, 0]}
    with pytest.raises(UsageError, match="Cannot read"):
        load_json(f"@{tmp_path / 'missing.json'}")


@pytest.mark.unit
def test_command_report_serialization():
    """Test complex values, rounding and non-finite floats in the JSON report."""
    report = CommandReport("demo", {"z": 1 + 2j})
    report.outputs = {"sum": 0.1 + 0.2, "bad": math.nan, "pair": (1, 2.5)}
    report.checks = [CheckResult("ok", 0.0, 1e-12)]
    report.wall_time = 0.5
    data = json.loads(report.to_json())
    assert data["inputs"]["z"] == [1.0, 2.0]
    assert data["outputs"] == {"sum": 0.3, "bad": "nan", "pair": [1, 2.5]}
    assert data["backend"] == "analytic"
    assert data["passed"] is True
    assert "wall_time" not in data
    assert json.loads(report.to_json(timing=True))["wall_time"] == 0.5
