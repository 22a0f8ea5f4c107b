"""
Unit tests for src.verification module.
"""

import math

import numpy as np
import pytest

from src.fields import Backend
from src.spinor import Chirality, is_in_ideal
from src.verification import (
    PLANE_POINTS, SELFTEST_CHECKS, CheckResult, random_four_vector, random_generator, random_spinor_pair,
    read_golden, run_checks,
)


@pytest.mark.unit
def test_check_result_comparison():
    """Test upper-bound and lower-bound checks, and non-finite residuals."""
    assert CheckResult("a", 1e-13, 1e-12).passed
    assert not CheckResult("a", 1e-11, 1e-12).passed
    assert CheckResult("a", 0.5, 1e-3, lower_bound=True).passed
    assert not CheckResult("a", 1e-4, 1e-3, lower_bound=True).passed
    assert not CheckResult("a", math.nan, 1.0).passed
    assert not CheckResult("a", math.inf, 1.0, lower_bound=True).passed


@pytest.mark.unit
def test_check_result_to_dict():
    """Test the report entry of a check."""
    data = CheckResult("dirac_off_shell_detected", 0.2, 1e-3, lower_bound=True, detail={"grid": 8}).to_dict()
    assert data == {
        "name": "dirac_off_shell_detected",
        "residual": 0.2,
        "tolerance": 1e-3,
        "comparison": ">",
        "passed": True,
        "backend": "analytic",
        "detail": {"grid": 8},
    }


@pytest.mark.unit
def test_random_helpers_produce_valid_objects():
    """Test that random pairs are chiral and random generators are bounded."""
    rng = np.random.default_rng(7)
    pair = random_spinor_pair(rng)
    assert is_in_ideal(pair.psi_left, Chirality.LEFT)
    assert is_in_ideal(pair.psi_right, Chirality.RIGHT)
    g = random_generator(rng, max_rapidity=0.5)
    assert all(abs(c) <= 0.5 for c in g.lambda_)
    assert all(abs(c) <= 1.0 for c in random_four_vector(rng).components())


@pytest.mark.unit
def test_plane_points_lie_in_xy_plane():
    """Test the Landau sample points."""
    assert len(PLANE_POINTS) == 9
    assert all(p[0] == 0.0 and p[3] == 0.0 for p in PLANE_POINTS)


@pytest.mark.unit
def test_read_golden():
    """Test the packaged equation text."""
    assert read_golden() == ["left: iDψ_L − mψ_Rĵ = 0", "right: iD̃ψ_R + mψ_Lĵ = 0"]


@pytest.mark.unit
def test_run_checks_rejects_unknown_names():
    """Test the name validation of the runner."""
    with pytest.raises(KeyError, match="Unknown checks"):
        run_checks(names=["det_equals_qnorm", "no_such_check"])


@pytest.mark.unit
def test_run_checks_is_deterministic():
    """Test that a seed fixes the sampled residuals, whatever the selection."""
    alone = run_checks(3, names=["det_equals_qnorm"])
    together = run_checks(3, names=["matrix_isomorphism", "det_equals_qnorm"])
    assert [r.name for r in together] == ["matrix_isomorphism", "det_equals_qnorm"]
    assert alone[0].residual == together[1].residual
    assert alone[0].passed


@pytest.mark.unit
def test_run_checks_logs_each_result(caplog):
    """Test the per-check log line."""
    caplog.set_level("INFO", logger="src.verification")
    run_checks(names=["mass_term_expansion"], backend=Backend.FD)
    assert "mass_term_expansion: residual" in caplog.text
    assert "ok" in caplog.text


@pytest.mark.unit
def test_selftest_registry_size():
    """Test that the registry covers every acceptance check."""
    assert len(SELFTEST_CHECKS) == 25
    assert len(set(SELFTEST_CHECKS)) == len(SELFTEST_CHECKS)
