"""Tests for the scenario runners."""

from unittest.mock import patch

import numpy as np
import pytest

from nahm_implosion.config import Scenario
from nahm_implosion.exceptions import IntegrationBlowUpError, ScenarioError
from nahm_implosion.gauge_engine import ComplexPair, complex_gauge_apply
from nahm_implosion.scenarios import ACCEPTANCE_CHECKS, CsvTable, ScenarioResult


def _scenario(kind, name, **params):
    return Scenario.model_validate({"schema": 1, "name": name, "kind": kind, "params": params})


def test_runner_dispatch(lab):
    """Test that every kind has a runner listing its checks."""
    assert "centralizer" in lab.runner("lie").names()
    assert "model_residual" in lab.runner("nahm").names()
    assert "acceptance_all" in lab.runner("acceptance").names()
    with pytest.raises(ScenarioError, match="Unknown scenario kind"):
        lab.runner("optics")


def test_unknown_check_name(lab):
    """Test that unknown scenario names raise ScenarioError."""
    with pytest.raises(ScenarioError, match="Unknown lie scenario") as exc_info:
        lab.run(_scenario("lie", "moonshine"))
    assert exc_info.value.exit_code == 2
    assert exc_info.value.errors[0]["loc"] == ["name"]


def test_missing_required_params(lab):
    """Test that the centraliser check needs tau."""
    with pytest.raises(ScenarioError, match="tau") as exc_info:
        lab.run(_scenario("lie", "centralizer"))
    assert exc_info.value.errors == [{"loc": ["params", "tau"], "msg": "field required"}]


def test_unknown_params_are_rejected(lab):
    """Test that a misspelled parameter is a scenario error, not a silent default."""
    with pytest.raises(ScenarioError, match="drawz") as exc_info:
        lab.run(_scenario("gauge", "polar", draws=2, drawz=3))
    assert exc_info.value.exit_code == 2
    assert exc_info.value.errors == [{"loc": ["params", "drawz"], "msg": "extra fields not permitted"}]


def test_every_check_declares_its_params(lab):
    """Test that each registered check has an allowed-parameter list."""
    for kind in ("lie", "nahm", "gauge", "metric", "implode", "acceptance"):
        runner = lab.runner(kind)
        for name in runner.names():
            assert name in runner._allowed_params or name in runner._required_params, (kind, name)


def test_centralizer_scenario(lab):
    """Test the centraliser report for tau_1 = i diag(1, 1, -2)."""
    report = lab.run(_scenario("lie", "centralizer", tau=[[1.0, 1.0, -2.0], [0, 0, 0], [0, 0, 0]]))
    assert report.passed
    assert report.results["blocks"] == [2, 1]
    assert report.results["dim_perp"] == 4


def test_model_residual_scenario(lab):
    """Test the model solution sweep and its path table."""
    report = lab.run(_scenario("nahm", "model_residual", grid={"nodes": 513}))
    assert report.passed
    assert report.results["cases"] == 5
    assert report.tables["path"].columns[:3] == ["t", "T0_00_re", "T0_00_im"]


def test_ivp_scenario_blow_up(lab):
    """Test that negative scales surface the blow-up error."""
    with pytest.raises(IntegrationBlowUpError):
        lab.run(_scenario("nahm", "ivp", scale=-1.0, grid={"kind": "interval"}))


def test_polar_and_kahler_scenarios(lab):
    """Test two purely algebraic scenarios."""
    assert lab.run(_scenario("gauge", "polar", draws=3)).passed
    assert lab.run(_scenario("implode", "kahler_compatibility", draws=10)).passed


def test_signed_norm_scenario_single_case(lab):
    """Test that explicit b and eta select one case."""
    report = lab.run(_scenario("metric", "signed_norm", b=2.0, eta=3.0))
    assert list(report.status) == ["b2_eta3"]
    assert report.passed
    assert "integrand" in report.tables


def test_acceptance_filter(lab):
    """Test that the filter selects checks by substring and prefixes results."""
    report = lab.acceptance("null")
    assert report.results["checks_run"] == 1
    assert all(key.startswith("null_vector.") for key in report.status)
    assert report.passed


def test_acceptance_filter_matching_nothing(lab):
    """Test the empty selection error."""
    with pytest.raises(ScenarioError, match="No acceptance check"):
        lab.acceptance("nothing-matches-this")


def test_acceptance_registry_targets_exist(lab):
    """Test that every acceptance entry delegates to a registered check."""
    for name, (kind, check, _) in ACCEPTANCE_CHECKS.items():
        assert check in lab.runner(kind).names(), name


def test_scenario_result_merge():
    """Test prefixing of merged results, assertions and tables."""
    child = ScenarioResult()
    child.record("value", np.float64(1.5))
    child.check("ok", True)
    child.tables["path"] = CsvTable(columns=["t"], rows=np.zeros((2, 1)))
    parent = ScenarioResult()
    parent.merge("exact", child)
    assert parent.results == {"exact.value": 1.5}
    assert isinstance(parent.results["exact.value"], float)
    assert parent.status == {"exact.ok": True}
    assert "exact_path" in parent.tables
    parent.check("broken", False)
    assert not parent.passed


def test_csv_table_from_matrices():
    """Test row-major (re, im) interleaving."""
    samples = np.array([[[1 + 2j, 3j], [4.0, 5 - 1j]]])
    table = CsvTable.from_matrices(np.array([0.5]), [("X", samples)])
    assert table.columns == ["t", "X_00_re", "X_00_im", "X_01_re", "X_01_im", "X_10_re", "X_10_im", "X_11_re", "X_11_im"]
    np.testing.assert_allclose(table.rows[0], [0.5, 1, 2, 0, 3, 4, 0, 5, -1])


def test_symplectic_b_independence_scenario(lab):
    """Test the integrated symplectic form across b on a few pairs."""
    report = lab.run(_scenario("implode", "symplectic_b_independence", pairs=4, angles=[0.7]))
    assert report.passed
    assert set(report.status) == {
        "b_independent",
        "closed_form_b_independent",
        "integrated_is_reversed_closed_form",
        "kks_identity",
    }
    assert report.results["max_orientation_error"] < 1e-6


def test_complex_orbit_scenario_bound_is_absolute(lab):
    """Test that the complex orbit check passes on exact data and fails on a 1e-6 defect."""
    report = lab.run(_scenario("gauge", "complex_orbit", grid={"kind": "interval", "nodes": 257}))
    assert report.passed
    assert report.results["residual_after"] < 1e-8

    def shifted(g, pair):
        moved = complex_gauge_apply(g, pair)
        return ComplexPair(grid=moved.grid, alpha=moved.alpha, beta=moved.beta + 1e-6, beta_rate=moved.beta_rate)

    with patch("nahm_implosion.scenarios.gauge.complex_gauge_apply", side_effect=shifted):
        report = lab.run(_scenario("gauge", "complex_orbit", grid={"kind": "interval", "nodes": 257}))
    assert report.status == {"residual_class_preserved": False}
