"""Tests for configuration models."""

import pytest
from pydantic import ValidationError

from nahm_implosion.config import GridSpec, LabSettings, MetricConfig, Scenario


def _scenario(**overrides):
    data = {"schema": 1, "name": "null_vector", "kind": "metric", "params": {}}
    data.update(overrides)
    return data


def test_grid_spec_builds_both_kinds():
    """Test interval and half-line grid construction from a spec."""
    interval = GridSpec(kind="interval", nodes=33, length=2.0).build()
    assert interval.size == 33
    assert interval.t_max == pytest.approx(2.0)

    halfline = GridSpec(nodes=257, t_max=30.0).build()
    assert halfline.kind == "halfline"
    assert halfline.size == 257
    assert halfline.t_max == pytest.approx(30.0)


def test_grid_spec_bounds():
    """Test node count and horizon validation."""
    with pytest.raises(ValidationError):
        GridSpec(nodes=8)
    with pytest.raises(ValidationError):
        GridSpec(t_max=0.0)
    with pytest.raises(ValidationError):
        GridSpec(kind="circle")


def test_scenario_parses_schema_alias():
    """Test the schema alias and the echo dictionary."""
    scenario = Scenario.model_validate(_scenario(seed=3))
    assert scenario.schema_version == 1
    assert scenario.to_dict()["schema"] == 1
    assert scenario.seed == 3


def test_scenario_rejects_unknown_fields():
    """Test that extra top-level keys are forbidden."""
    with pytest.raises(ValidationError, match="extra"):
        Scenario.model_validate(_scenario(colour="blue"))


def test_scenario_rejects_wrong_schema_and_kind():
    """Test the schema version and kind literals."""
    with pytest.raises(ValidationError):
        Scenario.model_validate(_scenario(schema=2))
    with pytest.raises(ValidationError):
        Scenario.model_validate(_scenario(kind="quantum"))
    with pytest.raises(ValidationError):
        Scenario.model_validate(_scenario(name=""))


@pytest.mark.parametrize(
    "params",
    [{"n": 1}, {"n": 9}, {"n": 2.5}, {"b": 0.0}, {"b": 101.0}, {"grid": {"nodes": 4}}],
)
def test_scenario_parameter_ranges(params):
    """Test the range checks on n, b and the grid block."""
    with pytest.raises(ValidationError):
        Scenario.model_validate(_scenario(params=params))


def test_metric_config_shifted():
    """Test that gluing behind [0, L] shifts b, the tail start and the offset."""
    cfg = MetricConfig(b=0.5, tail_start=10.0)
    shifted = cfg.shifted(1.0)
    assert shifted.b == pytest.approx(1.5)
    assert shifted.tail_start == pytest.approx(11.0)
    assert shifted.tail_offset == pytest.approx(1.0)
    assert cfg.b == 0.5


def test_metric_config_is_frozen():
    """Test that metric configs cannot be mutated."""
    cfg = MetricConfig()
    with pytest.raises(ValidationError):
        cfg.b = 2.0


def test_lab_settings_grid_overrides():
    """Test that command-line overrides win over scenario grid blocks."""
    settings = LabSettings(grid_nodes=129, t_max=25.0)
    spec = settings.grid_spec({"nodes": 513, "t_max": 40.0})
    assert spec.nodes == 129
    assert spec.t_max == 25.0
    interval = settings.grid_spec({"kind": "interval", "length": 2.0})
    assert interval.nodes == 129
    assert interval.length == 2.0


def test_lab_settings_seed_precedence():
    """Test seed resolution: override, then scenario, then 0."""
    scenario = Scenario.model_validate(_scenario(seed=11))
    assert LabSettings(seed=5).seed_for(scenario) == 5
    assert LabSettings().seed_for(scenario) == 11
    assert LabSettings().seed_for(Scenario.model_validate(_scenario())) == 0


def test_lab_settings_only_hold_overrides():
    """Test that the rank cap lives in scenario validation, not in the settings."""
    with pytest.raises(ValidationError):
        LabSettings(max_dimension=4)
    assert set(LabSettings.model_fields) == {"grid_nodes", "t_max", "seed"}
