"""Tests for the exception hierarchy."""

import pytest

from nahm_implosion.exceptions import (
    AsymptoticsError,
    DivergentPairingError,
    GridError,
    ImplosionLabError,
    IntegrationBlowUpError,
    LieAlgebraError,
    ScenarioError,
    StratumError,
    ToleranceError,
    TripleError,
)


@pytest.mark.parametrize(
    "error,code",
    [
        (LieAlgebraError(), 1),
        (StratumError(), 1),
        (TripleError(residual=0.5), 1),
        (GridError(), 1),
        (AsymptoticsError(), 1),
        (ToleranceError(), 1),
        (DivergentPairingError(), 1),
        (IntegrationBlowUpError(t=0.5, norm=1e7), 3),
        (ScenarioError(), 2),
    ],
)
def test_exit_codes(error, code):
    """Test that every error maps to its process exit status."""
    assert isinstance(error, ImplosionLabError)
    assert error.exit_code == code


def test_details_are_structured():
    """Test the diagnostic payloads."""
    blow_up = IntegrationBlowUpError("Norm exceeded 1e6", t=0.501, norm=2e6)
    assert blow_up.details == {"t": 0.501, "norm": 2e6}
    assert str(blow_up) == "Norm exceeded 1e6"

    tolerance = ToleranceError("too big", quantity="baby_residual", value=1e-3, tolerance=1e-6)
    assert tolerance.details["quantity"] == "baby_residual"
    assert tolerance.value == 1e-3

    scenario = ScenarioError("bad", errors=[{"loc": ["params", "n"], "msg": "out of range"}])
    assert scenario.details == {"errors": [{"loc": ["params", "n"], "msg": "out of range"}]}

    assert DivergentPairingError(pairings=[0.3]).details == {"pairings": [0.3]}
    assert TripleError(residual=0.2).residual == 0.2


def test_base_error_defaults():
    """Test default exit code and details."""
    error = ImplosionLabError("boom")
    assert error.message == "boom"
    assert error.exit_code == 1
    assert error.details == {}
