"""Named acceptance checks delegating to the per-kind runners."""

import logging
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from nahm_implosion.exceptions import ScenarioError
from nahm_implosion.scenarios.base import BaseScenarioRunner, ScenarioResult

logger = logging.getLogger(__name__)

# Acceptance name -> (runner kind, check name, default params).
ACCEPTANCE_CHECKS: Dict[str, Tuple[str, str, Dict[str, Any]]] = {
    "exact_solution": ("nahm", "model_residual", {"dimensions": [2, 3]}),
    "null_vector": ("metric", "null_vector", {}),
    "signed_norm": ("metric", "signed_norm", {}),
    "quaternion_algebra": ("metric", "quaternion_algebra", {}),
    "moment_duality": ("metric", "moment_duality", {"trials": 20}),
    "stability_spectra": ("lie", "stability_spectra", {"conjugations": 10}),
    "tau0_centering": ("gauge", "tau0_centering", {}),
    "kronheimer": ("gauge", "kronheimer", {"draws": 10}),
    "gluing_shift": ("metric", "gluing_shift", {"b_values": [0.5, 1.0, 2.0]}),
    "baby_metric": ("implode", "baby_metric", {"positivity_draws": 1000}),
    "symplectic_b_independence": ("implode", "symplectic_b_independence", {"pairs": 100}),
    "kahler_compatibility": ("implode", "kahler_compatibility", {}),
    "lemma_relations": ("lie", "lemma_relations", {"trials": 100}),
    "decay_diagnostics": ("nahm", "decay", {}),
}

# Keys forwarded from an acceptance scenario to every delegated check.
SHARED_PARAMS = ("grid",)


class AcceptanceScenarios(BaseScenarioRunner):
    """Runner for ``kind = "acceptance"`` scenarios.

    Each named check runs its delegate with default parameters; ``acceptance_all``
    runs every check (or those selected by ``params.filter``) and merges the
    results under their names.
    """

    kind = "acceptance"
    _checks = {name: "_run_named" for name in ACCEPTANCE_CHECKS}
    _checks["acceptance_all"] = "acceptance_all"
    _allowed_params = {name: list(SHARED_PARAMS) for name in ACCEPTANCE_CHECKS}
    _allowed_params["acceptance_all"] = ["filter", *SHARED_PARAMS]

    def run_check(self, name: str, params: Dict[str, Any], rng: np.random.Generator) -> ScenarioResult:
        if name in ACCEPTANCE_CHECKS:
            self._validate_known(params, name)
            return self._run_named(name, params, rng)
        return super().run_check(name, params, rng)

    def selected(self, pattern: Optional[str] = None) -> List[str]:
        """Acceptance names containing ``pattern`` (all of them without one)."""
        names = list(ACCEPTANCE_CHECKS)
        if pattern:
            names = [name for name in names if pattern in name]
        return names

    def _run_named(self, name: str, params: Dict[str, Any], rng: np.random.Generator) -> ScenarioResult:
        kind, check, defaults = ACCEPTANCE_CHECKS[name]
        merged = dict(defaults)
        merged.update({key: params[key] for key in SHARED_PARAMS if key in params})
        return self.lab.runner(kind).run_check(check, merged, rng)

    def acceptance_all(self, params: Dict[str, Any], rng: np.random.Generator) -> ScenarioResult:
        result = ScenarioResult()
        names = self.selected(params.get("filter"))
        if not names:
            raise ScenarioError(
                f"No acceptance check matches '{params.get('filter')}'",
                errors=[{"loc": ["params", "filter"], "msg": "matches nothing"}],
            )
        for name in names:
            child = np.random.default_rng(int(rng.integers(0, 2 ** 32)))
            outcome = self._run_named(name, params, child)
            result.merge(name, outcome)
            logger.info(f"Acceptance check '{name}': {'pass' if outcome.passed else 'fail'}")
        result.record("checks_run", len(names))
        return result
