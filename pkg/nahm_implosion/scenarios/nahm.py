"""Nahm flow scenarios: exact solutions, RK4 integration and decay fits."""

import logging
from typing import Any, Dict, List

import numpy as np

from nahm_implosion.lie_core import (
    centralizer_blocks,
    integer_partitions,
    principal_partition,
    project_stratum,
    random_lie_element,
    su2_triple_from_partition,
)
from nahm_implosion.nahm_dynamics import (
    Grid,
    decay_diagnostics,
    integrate_ivp,
    model_solution,
    nahm_residual,
    sup_norm,
)
from nahm_implosion.scenarios.base import BaseScenarioRunner, CsvTable, ScenarioResult

logger = logging.getLogger(__name__)

EXACT_RESIDUAL_TOLERANCE = 1e-10
IVP_TOLERANCE = 1e-8
DECAY_FIT_TOLERANCE = 0.05


class NahmScenarios(BaseScenarioRunner):
    """Runner for ``kind = "nahm"`` scenarios."""

    kind = "nahm"
    _checks = {
        "model_residual": "model_residual",
        "ivp": "ivp",
        "decay": "decay",
    }
    _allowed_params = {
        "model_residual": ["grid", "tau", "dimensions"],
        "ivp": ["grid", "scale"],
        "decay": ["grid", "zeta", "eta"],
    }

    def model_residual(self, params: Dict[str, Any], rng: np.random.Generator) -> ScenarioResult:
        """Nahm residual of the model solution for every standard triple.

        ``params.dimensions`` lists the ranks to sweep (default su(2), su(3));
        ``params.tau`` optionally fixes a nonzero limiting triple instead.
        """
        result = ScenarioResult()
        grid = self.grid(params)
        if params.get("tau") is not None:
            strata = [centralizer_blocks([self.diagonal(v) for v in params["tau"]])]
        else:
            dimensions: List[int] = params.get("dimensions", [2, 3])
            strata = [
                centralizer_blocks([np.zeros((n, n), dtype=complex)] * 3) for n in dimensions
            ]

        worst = 0.0
        cases = 0
        first_path = None
        for stratum in strata:
            for parts in _partition_choices(stratum.blocks):
                sigma = su2_triple_from_partition(stratum, parts)
                T = model_solution(None, stratum.tau, sigma, grid)
                residual = sup_norm(nahm_residual(T))
                label = "_".join("".join(str(p) for p in part) for part in parts)
                result.record(f"su{stratum.n}_{label}_residual", residual)
                worst = max(worst, residual)
                cases += 1
                if first_path is None:
                    first_path = T
        result.record("cases", cases)
        result.record("max_residual", worst)
        result.check("model_residual", worst < EXACT_RESIDUAL_TOLERANCE)
        if first_path is not None:
            result.tables["path"] = CsvTable.from_path(first_path.grid, first_path.samples)
        return result

    def ivp(self, params: Dict[str, Any], rng: np.random.Generator) -> ScenarioResult:
        """RK4 from model initial data against the closed-form su(2) solution.

        ``params.scale`` multiplies the initial data ``sigma_i / 2``; a negative
        scale produces a solution that blows up at ``t = 1 / (2 |scale|)``.
        """
        result = ScenarioResult()
        grid = self.grid(params)
        scale = float(params.get("scale", 1.0))
        stratum = centralizer_blocks([np.zeros((2, 2), dtype=complex)] * 3)
        sigma = su2_triple_from_partition(stratum, principal_partition(stratum))
        initial = [scale * s / 2.0 for s in sigma.sigma]

        T = integrate_ivp(initial, None, grid)
        f = scale / (2.0 * (1.0 + scale * grid.nodes))
        expected = f[:, None, None, None] * np.stack(sigma.sigma)[None]
        error = float(np.max(np.abs(T.samples[:, 1:] - expected)))
        result.record("max_error", error)
        result.check("matches_closed_form", error < IVP_TOLERANCE)

        # Generic non-commuting data on a short interval: the guard must stay quiet.
        short = Grid.interval(1.0, 1025)
        generic = [0.3 * random_lie_element(2, rng) for _ in range(3)]
        flow = integrate_ivp(generic, 0.1 * random_lie_element(2, rng), short)
        result.record("generic_final_norm", sup_norm(flow.samples[-1:, 1:]))
        result.check("generic_finite", bool(np.all(np.isfinite(flow.samples))))
        return result

    def decay(self, params: Dict[str, Any], rng: np.random.Generator) -> ScenarioResult:
        """Recover prescribed decay exponents from synthetic su(3) paths."""
        result = ScenarioResult()
        grid = self.grid(params)
        zeta = float(params.get("zeta", 1.0))
        eta = float(params.get("eta", 0.5))
        stratum = centralizer_blocks(
            [self.diagonal([1.0, 1.0, -2.0]), np.zeros((3, 3), dtype=complex), np.zeros((3, 3), dtype=complex)]
        )
        x = random_lie_element(3, rng)
        _, d1, h = project_stratum(x, stratum)
        t = grid.nodes
        samples = (
            (1.0 + t)[:, None, None] ** (-(1.0 + zeta)) * d1[None]
            + np.exp(-eta * t)[:, None, None] * h[None]
        )
        report = decay_diagnostics(samples, grid, stratum)
        for key, value in report.to_dict().items():
            result.record(key, value)
        result.check("zeta_recovered", abs(report.zeta_fit - zeta) < DECAY_FIT_TOLERANCE)
        result.check("eta_recovered", abs(report.eta_fit - eta) < DECAY_FIT_TOLERANCE)

        # Off-block part decaying at the stratum's own rate.
        bracket_samples = np.exp(-stratum.eta * t)[:, None, None] * h[None]
        bracket_report = decay_diagnostics(bracket_samples, grid, stratum)
        result.record("stratum_eta", stratum.eta)
        result.record("stratum_eta_fit", bracket_report.eta_fit)
        result.check("eta_at_least_stratum", bracket_report.eta_fit >= stratum.eta - DECAY_FIT_TOLERANCE)
        return result


def _partition_choices(blocks) -> List[List[tuple]]:
    choices: List[List[tuple]] = [[]]
    for size in blocks:
        choices = [prefix + [part] for prefix in choices for part in integer_partitions(size)]
    return choices
