"""Gauge scenarios: tau0 centring, Kronheimer's map, complex orbits and polar factors."""

import logging
from typing import Any, Dict, List, Tuple

import numpy as np
from scipy import linalg

from nahm_implosion.gauge_engine import (
    GaugePath,
    apply_gauge,
    center_tau0_gauge,
    complex_equation_residual,
    complex_gauge_apply,
    compose,
    gauge_T0_to_zero,
    holomorphic_coordinates,
    kronheimer_inverse,
    kronheimer_map,
    model_complex_pair,
    polar_decompose,
    polar_reconstruct,
)
from nahm_implosion.lie_core import (
    centralizer_blocks,
    principal_partition,
    random_lie_element,
    random_unitary,
    su2_triple_from_partition,
)
from nahm_implosion.nahm_dynamics import Grid, NahmPath, model_solution, nahm_residual, sup_norm
from nahm_implosion.scenarios.base import BaseScenarioRunner, CsvTable, ScenarioResult

logger = logging.getLogger(__name__)

CENTERING_TOLERANCE = 1e-9
INVARIANCE_TOLERANCE = 1e-8
CLOSED_FORM_TOLERANCE = 1e-9
INVERSE_TOLERANCE = 1e-7
POLAR_TOLERANCE = 1e-10
DEFAULT_CENTERING_CASES: Tuple[Tuple[float, float], ...] = ((1.0, 1.0), (2.0, 0.5))


def bump_gauge(grid: Grid, a: np.ndarray, flavor: str = "unitary") -> GaugePath:
    """``exp(sin(pi t / L) A)``: equal to the identity at both interval ends."""
    length = grid.t_max
    w = np.pi / length
    return GaugePath.one_parameter(
        grid,
        a,
        lambda t: np.sin(w * t),
        lambda t: w * np.cos(w * t),
        lambda t: -w * w * np.sin(w * t),
        flavor=flavor,
    )


def interval_solution(n: int, grid: Grid, rng: np.random.Generator) -> NahmPath:
    """A nontrivial interval solution: the model path moved by a random bump gauge."""
    stratum = centralizer_blocks([np.zeros((n, n), dtype=complex)] * 3)
    sigma = su2_triple_from_partition(stratum, principal_partition(stratum))
    T = model_solution(None, stratum.tau, sigma, grid)
    return apply_gauge(bump_gauge(grid, random_lie_element(n, rng)), T)


class GaugeScenarios(BaseScenarioRunner):
    """Runner for ``kind = "gauge"`` scenarios."""

    kind = "gauge"
    _checks = {
        "tau0_centering": "tau0_centering",
        "kronheimer": "kronheimer",
        "gauge_action": "gauge_action",
        "complex_orbit": "complex_orbit",
        "polar": "polar",
    }
    _allowed_params = {
        "tau0_centering": ["grid", "cases", "tau1", "tau0_scale"],
        "kronheimer": ["grid", "n", "draws"],
        "gauge_action": ["grid", "n"],
        "complex_orbit": ["grid", "n"],
        "polar": ["n", "draws"],
    }

    def tau0_centering(self, params: Dict[str, Any], rng: np.random.Generator) -> ScenarioResult:
        """Centred ``T0`` against ``c b e^{-ct} tau0`` on a regular su(2) model solution."""
        result = ScenarioResult()
        grid = self.grid(params)
        cases: List[Tuple[float, float]] = [
            tuple(case) for case in params.get("cases", DEFAULT_CENTERING_CASES)  # type: ignore[misc]
        ]
        tau1 = self.diagonal(params.get("tau1", [1.0, -1.0]))
        tau0 = float(params.get("tau0_scale", 0.7)) * tau1
        zero = np.zeros_like(tau1)
        T = model_solution(tau0, [tau1, zero, zero], None, grid)

        worst = 0.0
        for b, c in cases:
            u, moved = center_tau0_gauge(T, b, c)
            expected = (c * b * np.exp(-c * grid.nodes))[:, None, None] * tau0
            error = float(np.max(np.abs(moved.samples[:, 0] - expected)))
            result.record(f"b{b:g}_c{c:g}_error", error)
            result.record(f"b{b:g}_c{c:g}_residual", sup_norm(nahm_residual(moved)))
            worst = max(worst, error)
            if "gauge" not in result.tables:
                result.tables["gauge"] = CsvTable.from_matrices(grid.nodes, [("u", u.samples)])
        result.record("max_error", worst)
        result.check("tau0_centering", worst < CENTERING_TOLERANCE)
        return result

    def kronheimer(self, params: Dict[str, Any], rng: np.random.Generator) -> ScenarioResult:
        """Invariance under gauges fixing both ends, closed forms and the inverse map."""
        result = ScenarioResult()
        n = int(params.get("n", 2))
        draws = int(params.get("draws", 10))
        grid = self.grid(params, kind="interval")
        T = interval_solution(n, grid, rng)
        base = kronheimer_map(T)

        worst = 0.0
        for _ in range(draws):
            moved = kronheimer_map(apply_gauge(bump_gauge(grid, random_lie_element(n, rng)), T))
            worst = max(
                worst,
                float(np.max(np.abs(moved.g_end - base.g_end))),
                float(np.max(np.abs(moved.beta0 - base.beta0))),
            )
        result.record("invariance_error", worst)
        result.check("g00_invariant", worst < INVARIANCE_TOLERANCE)

        zero = np.zeros((grid.size, 4, n, n), dtype=complex)
        identity = kronheimer_map(NahmPath(grid=grid, samples=zero, derivatives=zero))
        identity_error = float(np.max(np.abs(identity.g_end - np.eye(n))))
        a = random_lie_element(n, rng)
        constant = zero.copy()
        constant[:, 0] = a
        exp_point = kronheimer_map(NahmPath(grid=grid, samples=constant, derivatives=zero))
        exp_error = float(np.max(np.abs(exp_point.g_end - linalg.expm(grid.t_max * a))))
        result.record("identity_error", identity_error)
        result.record("exp_error", exp_error)
        result.check("closed_forms", max(identity_error, exp_error) < CLOSED_FORM_TOLERANCE)

        k = random_unitary(n, rng)
        c2 = self.diagonal(rng.normal(size=n))
        c3 = self.diagonal(rng.normal(size=n))
        recovered = kronheimer_map(kronheimer_inverse(k, [np.zeros((n, n)), c2, c3], grid))
        inverse_error = max(
            float(np.max(np.abs(recovered.g_end - k))),
            float(np.max(np.abs(recovered.beta0 - (c2 + 1j * c3)))),
        )
        result.record("inverse_error", inverse_error)
        result.record("point", base.to_dict())
        result.check("inverse_recovers", inverse_error < INVERSE_TOLERANCE)
        return result

    def gauge_action(self, params: Dict[str, Any], rng: np.random.Generator) -> ScenarioResult:
        """Action property, residual covariance and gauging ``T0`` away."""
        result = ScenarioResult()
        n = int(params.get("n", 2))
        grid = self.grid(params, kind="interval")
        T = interval_solution(n, grid, rng)
        u = bump_gauge(grid, random_lie_element(n, rng))
        v = bump_gauge(grid, random_lie_element(n, rng))
        composed = apply_gauge(compose(u, v), T)
        stepwise = apply_gauge(u, apply_gauge(v, T))
        action_error = float(np.max(np.abs(composed.samples - stepwise.samples)))
        result.record("action_error", action_error)
        result.check("action_property", action_error < INVARIANCE_TOLERANCE)

        residual = sup_norm(nahm_residual(composed))
        result.record("moved_residual", residual)
        result.check("residual_preserved", residual < INVARIANCE_TOLERANCE)

        _, flat = gauge_T0_to_zero(T)
        t0_left = sup_norm(flat.samples[:, 0])
        result.record("t0_after_gauging", t0_left)
        result.check("t0_removed", t0_left < INVARIANCE_TOLERANCE)
        return result

    def complex_orbit(self, params: Dict[str, Any], rng: np.random.Generator) -> ScenarioResult:
        """Complex gauge moves preserve solutions of ``beta' = [beta, alpha]``."""
        result = ScenarioResult()
        n = int(params.get("n", 2))
        grid = self.grid(params, kind="interval")
        stratum = centralizer_blocks([np.zeros((n, n), dtype=complex)] * 3)
        sigma = su2_triple_from_partition(stratum, principal_partition(stratum))
        pair = model_complex_pair(stratum.tau, sigma.sigma, grid)
        before = sup_norm(complex_equation_residual(pair))

        a = random_lie_element(n, rng) + 1j * random_lie_element(n, rng)
        g = bump_gauge(grid, 0.5 * a, flavor="complexified")
        moved = complex_gauge_apply(g, pair)
        after = sup_norm(complex_equation_residual(moved))
        g0, orbit_beta = holomorphic_coordinates(g, stratum.tau, sigma.sigma)
        result.record("residual_before", before)
        result.record("residual_after", after)
        result.record("g0_distance_from_identity", float(np.max(np.abs(g0 - np.eye(n)))))
        result.record("orbit_beta_norm", float(np.linalg.norm(orbit_beta)))
        result.check("residual_class_preserved", after < INVARIANCE_TOLERANCE)
        return result

    def polar(self, params: Dict[str, Any], rng: np.random.Generator) -> ScenarioResult:
        """``g = k exp(i xi)`` round trips on random SL(n, C) elements."""
        result = ScenarioResult()
        n = int(params.get("n", 3))
        draws = int(params.get("draws", 10))
        worst = 0.0
        unitarity = 0.0
        for _ in range(draws):
            g = linalg.expm(random_lie_element(n, rng) + 1j * random_lie_element(n, rng))
            k, xi = polar_decompose(g)
            worst = max(worst, float(np.max(np.abs(polar_reconstruct(k, xi) - g))))
            unitarity = max(unitarity, float(np.max(np.abs(k @ k.conj().T - np.eye(n)))))
        result.record("max_roundtrip_error", worst)
        result.record("max_unitarity_defect", unitarity)
        result.check("polar_roundtrip", worst < POLAR_TOLERANCE and unitarity < POLAR_TOLERANCE)
        return result
