"""Metric scenarios: signed norms, quaternionic relations, moment maps and gluing."""

import logging
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from nahm_implosion.config import MetricConfig
from nahm_implosion.exceptions import ScenarioError
from nahm_implosion.gauge_engine import GaugeAlgebraPath, fundamental_vector_field
from nahm_implosion.hk_metric import (
    AXES,
    bielawski_pair,
    decomposed_norms,
    glue_paths,
    homothety_check,
    moment_pairing,
    nondegeneracy_probe,
    pairing_integrand,
    quaternion_act,
    symplectic_pair,
)
from nahm_implosion.lie_core import (
    StratumData,
    centralizer_blocks,
    inner,
    random_asymptotic_data,
    random_lie_element,
)
from nahm_implosion.nahm_dynamics import (
    Grid,
    NahmPath,
    TangentAsymptotics,
    TangentVector,
    linearized_residual,
    model_solution,
)
from nahm_implosion.scenarios.base import BaseScenarioRunner, CsvTable, ScenarioResult

logger = logging.getLogger(__name__)

NULL_TOLERANCE = 1e-8
SIGNED_NORM_TOLERANCE = 1e-6
QUATERNION_EXACT_TOLERANCE = 1e-14
ISOMETRY_TOLERANCE = 1e-9
MOMENT_TOLERANCE = 1e-4
GLUING_TOLERANCE = 1e-8
DECOMPOSITION_TOLERANCE = 1e-8
HOMOTHETY_TOLERANCE = 1e-8
DEFAULT_SIGNED_CASES: Tuple[Tuple[float, float], ...] = ((1.0, 1.0), (1.0, 0.5), (2.0, 3.0), (1.0, 1.5))
DEFAULT_TAU = ((1.0, 1.0, -2.0), (0.0, 0.0, 0.0), (0.0, 0.0, 0.0))


def decaying_tangent(
    grid: Grid,
    delta: np.ndarray,
    eps: np.ndarray,
    decaying: np.ndarray,
) -> TangentVector:
    """``X_i = delta_i + eps_i / (2(1+t)) + e^{-t} R_i`` with exact derivatives."""
    t = grid.nodes
    pole = (1.0 / (2.0 * (1.0 + t)))[:, None, None, None]
    decay = np.exp(-t)[:, None, None, None]
    samples = delta[None] + pole * eps[None] + decay * decaying[None]
    derivatives = -2.0 * pole ** 2 * eps[None] - decay * decaying[None]
    return TangentVector(
        grid=grid,
        samples=samples,
        asymptotics=TangentAsymptotics.build(delta, eps),
        derivatives=derivatives,
    )


def random_decaying_tangent(
    grid: Grid, s: StratumData, rng: np.random.Generator, limits: bool = True
) -> TangentVector:
    """Random ``decaying_tangent`` with limits in Z(c) and pole terms in [c,c]."""
    delta, eps = random_asymptotic_data(s, rng)
    if not limits:
        delta = np.zeros_like(delta)
        eps = np.zeros_like(eps)
    decaying = np.stack([random_lie_element(s.n, rng) for _ in range(4)])
    return decaying_tangent(grid, delta, eps, decaying)


def polynomial_path(grid: Grid, rng: np.random.Generator, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Samples and exact derivatives of ``A + t B + t^2 C`` per component."""
    t = grid.nodes[:, None, None, None]
    a, b, c = (np.stack([random_lie_element(n, rng) for _ in range(4)]) for _ in range(3))
    return a[None] + t * b[None] + t ** 2 * c[None], b[None] + 2.0 * t * c[None]


class MetricScenarios(BaseScenarioRunner):
    """Runner for ``kind = "metric"`` scenarios."""

    kind = "metric"
    _checks = {
        "null_vector": "null_vector",
        "signed_norm": "signed_norm",
        "quaternion_algebra": "quaternion_algebra",
        "moment_duality": "moment_duality",
        "gluing_shift": "gluing_shift",
        "homothety": "homothety",
        "decomposition": "decomposition",
    }
    _allowed_params = {
        "null_vector": ["grid", "tau"],
        "signed_norm": ["grid", "tau", "b", "eta"],
        "quaternion_algebra": ["grid", "tau", "b"],
        "moment_duality": ["grid", "n", "b", "trials", "theta"],
        "gluing_shift": ["grid", "tau", "b_values", "interval_nodes"],
        "homothety": ["grid", "tau", "b", "factors"],
        "decomposition": ["grid", "tau", "b"],
    }

    def _stratum(self, params: Dict[str, Any]) -> StratumData:
        return centralizer_blocks([self.diagonal(v) for v in params.get("tau", DEFAULT_TAU)])

    def null_vector(self, params: Dict[str, Any], rng: np.random.Generator) -> ScenarioResult:
        """Constant tangents ``(0, delta_1, delta_2, delta_3)`` are null for ``b = 0``."""
        result = ScenarioResult()
        grid = self.grid(params)
        stratum = self._stratum(params)
        delta, _ = random_asymptotic_data(stratum, rng)
        delta[0] = 0.0
        X = decaying_tangent(grid, delta, np.zeros_like(delta), np.zeros_like(delta))
        report = bielawski_pair(X, X, MetricConfig(b=0.0))
        size = float(np.sum(inner(delta, delta)))
        result.record("value", report.value)
        result.record("delta_norm_squared", size)
        result.check("null_vector", abs(report.value) < NULL_TOLERANCE * size)
        return result

    def signed_norm(self, params: Dict[str, Any], rng: np.random.Generator) -> ScenarioResult:
        """``(0, (1 - e^{-eta t}) delta_1, 0, 0)`` has norm ``|delta_1|^2 (b - 3/(2 eta))``.

        ``params.b`` and ``params.eta`` select one case; otherwise the default
        sweep runs, including the zero crossing ``eta = 3/(2b)``.
        """
        result = ScenarioResult()
        grid = self.grid(params)
        stratum = self._stratum(params)
        if params.get("b") is not None or params.get("eta") is not None:
            cases: Sequence[Tuple[float, float]] = [
                (float(params.get("b", 1.0)), float(params.get("eta", 1.0)))
            ]
        else:
            cases = DEFAULT_SIGNED_CASES
        delta1 = stratum.center_basis[0] if stratum.center_basis.size else None
        if delta1 is None:
            raise ScenarioError(
                "signed_norm needs a stratum with nontrivial centre",
                errors=[{"loc": ["params", "tau"], "msg": "centre of the centraliser is trivial"}],
            )
        size = float(inner(delta1, delta1))
        t = grid.nodes
        first = True
        for b, eta in cases:
            samples = np.zeros((grid.size, 4) + delta1.shape, dtype=complex)
            samples[:, 1] = (1.0 - np.exp(-eta * t))[:, None, None] * delta1
            limits = np.zeros((4,) + delta1.shape, dtype=complex)
            limits[1] = delta1
            X = TangentVector(grid=grid, samples=samples, asymptotics=TangentAsymptotics.build(limits))
            report = bielawski_pair(X, X, MetricConfig(b=b))
            expected = size * (b - 3.0 / (2.0 * eta))
            key = f"b{b:g}_eta{eta:g}"
            result.record(f"{key}_value", report.value)
            result.record(f"{key}_expected", expected)
            result.record(f"{key}_report", report.to_dict())
            result.check(key, self.within(report.value, expected, SIGNED_NORM_TOLERANCE, SIGNED_NORM_TOLERANCE * size))
            if first:
                result.tables["integrand"] = CsvTable(
                    columns=["t", "integrand"],
                    rows=np.column_stack([t, pairing_integrand(X, X)]),
                )
                first = False
        result.record("delta_norm_squared", size)
        return result

    def quaternion_algebra(self, params: Dict[str, Any], rng: np.random.Generator) -> ScenarioResult:
        """Quaternion relations on tangents and orthogonality of I, J, K."""
        result = ScenarioResult()
        grid = self.grid(params)
        stratum = self._stratum(params)
        cfg = MetricConfig(b=float(params.get("b", 1.0)))
        X = random_decaying_tangent(grid, stratum, rng)
        Y = random_decaying_tangent(grid, stratum, rng)

        def act(word: str, v: TangentVector) -> TangentVector:
            for axis in reversed(word):
                v = quaternion_act(axis, v)
            return v

        relations = {
            "I_squared": (act("II", X), X.scaled(-1.0)),
            "J_squared": (act("JJ", X), X.scaled(-1.0)),
            "K_squared": (act("KK", X), X.scaled(-1.0)),
            "IJ_is_K": (act("IJ", X), act("K", X)),
        }
        for name, (lhs, rhs) in relations.items():
            error = float(np.max(np.abs(lhs.samples - rhs.samples)))
            result.record(name, error)
            result.check(name, error <= QUATERNION_EXACT_TOLERANCE)

        reference = bielawski_pair(X, Y, cfg).value
        for axis in AXES:
            moved = bielawski_pair(quaternion_act(axis, X), quaternion_act(axis, Y), cfg).value
            error = abs(moved - reference)
            result.record(f"isometry_{axis}", error)
            result.check(f"isometry_{axis}", error < ISOMETRY_TOLERANCE * (1.0 + abs(reference)))
            alternating = abs(symplectic_pair(axis, X, X, cfg))
            result.record(f"omega_{axis}_diagonal", alternating)
            result.check(f"omega_{axis}_alternating", alternating < ISOMETRY_TOLERANCE * (1.0 + abs(reference)))
        result.record("pairing", reference)
        return result

    def moment_duality(self, params: Dict[str, Any], rng: np.random.Generator) -> ScenarioResult:
        """``omega_I(X^xi, X)`` against the directional derivative of ``<mu_I, xi>``."""
        result = ScenarioResult()
        n = int(params.get("n", 2))
        trials = int(params.get("trials", 20))
        theta = float(params.get("theta", 1e-5))
        grid = self.grid(params, kind="interval")
        cfg = MetricConfig(b=float(params.get("b", 1.0)))
        w = np.pi / grid.t_max
        worst = 0.0
        worst_linear = 0.0
        for _ in range(trials):
            t_samples, t_rates = polynomial_path(grid, rng, n)
            x_samples, x_rates = polynomial_path(grid, rng, n)
            T = NahmPath(grid=grid, samples=t_samples, derivatives=t_rates)
            X = TangentVector(grid=grid, samples=x_samples, derivatives=x_rates)
            xi = GaugeAlgebraPath.from_profiles(
                grid,
                [(
                    random_lie_element(n, rng),
                    lambda t: np.sin(w * t) ** 2,
                    lambda t: w * np.sin(2 * w * t),
                    lambda t: 2 * w * w * np.cos(2 * w * t),
                )],
            )
            omega = symplectic_pair("I", fundamental_vector_field(xi, T), X, cfg)
            difference = (
                moment_pairing(T.perturbed(X, theta), xi, "I")
                - moment_pairing(T.perturbed(X, -theta), xi, "I")
            ) / (2.0 * theta)
            linear = grid.integrate(
                np.asarray(inner(xi.samples, -linearized_residual(T, X)[:, 0]), dtype=float)
            )
            worst = max(worst, abs(omega - difference))
            worst_linear = max(worst_linear, abs(omega - linear))
        result.record("max_difference", worst)
        result.record("max_linearized_difference", worst_linear)
        result.check("moment_duality", worst < MOMENT_TOLERANCE)
        result.check("linearized_duality", worst_linear < MOMENT_TOLERANCE)
        return result

    def gluing_shift(self, params: Dict[str, Any], rng: np.random.Generator) -> ScenarioResult:
        """Gluing behind ``[0, 1]`` shifts the metric parameter from ``b`` to ``b + 1``."""
        result = ScenarioResult()
        halfline = self.grid(params)
        interval = Grid.interval(1.0, int(params.get("interval_nodes", 1025)))
        tau = [self.diagonal(v) for v in params.get("tau", [[1.0, -1.0], [0.0, 0.0], [0.0, 0.0]])]
        stratum = centralizer_blocks(tau)
        left = model_solution(None, tau, None, interval, shift=1.0)
        right = model_solution(None, tau, None, halfline, shift=2.0)
        bs: List[float] = params.get("b_values", [0.5, 1.0, 2.0])

        worst = 0.0
        for b in bs:
            delta, eps = random_asymptotic_data(stratum, rng)
            eps = np.zeros_like(eps)
            a = np.stack([random_lie_element(stratum.n, rng) for _ in range(4)])
            slope = np.stack([random_lie_element(stratum.n, rng) for _ in range(4)])
            X_tilde = decaying_tangent(halfline, delta, eps, a)
            t = interval.nodes[:, None, None, None]
            X = TangentVector(
                grid=interval,
                samples=delta[None] + a[None] + (1.0 - t) * slope[None],
                derivatives=np.broadcast_to(-slope[None], (interval.size,) + slope.shape),
            )
            report = glue_paths(left, right, MetricConfig(b=b), tangents=(X, X_tilde))
            check = report.metric_check or {}
            result.record(f"b{b:g}", check)
            worst = max(worst, check.get("difference", float("inf")))
        result.record("max_difference", worst)
        result.check("gluing_shift", worst < GLUING_TOLERANCE)
        return result

    def homothety(self, params: Dict[str, Any], rng: np.random.Generator) -> ScenarioResult:
        """``|X_r|^2_{B,b} = r |X|^2_{B,rb}`` for ``X_r(t) = r X(rt)``."""
        result = ScenarioResult()
        grid = self.grid(params)
        stratum = self._stratum(params)
        b = float(params.get("b", 1.0))
        delta, _ = random_asymptotic_data(stratum, rng)
        a = np.stack([random_lie_element(stratum.n, rng) for _ in range(4)])
        X = decaying_tangent(grid, delta, np.zeros_like(delta), a)
        worst = 0.0
        for r in params.get("factors", [0.5, 2.0]):
            report = homothety_check(X, float(r), b)
            scale = 1.0 + abs(report.scaled_norm)
            result.record(f"r{float(r):g}_rescaled", report.rescaled_norm)
            result.record(f"r{float(r):g}_scaled", report.scaled_norm)
            worst = max(worst, report.difference / scale)
        result.record("max_relative_difference", worst)
        result.check("homothety", worst < HOMOTHETY_TOLERANCE)
        return result

    def decomposition(self, params: Dict[str, Any], rng: np.random.Generator) -> ScenarioResult:
        """Orthogonal D0/D1/H split, b-independence without limits and nondegeneracy."""
        result = ScenarioResult()
        grid = self.grid(params)
        stratum = self._stratum(params)
        cfg = MetricConfig(b=float(params.get("b", 1.0)))
        X = random_decaying_tangent(grid, stratum, rng)
        parts = decomposed_norms(X, stratum, cfg)
        for key, value in parts.items():
            result.record(key, value)
        gap = abs(parts["D0"] + parts["D1"] + parts["H"] - parts["total"])
        result.record("split_error", gap)
        result.check("orthogonal_split", gap < DECOMPOSITION_TOLERANCE * (1.0 + abs(parts["total"])))

        bare = random_decaying_tangent(grid, stratum, rng, limits=False)
        values = [bielawski_pair(bare, bare, MetricConfig(b=b)).value for b in (0.5, 1.0, 2.0)]
        spread = max(values) - min(values)
        result.record("b_spread_without_limits", spread)
        result.check("b_independent_without_limits", spread < 1e-12 * (1.0 + abs(values[0])))

        probe = nondegeneracy_probe(X, t0=1.0, width=0.5, cfg=cfg)
        result.record("probe_value", probe.value)
        result.record("probe_threshold", probe.threshold)
        result.check("nondegenerate", probe.passed)
        return result
