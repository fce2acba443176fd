"""Implosion scenarios: Baby Nahm identifications and the Kahler structure on faces."""

import logging
from typing import Any, Dict, List

import numpy as np
from scipy import linalg

from nahm_implosion.config import MetricConfig
from nahm_implosion.gauge_engine import apply_gauge
from nahm_implosion.hk_metric import bielawski_norm
from nahm_implosion.implosion import (
    BabyGeometry,
    ImplosionCoordinates,
    WeylFace,
    baby_background,
    baby_inverse_halfline,
    baby_inverse_interval,
    baby_phi_halfline,
    baby_phi_interval,
    baby_tangent,
    collapse_equivalent,
    complex_point,
    complexified_baby_solution,
    integrated_symplectic,
    interval_symplectic_pullback,
    path_baby_residual,
    weyl_face,
)
from nahm_implosion.lie_core import random_block_unitary, random_lie_element, random_unitary
from nahm_implosion.nahm_dynamics import horizontality_residual, linearized_residual, sup_norm
from nahm_implosion.scenarios.base import BaseScenarioRunner, ScenarioResult
from nahm_implosion.scenarios.gauge import bump_gauge

logger = logging.getLogger(__name__)

METRIC_RELATIVE_TOLERANCE = 1e-5
TANGENT_RESIDUAL_TOLERANCE = 1e-9
GEOMETRY_TOLERANCE = 1e-10
INTEGRATED_SYMPLECTIC_TOLERANCE = 1e-6
INTERVAL_TOLERANCE = 1e-8
HALFLINE_TOLERANCE = 1e-7
PULLBACK_TOLERANCE = 1e-4
DEFAULT_ANGLES = (0.3, 0.7, 1.2)
DEFAULT_FACES = ((1.0, 0.2, -1.2), (1.0, 1.0, -2.0))
DEFAULT_B_VALUES = (0.5, 1.0, 2.0)


class ImplosionScenarios(BaseScenarioRunner):
    """Runner for ``kind = "implode"`` scenarios."""

    kind = "implode"
    _checks = {
        "baby_metric": "baby_metric",
        "symplectic_b_independence": "symplectic_b_independence",
        "kahler_compatibility": "kahler_compatibility",
        "interval_phi": "interval_phi",
        "halfline_phi": "halfline_phi",
        "complexified": "complexified",
    }
    _allowed_params = {
        "baby_metric": ["grid", "b", "positivity_draws", "angles", "faces"],
        "symplectic_b_independence": ["grid", "pairs", "b_values", "angles", "faces"],
        "kahler_compatibility": ["b", "draws", "angles", "faces"],
        "interval_phi": ["grid", "n"],
        "halfline_phi": ["grid", "tau1", "rate"],
        "complexified": ["grid", "n"],
    }

    def _faces(self, params: Dict[str, Any]) -> List[WeylFace]:
        """su(2) faces for ``params.angles`` plus the diagonals in ``params.faces``."""
        faces = [
            weyl_face(self.diagonal([theta, -theta]))
            for theta in params.get("angles", DEFAULT_ANGLES)
        ]
        faces.extend(weyl_face(self.diagonal(d)) for d in params.get("faces", DEFAULT_FACES))
        return faces

    def baby_metric(self, params: Dict[str, Any], rng: np.random.Generator) -> ScenarioResult:
        """Closed-form norm of Baby Nahm tangents against the integrated Bielawski norm."""
        result = ScenarioResult()
        grid = self.grid(params)
        b = float(params.get("b", 1.0))
        positivity_draws = int(params.get("positivity_draws", 1000))
        worst = 0.0
        worst_residual = 0.0
        for face in self._faces(params):
            x = ImplosionCoordinates.random(face, rng)
            tangent, vector = baby_tangent(
                face, x.w, -x.v / b, x.to_tangent(face, b).root_coeffs, b, grid
            )
            closed = tangent.closed_form_norm()
            integrated = bielawski_norm(vector, MetricConfig(b=b))
            relative = abs(integrated - closed) / max(abs(closed), 1e-300)
            label = "_".join(f"{d:g}" for d in face.diagonal)
            result.record(f"face_{label}_closed_form", closed)
            result.record(f"face_{label}_integrated", integrated)
            worst = max(worst, relative)

            background = baby_background(face, grid)
            residual = max(
                sup_norm(linearized_residual(background, vector)),
                sup_norm(horizontality_residual(background, vector)[:, None]),
                float(np.max(np.abs(tangent.ode_residual(grid.nodes)))),
            )
            worst_residual = max(worst_residual, residual)
        result.record("max_relative_error", worst)
        result.record("max_tangent_residual", worst_residual)
        result.check("closed_form_matches", worst < METRIC_RELATIVE_TOLERANCE)
        result.check("tangent_solves_linearized", worst_residual < TANGENT_RESIDUAL_TOLERANCE)

        negatives = 0
        faces = self._faces(params)
        for draw in range(positivity_draws):
            face = faces[draw % len(faces)]
            x = ImplosionCoordinates.random(face, rng)
            if not x.is_zero() and BabyGeometry(face, b).metric(x, x) <= 0.0:
                negatives += 1
        result.record("positivity_draws", positivity_draws)
        result.record("non_positive_draws", negatives)
        result.check("positive_definite", negatives == 0)
        return result

    def symplectic_b_independence(self, params: Dict[str, Any], rng: np.random.Generator) -> ScenarioResult:
        """Integrated ``omega_I`` of sampled tangents agrees for every ``b``.

        Each value is also compared with the closed-form symplectic form, which
        carries the opposite orientation, and the c^perp part of the closed
        form with the KKS form.
        """
        result = ScenarioResult()
        grid = self.grid(params)
        pairs = int(params.get("pairs", 100))
        b_values = [float(b) for b in params.get("b_values", DEFAULT_B_VALUES)]
        faces = self._faces(params)
        spread = 0.0
        closed_spread = 0.0
        orientation_error = 0.0
        kks_error = 0.0
        for draw in range(pairs):
            face = faces[draw % len(faces)]
            x = ImplosionCoordinates.random(face, rng)
            y = ImplosionCoordinates.random(face, rng)
            closed = BabyGeometry(face, b_values[0]).symplectic(x, y)
            values = [integrated_symplectic(x, y, face, b, grid) for b in b_values]
            via_metric = [BabyGeometry(face, b).symplectic_via_metric(x, y) for b in b_values]
            closed_spread = max(closed_spread, max(via_metric) - min(via_metric))
            scale = max(abs(closed), 1.0)
            spread = max(spread, (max(values) - min(values)) / scale)
            orientation_error = max(
                orientation_error, max(abs(value + closed) for value in values) / scale
            )

            zero = np.zeros_like(x.v)
            x_perp = ImplosionCoordinates(v=zero, v_perp=x.v_perp, w=zero)
            y_perp = ImplosionCoordinates(v=zero, v_perp=y.v_perp, w=zero)
            geometry = BabyGeometry(face, b_values[0])
            kks_error = max(
                kks_error,
                abs(geometry.symplectic_via_metric(x_perp, y_perp) - geometry.kks(x, y)),
            )
        result.record("max_b_spread", spread)
        result.record("max_closed_form_b_spread", closed_spread)
        result.record("max_orientation_error", orientation_error)
        result.record("max_kks_error", kks_error)
        result.check("b_independent", spread < INTEGRATED_SYMPLECTIC_TOLERANCE)
        result.check("closed_form_b_independent", closed_spread < GEOMETRY_TOLERANCE)
        result.check("integrated_is_reversed_closed_form", orientation_error < INTEGRATED_SYMPLECTIC_TOLERANCE)
        result.check("kks_identity", kks_error < GEOMETRY_TOLERANCE)
        return result

    def kahler_compatibility(self, params: Dict[str, Any], rng: np.random.Generator) -> ScenarioResult:
        """``omega(x, y) = g(I x, y)``, ``I^2 = -1`` and ``g(I x, I y) = g(x, y)``."""
        result = ScenarioResult()
        b = float(params.get("b", 1.0))
        draws = int(params.get("draws", 100))
        faces = self._faces(params)
        compat = square = isometry = 0.0
        for draw in range(draws):
            face = faces[draw % len(faces)]
            geometry = BabyGeometry(face, b)
            x = ImplosionCoordinates.random(face, rng)
            y = ImplosionCoordinates.random(face, rng)
            compat = max(compat, abs(geometry.symplectic(x, y) - geometry.symplectic_via_metric(x, y)))
            twice = geometry.complex_structure(geometry.complex_structure(x))
            square = max(
                square,
                float(np.max(np.abs(twice.v + x.v))),
                float(np.max(np.abs(twice.v_perp + x.v_perp))),
                float(np.max(np.abs(twice.w + x.w))),
            )
            moved = geometry.metric(geometry.complex_structure(x), geometry.complex_structure(y))
            isometry = max(isometry, abs(moved - geometry.metric(x, y)))
        result.record("max_compatibility_error", compat)
        result.record("max_square_error", square)
        result.record("max_isometry_error", isometry)
        result.record("geometry", BabyGeometry(faces[0], b).to_dict())
        result.check("kahler_compatible", compat < GEOMETRY_TOLERANCE)
        result.check("complex_structure_squares_to_minus_one", square < GEOMETRY_TOLERANCE)
        result.check("complex_structure_isometric", isometry < GEOMETRY_TOLERANCE)
        return result

    def interval_phi(self, params: Dict[str, Any], rng: np.random.Generator) -> ScenarioResult:
        """Interval identification: inverse round trip, invariance and the pulled-back form."""
        result = ScenarioResult()
        n = int(params.get("n", 2))
        grid = self.grid(params, kind="interval")
        k = random_unitary(n, rng)
        xi = random_lie_element(n, rng)
        T = baby_inverse_interval(k, xi, grid)
        point = baby_phi_interval(T)
        roundtrip = max(
            float(np.max(np.abs(point.k - k))), float(np.max(np.abs(point.xi0 - xi)))
        )
        result.record("roundtrip_error", roundtrip)
        result.record("point", point.to_dict())
        result.check("inverse_recovers", roundtrip < INTERVAL_TOLERANCE)

        moved = baby_phi_interval(apply_gauge(bump_gauge(grid, random_lie_element(n, rng)), T))
        invariance = max(
            float(np.max(np.abs(moved.k - point.k))), float(np.max(np.abs(moved.xi0 - point.xi0)))
        )
        result.record("invariance_error", invariance)
        result.check("g00_invariant", invariance < INTERVAL_TOLERANCE)

        psi = (random_lie_element(n, rng), random_lie_element(n, rng))
        phi = (random_lie_element(n, rng), random_lie_element(n, rng))
        pulled, standard = interval_symplectic_pullback(psi, phi, grid)
        result.record("pulled_back_form", pulled)
        result.record("standard_form", standard)
        result.check("standard_symplectic_form", abs(pulled - standard) < PULLBACK_TOLERANCE)
        return result

    def halfline_phi(self, params: Dict[str, Any], rng: np.random.Generator) -> ScenarioResult:
        """Half-line identification and collapse by ``[C, C]``."""
        result = ScenarioResult()
        grid = self.grid(params)
        face = weyl_face(self.diagonal(params.get("tau1", [1.0, 1.0, -2.0])))
        k = random_unitary(face.n, rng)
        T = baby_inverse_halfline(k, face, grid, rate=float(params.get("rate", 1.0)))
        point = baby_phi_halfline(T, face)
        error = float(np.max(np.abs(point.k - k)))
        result.record("roundtrip_error", error)
        result.record("point", point.to_dict())
        result.check("inverse_recovers", error < HALFLINE_TOLERANCE)

        c = random_block_unitary(face.stratum, rng, derived=True)
        collapse = collapse_equivalent(k, k @ c, face)
        result.record("collapse_distance", collapse.distance)
        result.check("collapse_equivalent", collapse.distance < HALFLINE_TOLERANCE)
        return result

    def complexified(self, params: Dict[str, Any], rng: np.random.Generator) -> ScenarioResult:
        """Solutions built from ``g = k exp(i xi)`` in K_C recover ``g``."""
        result = ScenarioResult()
        n = int(params.get("n", 2))
        grid = self.grid(params, kind="interval")
        g = linalg.expm(random_lie_element(n, rng) + 1j * random_lie_element(n, rng))
        T = complexified_baby_solution(g, grid)
        residual = sup_norm(path_baby_residual(T)[:, None])
        recovered = complex_point(T)
        error = float(np.max(np.abs(recovered - g)))
        result.record("baby_residual", residual)
        result.record("recovery_error", error)
        result.check("baby_solution", residual < INTERVAL_TOLERANCE)
        result.check("recovers_g", error < INTERVAL_TOLERANCE)
        return result
