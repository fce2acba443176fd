"""Lie algebra scenarios: stability spectra, centralisers and asymptotic relations."""

import itertools
import logging
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from nahm_implosion.lie_core import (
    StratumData,
    asymptotic_relation_residuals,
    centralizer_blocks,
    chern_simons,
    chern_simons_gradient,
    inner,
    principal_partition,
    random_asymptotic_data,
    random_block_unitary,
    random_lie_element,
    stability_constants,
    su2_triple_from_partition,
)
from nahm_implosion.scenarios.base import BaseScenarioRunner, ScenarioResult

logger = logging.getLogger(__name__)

RELATION_TOLERANCE = 1e-10
SPECTRUM_TOLERANCE = 1e-8

# Block patterns used for random strata (labels per diagonal index).
RANDOM_PATTERNS: Tuple[Tuple[int, ...], ...] = (
    (0, 0, 1),
    (0, 1, 1),
    (0, 1, 0),
    (0, 0, 1, 1),
    (0, 0, 0, 1),
    (0, 1, 1, 2),
    (0, 1, 2, 0),
)


def random_stratum(labels: Sequence[int], rng: np.random.Generator) -> StratumData:
    """Stratum of a random commuting triple with the given equality pattern."""
    groups = max(labels) + 1
    mats = []
    for _ in range(3):
        values = rng.normal(size=groups)
        d = np.array([values[label] for label in labels])
        mats.append(np.diag(1j * (d - d.mean())))
    return centralizer_blocks(mats)


class LieScenarios(BaseScenarioRunner):
    """Runner for ``kind = "lie"`` scenarios."""

    kind = "lie"
    _checks = {
        "stability_spectra": "stability_spectra",
        "centralizer": "centralizer",
        "chern_simons": "chern_simons_gradient",
        "lemma_relations": "lemma_relations",
    }
    _required_params = {"centralizer": ["tau"]}
    _allowed_params = {
        "stability_spectra": ["n", "conjugations"],
        "chern_simons": ["n", "step"],
        "lemma_relations": ["trials"],
    }

    def stability_spectra(self, params: Dict[str, Any], rng: np.random.Generator) -> ScenarioResult:
        """Hessian spectrum at 0, the su(2) principal Casimir spectrum and conjugation invariance."""
        result = ScenarioResult()
        conjugations = int(params.get("conjugations", 10))

        zero_stratum = centralizer_blocks([np.zeros((2, 2), dtype=complex)] * 3)
        principal = su2_triple_from_partition(zero_stratum, principal_partition(zero_stratum))
        spectra = stability_constants(principal, zero_stratum)
        result.record("su2_principal_casimir_max", float(np.max(spectra.casimir_spectrum)))
        result.record("su2_principal_casimir_min", float(np.min(spectra.casimir_spectrum)))
        result.check(
            "casimir_is_8",
            bool(np.all(np.abs(spectra.casimir_spectrum - 8.0) < SPECTRUM_TOLERANCE)),
        )

        n = int(params.get("n", 3))
        stratum = centralizer_blocks([np.zeros((n, n), dtype=complex)] * 3)
        zero_triple = su2_triple_from_partition(stratum, [[1] * n])
        hess = stability_constants(zero_triple, stratum).hess_spectrum
        dim_c = stratum.c_basis.shape[0]
        result.record("hess_at_zero_size", int(hess.size))
        result.check(
            "hess_at_zero_is_2",
            hess.size == 3 * dim_c and bool(np.all(np.abs(hess - 2.0) < SPECTRUM_TOLERANCE)),
        )

        triple = su2_triple_from_partition(stratum, principal_partition(stratum))
        reference = stability_constants(triple, stratum)
        worst = 0.0
        for _ in range(conjugations):
            u = random_block_unitary(stratum, rng, derived=True)
            moved = stability_constants(triple.conjugated(u), stratum)
            worst = max(
                worst,
                float(np.max(np.abs(moved.hess_spectrum - reference.hess_spectrum))),
                float(np.max(np.abs(moved.casimir_spectrum - reference.casimir_spectrum))),
            )
        result.record("conjugation_spectrum_change", worst)
        result.record("zeta_bound", reference.zeta_bound)
        result.check("conjugation_invariant", worst < SPECTRUM_TOLERANCE)
        return result

    def centralizer(self, params: Dict[str, Any], rng: np.random.Generator) -> ScenarioResult:
        """Blocks, subspace dimensions and decay constants of a given triple."""
        result = ScenarioResult()
        tau = [self.diagonal(values) for values in params["tau"]]
        stratum = centralizer_blocks(tau)
        result.record("blocks", list(stratum.blocks))
        for key, value in stratum.dims().items():
            result.record(f"dim_{key}", value)
        result.record("zeta", stratum.zeta)
        result.record("eta", stratum.eta)
        total = sum(stratum.dims().values())
        result.check("dimensions_add_up", total == stratum.n ** 2 - 1)
        return result

    def chern_simons_gradient(self, params: Dict[str, Any], rng: np.random.Generator) -> ScenarioResult:
        """Directional derivative of the Chern-Simons function against its gradient."""
        result = ScenarioResult()
        n = int(params.get("n", 3))
        step = float(params.get("step", 1e-6))
        xi = [random_lie_element(n, rng) for _ in range(3)]
        psi = [random_lie_element(n, rng) for _ in range(3)]
        plus = chern_simons([x + step * p for x, p in zip(xi, psi)])
        minus = chern_simons([x - step * p for x, p in zip(xi, psi)])
        numeric = (plus - minus) / (2 * step)
        analytic = sum(inner(g, p) for g, p in zip(chern_simons_gradient(xi), psi))
        result.record("numeric", numeric)
        result.record("analytic", float(analytic))
        result.check("gradient_matches", abs(numeric - analytic) < 1e-6 * (1.0 + abs(analytic)))
        return result

    def lemma_relations(self, params: Dict[str, Any], rng: np.random.Generator) -> ScenarioResult:
        """Algebraic relations between random limits and strata."""
        result = ScenarioResult()
        trials = int(params.get("trials", 100))
        worst: Dict[str, float] = {}
        patterns: List[Tuple[int, ...]] = list(
            itertools.islice(itertools.cycle(RANDOM_PATTERNS), trials)
        )
        for labels in patterns:
            stratum = random_stratum(labels, rng)
            delta, eps = random_asymptotic_data(stratum, rng)
            for key, value in asymptotic_relation_residuals(stratum, delta, eps).items():
                worst[key] = max(worst.get(key, 0.0), value)
        for key, value in sorted(worst.items()):
            result.record(key, value)
            result.check(key, value < RELATION_TOLERANCE)
        result.record("trials", trials)
        return result
