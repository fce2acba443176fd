"""Scenario runners, one per scenario kind."""

from nahm_implosion.scenarios.acceptance import ACCEPTANCE_CHECKS, AcceptanceScenarios
from nahm_implosion.scenarios.base import BaseScenarioRunner, CsvTable, ScenarioResult
from nahm_implosion.scenarios.gauge import GaugeScenarios
from nahm_implosion.scenarios.implode import ImplosionScenarios
from nahm_implosion.scenarios.lie import LieScenarios
from nahm_implosion.scenarios.metric import MetricScenarios
from nahm_implosion.scenarios.nahm import NahmScenarios

__all__ = [
    "ACCEPTANCE_CHECKS",
    "AcceptanceScenarios",
    "BaseScenarioRunner",
    "CsvTable",
    "GaugeScenarios",
    "ImplosionScenarios",
    "LieScenarios",
    "MetricScenarios",
    "NahmScenarios",
    "ScenarioResult",
]
