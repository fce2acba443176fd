"""Numerical laboratory for Nahm data, Bielawski metrics and hyperkahler implosion."""

__version__ = "0.1.0"

from nahm_implosion.config import GridSpec, LabSettings, MetricConfig, Scenario
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
from nahm_implosion.gauge_engine import (
    GaugeAlgebraPath,
    GaugePath,
    apply_gauge,
    center_tau0_gauge,
    complex_gauge_apply,
    fundamental_vector_field,
    gauge_T0_to_zero,
    kronheimer_map,
    polar_decompose,
)
from nahm_implosion.harness import Laboratory, Report, export_report, load_scenario, run_scenario
from nahm_implosion.hk_metric import (
    PairingReport,
    bielawski_norm,
    bielawski_pair,
    glue_paths,
    quaternion_act,
    symplectic_pair,
)
from nahm_implosion.implosion import (
    BabyGeometry,
    WeylFace,
    baby_geometry,
    baby_phi_halfline,
    baby_phi_interval,
    baby_residual,
    integrated_metric,
    integrated_symplectic,
    weyl_face,
)
from nahm_implosion.lie_core import (
    StratumData,
    Su2Triple,
    bracket,
    centralizer_blocks,
    chern_simons,
    inner,
    root_spaces,
    stability_constants,
    su2_triple_from_partition,
)
from nahm_implosion.logging_config import set_log_level
from nahm_implosion.nahm_dynamics import (
    Grid,
    NahmPath,
    TangentVector,
    decay_diagnostics,
    horizontality_residual,
    integrate_ivp,
    linearized_residual,
    model_solution,
    nahm_residual,
)

__all__ = [
    "Laboratory",
    "Report",
    "run_scenario",
    "export_report",
    "load_scenario",
    "GridSpec",
    "LabSettings",
    "MetricConfig",
    "Scenario",
    "ImplosionLabError",
    "LieAlgebraError",
    "StratumError",
    "TripleError",
    "GridError",
    "AsymptoticsError",
    "IntegrationBlowUpError",
    "ToleranceError",
    "DivergentPairingError",
    "ScenarioError",
    "StratumData",
    "Su2Triple",
    "bracket",
    "inner",
    "centralizer_blocks",
    "su2_triple_from_partition",
    "stability_constants",
    "chern_simons",
    "root_spaces",
    "Grid",
    "NahmPath",
    "TangentVector",
    "model_solution",
    "nahm_residual",
    "integrate_ivp",
    "linearized_residual",
    "horizontality_residual",
    "decay_diagnostics",
    "GaugePath",
    "GaugeAlgebraPath",
    "apply_gauge",
    "fundamental_vector_field",
    "gauge_T0_to_zero",
    "center_tau0_gauge",
    "kronheimer_map",
    "complex_gauge_apply",
    "polar_decompose",
    "PairingReport",
    "bielawski_pair",
    "bielawski_norm",
    "quaternion_act",
    "symplectic_pair",
    "glue_paths",
    "WeylFace",
    "weyl_face",
    "baby_residual",
    "baby_phi_interval",
    "baby_phi_halfline",
    "BabyGeometry",
    "baby_geometry",
    "integrated_metric",
    "integrated_symplectic",
    "set_log_level",
]
