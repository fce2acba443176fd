"""Base scenario runner providing check dispatch and parameter parsing."""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from nahm_implosion.config import Scenario
from nahm_implosion.exceptions import ScenarioError
from nahm_implosion.nahm_dynamics import Grid

logger = logging.getLogger(__name__)


@dataclass
class CsvTable:
    """Columns and real-valued rows destined for a CSV sibling file."""

    columns: List[str]
    rows: np.ndarray

    @classmethod
    def from_matrices(cls, t: np.ndarray, named: Sequence[Tuple[str, np.ndarray]]) -> "CsvTable":
        """Table with a ``t`` column followed by row-major ``(re, im)`` entries.

        Args:
            t: Node times, shape ``(N,)``
            named: ``(prefix, samples)`` pairs with samples of shape ``(N, n, n)``

        Returns:
            Table with headers such as ``T0_00_re, T0_00_im, T0_01_re, ...``
        """
        columns = ["t"]
        blocks = [np.asarray(t, dtype=float)[:, None]]
        for prefix, samples in named:
            samples = np.asarray(samples, dtype=complex)
            rows, cols = samples.shape[-2:]
            for j in range(rows):
                for k in range(cols):
                    columns.extend([f"{prefix}_{j}{k}_re", f"{prefix}_{j}{k}_im"])
            flat = samples.reshape(samples.shape[0], -1)
            interleaved = np.empty((flat.shape[0], 2 * flat.shape[1]))
            interleaved[:, 0::2] = flat.real
            interleaved[:, 1::2] = flat.imag
            blocks.append(interleaved)
        return cls(columns=columns, rows=np.concatenate(blocks, axis=1))

    @classmethod
    def from_path(cls, grid: Grid, samples: np.ndarray) -> "CsvTable":
        """Table of a quadruple path ``(T0, ..., T3)`` sampled on ``grid``."""
        return cls.from_matrices(grid.nodes, [(f"T{i}", samples[:, i]) for i in range(4)])


@dataclass
class ScenarioResult:
    """Numbers, pass/fail assertions and tables produced by one check."""

    results: Dict[str, Any] = field(default_factory=dict)
    status: Dict[str, bool] = field(default_factory=dict)
    tables: Dict[str, CsvTable] = field(default_factory=dict)

    def record(self, key: str, value: Any) -> None:
        if isinstance(value, (np.floating, np.integer)):
            value = value.item()
        self.results[key] = value

    def check(self, name: str, passed: bool) -> bool:
        self.status[name] = bool(passed)
        if not passed:
            logger.info(f"Assertion '{name}' failed")
        return bool(passed)

    def merge(self, prefix: str, other: "ScenarioResult") -> None:
        for key, value in other.results.items():
            self.results[f"{prefix}.{key}"] = value
        for key, passed in other.status.items():
            self.status[f"{prefix}.{key}"] = passed
        for key, table in other.tables.items():
            self.tables[f"{prefix}_{key}"] = table

    @property
    def passed(self) -> bool:
        return all(self.status.values())


CheckMethod = Callable[[Dict[str, Any], np.random.Generator], ScenarioResult]


class BaseScenarioRunner:
    """Base class for per-kind scenario runners.

    Subclasses register their checks in ``_checks`` (scenario name to method
    name), list mandatory parameters per check in ``_required_params`` and the
    optional ones in ``_allowed_params``. Any other key is rejected.
    """

    kind: str = ""
    _checks: Dict[str, str] = {}
    _required_params: Dict[str, List[str]] = {}
    _allowed_params: Dict[str, List[str]] = {}

    def __init__(self, lab: Any) -> None:
        """Initialize the runner.

        Args:
            lab: Laboratory instance (supplies settings)
        """
        self.lab = lab
        logger.debug(f"Initialized {self.__class__.__name__} for kind '{self.kind}'")

    def names(self) -> List[str]:
        return sorted(self._checks)

    def run(self, scenario: Scenario, rng: Optional[np.random.Generator] = None) -> ScenarioResult:
        """Run the check selected by ``scenario.name``.

        Raises:
            ScenarioError: If the name is unknown or required parameters are missing
        """
        if rng is None:
            rng = np.random.default_rng(self.lab.settings.seed_for(scenario))
        return self.run_check(scenario.name, scenario.params, rng)

    def run_check(self, name: str, params: Dict[str, Any], rng: np.random.Generator) -> ScenarioResult:
        """Run one registered check with explicit parameters and generator.

        Raises:
            ScenarioError: If the name is unknown, a parameter is unknown or a required one is missing
        """
        method_name = self._checks.get(name)
        if method_name is None:
            raise ScenarioError(
                f"Unknown {self.kind} scenario '{name}'",
                errors=[{"loc": ["name"], "msg": f"expected one of {self.names()}"}],
            )
        self._validate_known(params, name)
        self._validate_required(params, self._required_params.get(name, []), name)
        method: CheckMethod = getattr(self, method_name)
        logger.info(f"Running {self.kind} scenario '{name}'")
        return method(params, rng)

    def _validate_known(self, params: Dict[str, Any], name: str) -> None:
        """Validate that every parameter is one the check reads.

        Raises:
            ScenarioError: If any parameter is unknown
        """
        known = set(self._allowed_params.get(name, [])) | set(self._required_params.get(name, []))
        unknown = sorted(key for key in params if key not in known)
        if unknown:
            raise ScenarioError(
                f"Unknown params for {name}: {', '.join(unknown)}",
                errors=[{"loc": ["params", key], "msg": "extra fields not permitted"} for key in unknown],
            )

    def _validate_required(self, params: Dict[str, Any], required: List[str], name: str) -> None:
        """Validate that all required parameters are present.

        Raises:
            ScenarioError: If any required parameters are missing
        """
        missing = [key for key in required if params.get(key) is None]
        if missing:
            raise ScenarioError(
                f"Missing required params for {name}: {', '.join(missing)}",
                errors=[{"loc": ["params", key], "msg": "field required"} for key in missing],
            )

    def grid(self, params: Dict[str, Any], kind: str = "halfline") -> Grid:
        """Grid from ``params['grid']`` with the laboratory overrides applied."""
        spec = self.lab.settings.grid_spec(params.get("grid"), kind)
        return spec.build()

    @staticmethod
    def diagonal(values: Sequence[float]) -> np.ndarray:
        """``i diag(values)`` made traceless."""
        d = np.asarray(values, dtype=float)
        return np.diag(1j * (d - d.mean()))

    @staticmethod
    def matrix(value: Any) -> np.ndarray:
        """Matrix from nested ``[re, im]`` pairs or from real/complex rows."""
        arr = np.asarray(value)
        if arr.ndim == 3 and arr.shape[-1] == 2:
            return arr[..., 0] + 1j * arr[..., 1]
        return arr.astype(complex)

    @staticmethod
    def within(value: float, expected: float, relative: float, absolute: float = 0.0) -> bool:
        return abs(value - expected) <= relative * abs(expected) + absolute
