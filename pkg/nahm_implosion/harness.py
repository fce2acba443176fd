"""Scenario harness: the Laboratory facade, reports and bit-stable exporters."""

import csv
import json
import logging
import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from json import JSONDecodeError
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np
from pydantic import ValidationError

from nahm_implosion.config import LabSettings, Scenario
from nahm_implosion.exceptions import ScenarioError
from nahm_implosion.logging_config import format_summary, set_log_level
from nahm_implosion.scenarios import (
    AcceptanceScenarios,
    BaseScenarioRunner,
    CsvTable,
    GaugeScenarios,
    ImplosionScenarios,
    LieScenarios,
    MetricScenarios,
    NahmScenarios,
)

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

# Serializes writes so concurrent scenarios never interleave output files
_WRITE_LOCK = threading.Lock()


def _plain(value: Any) -> Any:
    """Convert numpy values, complex numbers and tuples into JSON-ready objects."""
    if isinstance(value, dict):
        return {str(key): _plain(item) for key, item in value.items()}
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    return value


def format_float(value: float) -> str:
    """Render a float with 17 significant digits (JSON tokens for non-finite values)."""
    if math.isnan(value):
        return "NaN"
    if math.isinf(value):
        return "Infinity" if value > 0 else "-Infinity"
    text = format(value, ".17g")
    if "." not in text and "e" not in text:
        text += ".0"
    return text


def encode_json(value: Any, indent: int = 2, _level: int = 0) -> str:
    """Deterministic JSON text: sorted keys, 17-digit floats, fixed indentation."""
    pad = " " * (indent * (_level + 1))
    close = " " * (indent * _level)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [
            f"{pad}{json.dumps(key)}: {encode_json(value[key], indent, _level + 1)}"
            for key in sorted(value)
        ]
        return "{\n" + ",\n".join(items) + f"\n{close}}}"
    if isinstance(value, list):
        if not value:
            return "[]"
        items = [f"{pad}{encode_json(item, indent, _level + 1)}" for item in value]
        return "[\n" + ",\n".join(items) + f"\n{close}]"
    if isinstance(value, bool) or value is None:
        return json.dumps(value)
    if isinstance(value, float):
        return format_float(value)
    return json.dumps(value)


@dataclass
class Report:
    """Outcome of one scenario run.

    Attributes:
        scenario: Echo of the scenario that produced the report
        results: Numeric results keyed by name
        status: Pass/fail per assertion
        artifacts: File names written next to the JSON report
        tables: CSV tables not yet written
    """

    scenario: Scenario
    results: Dict[str, Any] = field(default_factory=dict)
    status: Dict[str, bool] = field(default_factory=dict)
    artifacts: List[str] = field(default_factory=list)
    tables: Dict[str, CsvTable] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.status.values())

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    @property
    def stem(self) -> str:
        return self.scenario.name

    def to_dict(self) -> Dict[str, Any]:
        return _plain(
            {
                "scenario": self.scenario.to_dict(),
                "results": self.results,
                "status": {key: "pass" if ok else "fail" for key, ok in self.status.items()},
                "artifacts": sorted(self.artifacts),
                "outcome": "pass" if self.passed else "fail",
            }
        )


def write_json(data: Dict[str, Any], path: Path) -> Path:
    """Write ``data`` as deterministic JSON with a trailing newline."""
    with _WRITE_LOCK:
        path.write_text(encode_json(_plain(data)) + "\n", encoding="utf-8")
    logger.debug(f"Wrote {path}")
    return path


def write_csv(table: CsvTable, path: Path) -> Path:
    """Write a table with '.' decimals, 17-digit floats and '\\n' line endings."""
    with _WRITE_LOCK:
        with path.open("w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(table.columns)
            for row in np.asarray(table.rows, dtype=float):
                writer.writerow([format_float(float(value)) for value in row])
    logger.debug(f"Wrote {path} ({len(table.rows)} rows)")
    return path


def export_report(report: Report, out_dir: PathLike, fmt: str = "json") -> List[Path]:
    """Export a report.

    Args:
        report: Report to export
        out_dir: Existing or new output directory
        fmt: ``"json"`` for the report itself or ``"csv"`` for its tables

    Returns:
        Paths written

    Raises:
        ScenarioError: If the format is unknown
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if fmt == "csv":
        paths = []
        for key in sorted(report.tables):
            name = f"{report.stem}_{key}.csv"
            paths.append(write_csv(report.tables[key], out / name))
            if name not in report.artifacts:
                report.artifacts.append(name)
        return paths
    if fmt == "json":
        return [write_json(report.to_dict(), out / f"{report.stem}.json")]
    raise ScenarioError(
        f"Unknown export format '{fmt}'",
        errors=[{"loc": ["format"], "msg": "expected 'json' or 'csv'"}],
    )


def _validation_errors(exc: ValidationError) -> List[Dict[str, Any]]:
    return [{"loc": list(error["loc"]), "msg": error["msg"]} for error in exc.errors()]


def parse_scenario(data: Any) -> Scenario:
    """Validate already-decoded scenario data.

    Raises:
        ScenarioError: If the data violates the scenario schema
    """
    try:
        return Scenario.model_validate(data)
    except ValidationError as e:
        raise ScenarioError("Scenario validation failed", errors=_validation_errors(e)) from e


def load_scenario(path: PathLike) -> Scenario:
    """Read and validate a scenario file.

    Raises:
        ScenarioError: If the file is unreadable, not JSON or fails validation
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ScenarioError(
            f"Cannot read scenario file {path}: {e}",
            errors=[{"loc": ["file"], "msg": str(e)}],
        ) from e
    try:
        data = json.loads(text)
    except JSONDecodeError as e:
        raise ScenarioError(
            f"Malformed scenario JSON in {path}: {e.msg} (line {e.lineno})",
            errors=[{"loc": ["file", e.lineno, e.colno], "msg": e.msg}],
        ) from e
    return parse_scenario(data)


class Laboratory:
    """Facade holding the settings and one runner per scenario kind."""

    def __init__(
        self,
        settings: Optional[LabSettings] = None,
        log_level: Union[str, int, None] = None,
    ) -> None:
        """Initialize the laboratory.

        Args:
            settings: Command-line overrides (grid size, horizon, seed)
            log_level: Log level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
                       or None to use default/global setting
        """
        self.settings = settings or LabSettings()
        self.log_level = log_level

        if log_level is not None:
            set_log_level(log_level)

        self.lie = LieScenarios(self)
        self.nahm = NahmScenarios(self)
        self.gauge = GaugeScenarios(self)
        self.metric = MetricScenarios(self)
        self.implode = ImplosionScenarios(self)
        self.acceptance_runner = AcceptanceScenarios(self)
        self._runners: Dict[str, BaseScenarioRunner] = {
            "lie": self.lie,
            "nahm": self.nahm,
            "gauge": self.gauge,
            "metric": self.metric,
            "implode": self.implode,
            "acceptance": self.acceptance_runner,
        }

        logger.debug(f"Laboratory initialized with settings={self.settings.model_dump()}")

    def __enter__(self) -> "Laboratory":
        """Context manager entry."""
        return self

    def __exit__(self, exc_type: Any, exc_val: Any, exc_tb: Any) -> None:
        """Context manager exit."""
        self.close()

    def close(self) -> None:
        logger.debug("Laboratory closed")

    def runner(self, kind: str) -> BaseScenarioRunner:
        """Runner registered for a scenario kind.

        Raises:
            ScenarioError: If the kind is unknown
        """
        try:
            return self._runners[kind]
        except KeyError:
            raise ScenarioError(
                f"Unknown scenario kind '{kind}'",
                errors=[{"loc": ["kind"], "msg": f"expected one of {sorted(self._runners)}"}],
            ) from None

    def run(self, scenario: Scenario) -> Report:
        """Run a scenario in memory; nothing is written."""
        outcome = self.runner(scenario.kind).run(scenario)
        report = Report(
            scenario=scenario,
            results=outcome.results,
            status=outcome.status,
            tables=outcome.tables,
        )
        logger.info(
            f"Scenario '{scenario.name}' ({scenario.kind}): {'pass' if report.passed else 'fail'}"
        )
        logger.debug(f"Results: {format_summary(report.to_dict()['results'])}")
        return report

    def run_file(self, path: PathLike) -> Report:
        return self.run(load_scenario(path))

    def acceptance(self, pattern: Optional[str] = None) -> Report:
        """Run every acceptance check whose name contains ``pattern``."""
        params: Dict[str, Any] = {}
        if pattern:
            params["filter"] = pattern
        scenario = parse_scenario(
            {"schema": 1, "name": "acceptance_all", "kind": "acceptance", "params": params}
        )
        return self.run(scenario)

    def run_many(
        self,
        paths: Sequence[PathLike],
        out_dir: PathLike,
        max_workers: int = 4,
    ) -> List[Report]:
        """Run independent scenario files concurrently, keeping input order."""
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            futures = [pool.submit(run_scenario, path, out_dir, lab=self) for path in paths]
            return [future.result() for future in futures]


def write_report(report: Report, out_dir: PathLike) -> Report:
    """Write CSV tables first, then the JSON report listing them."""
    export_report(report, out_dir, "csv")
    if f"{report.stem}.json" not in report.artifacts:
        report.artifacts.append(f"{report.stem}.json")
    export_report(report, out_dir, "json")
    return report


def run_scenario(
    path: PathLike,
    out_dir: PathLike,
    settings: Optional[LabSettings] = None,
    lab: Optional[Laboratory] = None,
) -> Report:
    """Load, run and export one scenario.

    The output directory is only created once the scenario has been parsed
    and computed, so failures leave no partial outputs.

    Args:
        path: Scenario JSON file
        out_dir: Output directory
        settings: Overrides used when no laboratory is supplied
        lab: Laboratory to run in

    Returns:
        The written report

    Raises:
        ScenarioError: If the scenario cannot be loaded (exit code 2)
        IntegrationBlowUpError: If an integration blows up (exit code 3)
    """
    scenario = load_scenario(path)
    lab = lab or Laboratory(settings=settings)
    report = lab.run(scenario)
    return write_report(report, out_dir)
