"""Configuration models for grids, metrics, scenarios and the laboratory."""

from typing import Any, Dict, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from nahm_implosion.nahm_dynamics import DEFAULT_SEGMENTS, DEFAULT_T_MAX, Grid

MAX_GRID_NODES = 1_000_000
MAX_DIMENSION = 8

SCENARIO_KINDS = ("lie", "nahm", "gauge", "metric", "implode", "acceptance")


class GridSpec(BaseModel):
    """Grid request as it appears in scenario files."""

    model_config = ConfigDict(extra="forbid")

    kind: Literal["interval", "halfline"] = "halfline"
    nodes: Optional[int] = Field(default=None, ge=16, le=MAX_GRID_NODES)
    t_max: float = Field(default=DEFAULT_T_MAX, gt=0.0)
    length: float = Field(default=1.0, gt=0.0)

    def build(self) -> Grid:
        """Construct the grid.

        Returns:
            A uniform interval grid or a geometric half-line grid
        """
        if self.kind == "interval":
            return Grid.interval(self.length, self.nodes or 1025)
        segments = (self.nodes - 1) if self.nodes else DEFAULT_SEGMENTS
        return Grid.halfline(self.t_max, segments)


class MetricConfig(BaseModel):
    """Parameters of the regularised Bielawski pairing.

    ``tail_start=None`` splits the half-line at ``T_max / 2``.
    ``endpoint_weighted`` enables the b-weighted endpoint convention on
    interval grids (only used when gluing). ``tail_offset`` is the time at
    which the half-line piece starts, so the tail model reads
    ``1 / (4 (1 + t - tail_offset)^2)``.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    b: float = 1.0
    analytic_tail: bool = True
    tail_start: Optional[float] = Field(default=None, gt=0.0)
    endpoint_weighted: bool = False
    tail_offset: float = Field(default=0.0, ge=0.0)

    def resolved_tail_start(self, grid: Grid) -> float:
        if self.tail_start is not None:
            return self.tail_start
        return self.tail_offset + (grid.t_max - self.tail_offset) / 2.0

    def shifted(self, length: float) -> "MetricConfig":
        """Config for a path glued behind an interval of the given length."""
        tail_start = None if self.tail_start is None else self.tail_start + length
        return self.model_copy(
            update={
                "b": self.b + length,
                "tail_start": tail_start,
                "tail_offset": self.tail_offset + length,
            }
        )


class Scenario(BaseModel):
    """A versioned scenario file."""

    model_config = ConfigDict(extra="forbid")

    schema_version: Literal[1] = Field(alias="schema")
    name: str = Field(min_length=1)
    kind: Literal["lie", "nahm", "gauge", "metric", "implode", "acceptance"]
    params: Dict[str, Any] = Field(default_factory=dict)
    seed: Optional[int] = Field(default=None, ge=0)

    @model_validator(mode="after")
    def _check_ranges(self) -> "Scenario":
        n = self.params.get("n")
        if n is not None and not (isinstance(n, int) and 2 <= n <= MAX_DIMENSION):
            raise ValueError(f"params.n must be an integer in [2, {MAX_DIMENSION}]")
        b = self.params.get("b")
        if b is not None and not (isinstance(b, (int, float)) and 0 < b <= 100):
            raise ValueError("params.b must lie in (0, 100]")
        grid = self.params.get("grid")
        if grid is not None:
            GridSpec.model_validate(grid)
        return self

    def to_dict(self) -> Dict[str, Any]:
        return self.model_dump(by_alias=True)


class LabSettings(BaseModel):
    """Command-line overrides applied on top of scenario parameters."""

    model_config = ConfigDict(extra="forbid")

    grid_nodes: Optional[int] = Field(default=None, ge=16, le=MAX_GRID_NODES)
    t_max: Optional[float] = Field(default=None, gt=0.0)
    seed: Optional[int] = Field(default=None, ge=0)

    def grid_spec(self, raw: Optional[Dict[str, Any]] = None, kind: str = "halfline") -> GridSpec:
        """Merge a scenario grid block with the overrides."""
        data = dict(raw or {})
        data.setdefault("kind", kind)
        if self.grid_nodes is not None:
            data["nodes"] = self.grid_nodes
        if self.t_max is not None and data["kind"] == "halfline":
            data["t_max"] = self.t_max
        return GridSpec.model_validate(data)

    def seed_for(self, scenario: Scenario) -> int:
        if self.seed is not None:
            return self.seed
        if scenario.seed is not None:
            return scenario.seed
        return 0
