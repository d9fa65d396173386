"""Scenario files: a strict envelope plus one parameter model per command."""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple, Type, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from wavelab.core.errors import ScenarioError
from wavelab.core.utils import read_json_file
from wavelab.types import AlgebraVariant, Command, Convention, Criterion, SupportScale, SystemKind, WaveKind

logger = logging.getLogger(__name__)

PRESET_DIR = Path(__file__).resolve().parent / "scenarios"


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ProfileSpec(StrictModel):
    shape: str = "bump"
    amplitude: float = 0.0
    center: float = 0.0
    width: float = 1.0


class WaveSpec(StrictModel):
    kind: WaveKind
    profile: ProfileSpec


class StateSpec(StrictModel):
    rho: float = Field(1.0, gt=0.0)
    p: float = Field(1.0, gt=0.0)
    u: float = 0.0


class DomainSpec(StrictModel):
    x0: float = 0.0
    x1: float = 1.0
    nx: int = Field(400, ge=16)

    @model_validator(mode="after")
    def _ordered(self):
        if not self.x1 > self.x0:
            raise ValueError("domain needs x1 > x0")
        return self

    def as_tuple(self) -> Tuple[float, float, int]:
        return (self.x0, self.x1, self.nx)


class InitialSpec(StrictModel):
    """
    Compact initial data: `type` bump or gauss with profile `params`
    (amplitude, center, width and an optional wave `kind`, default S+, or a
    `waves` list of such entries), or `file` with `params.path` to a CSV of
    x, rho, p, u.
    """

    type: Literal["bump", "gauss", "file"]
    params: Dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _params_match_type(self):
        if self.type == "file":
            if set(self.params) != {"path"}:
                raise ValueError("initial of type 'file' takes exactly params.path")
        else:
            self.wave_specs()
        return self

    def wave_specs(self) -> List[WaveSpec]:
        entries = self.params["waves"] if "waves" in self.params else [self.params]
        specs = []
        for entry in entries:
            if not isinstance(entry, dict) or "shape" in entry:
                raise ValueError(f"initial params entry must be a profile without 'shape', got {entry!r}")
            entry = dict(entry)
            kind = entry.pop("kind", WaveKind.S_PLUS)
            specs.append(WaveSpec(kind=kind, profile=ProfileSpec(shape=self.type, **entry)))
        return specs


def _fold_initial(initial: Optional[InitialSpec], waves: Optional[List[WaveSpec]], csv: Optional[str]):
    if initial is None:
        return waves, csv
    if waves or csv:
        raise ValueError("give either initial or waves/initial_csv, not both")
    if initial.type == "file":
        return waves, initial.params["path"]
    return initial.wave_specs(), csv


class AnalyzeParams(StrictModel):
    fields: List[str] = Field(default_factory=lambda: ["gamma+", "gamma-"])
    kappa: float = Field(1.4, gt=0.0)
    criterion: Criterion = Criterion.SPAN
    samples: int = Field(100, ge=1)
    tolerance: Optional[float] = None
    rescaling: bool = Field(False, description="Also check the acoustic rescaling h = (kappa p / rho)^(-1/2).")
    printed_double_wave: bool = Field(
        False, description="Also measure the printed double wave against the rescaled acoustic fields."
    )


class SimulateParams(StrictModel):
    system: SystemKind = SystemKind.FULL
    kappa: float = Field(1.4, gt=0.0)
    convention: Convention = Convention.POSITIVE
    base: StateSpec = Field(default_factory=StateSpec)
    waves: List[WaveSpec] = Field(default_factory=list)
    domain: DomainSpec = Field(default_factory=DomainSpec)
    initial_csv: Optional[str] = None
    initial: Optional[InitialSpec] = None
    T: float = Field(0.1, gt=0.0)
    cfl: Optional[float] = Field(None, gt=0.0, le=1.0)
    record_every: int = Field(1, ge=1)
    refinements: int = Field(0, ge=0, description="Extra levels for the reduced kappa=3 distance study.")

    @model_validator(mode="after")
    def _resolve_initial(self):
        self.waves, self.initial_csv = _fold_initial(self.initial, self.waves, self.initial_csv)
        return self


class IndexParams(StrictModel):
    kappa: float = Field(1.4, gt=0.0)
    convention: Convention = Convention.POSITIVE
    base: StateSpec = Field(default_factory=StateSpec)
    waves: List[WaveSpec] = Field(default_factory=list)
    initial: Optional[InitialSpec] = None
    domain: DomainSpec = Field(default_factory=DomainSpec)
    T: float = Field(..., gt=0.0)
    cfl: Optional[float] = Field(None, gt=0.0, le=1.0)
    threshold: Optional[float] = Field(None, gt=0.0, lt=1.0)
    collar_cells: Optional[int] = Field(None, ge=1)
    scale: Optional[SupportScale] = None
    shapes: List[str] = Field(default_factory=list, description="Profile shapes for the independence run.")
    expected_index: Optional[int] = None

    @model_validator(mode="after")
    def _resolve_initial(self):
        if self.initial is not None and self.initial.type == "file":
            raise ValueError("index needs wave profiles, not an initial file")
        self.waves, _ = _fold_initial(self.initial, self.waves, None)
        if not self.waves:
            raise ValueError("index needs at least one wave")
        return self


class AlgebraParams(StrictModel):
    variant: AlgebraVariant = AlgebraVariant.K
    kappa: float = Field(1.4, gt=0.0)
    max_grade: Optional[int] = Field(None, ge=1)
    witt_scan: bool = True


class GeometryParams(StrictModel):
    t3_values: List[float] = Field(default_factory=lambda: [0.0, 0.25, 0.5, 0.75, 1.0])
    points_per_side: int = Field(50, ge=2)
    foliation_samples: int = Field(400, ge=1)


PARAMS: Dict[Command, Type[StrictModel]] = {
    Command.ANALYZE: AnalyzeParams,
    Command.SIMULATE: SimulateParams,
    Command.INDEX: IndexParams,
    Command.ALGEBRA: AlgebraParams,
    Command.GEOMETRY: GeometryParams,
}

AnyParams = Union[AnalyzeParams, SimulateParams, IndexParams, AlgebraParams, GeometryParams]


class Scenario(StrictModel):
    name: str
    command: Command
    parameters: Dict[str, Any] = Field(default_factory=dict)
    seed: Optional[int] = None
    output_dir: Optional[str] = None

    def params(self) -> AnyParams:
        return PARAMS[self.command].model_validate(self.parameters)


def preset_names() -> List[str]:
    return sorted(p.stem for p in PRESET_DIR.glob("*.json"))


def resolve_config(config: str) -> Path:
    """A path to a scenario file, or the name of a built-in preset."""
    path = Path(config)
    if path.is_file():
        return path
    preset = PRESET_DIR / f"{config}.json"
    if preset.is_file():
        return preset
    raise ScenarioError(
        f"No scenario file or preset named {config!r}",
        {"config": config, "presets": preset_names()},
    )


def load_scenario(config: str) -> Tuple[Scenario, AnyParams]:
    """
    Parse and validate a scenario.

    Raises:
        ScenarioError: On unreadable JSON, unknown keys or invalid values.
    """
    path = resolve_config(config)
    try:
        data = read_json_file(path)
    except json.JSONDecodeError as e:
        raise ScenarioError(f"Scenario {path} is not valid JSON: {e}", {"path": str(path)})
    try:
        scenario = Scenario.model_validate(data)
        params = scenario.params()
    except ValidationError as e:
        raise ScenarioError(
            f"Scenario {path} does not match the schema",
            {"path": str(path), "errors": json.loads(e.json(include_url=False))},
        )
    logger.info("Loaded scenario %s (%s) from %s", scenario.name, scenario.command.value, path)
    return scenario, params
