"""One handler per CLI command; each returns its report and the artifacts it wrote."""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Set

import numpy as np

from settings import settings
from wavelab.cli.config import (
    AlgebraParams,
    AnalyzeParams,
    GeometryParams,
    IndexParams,
    SimulateParams,
    WaveSpec,
)
from wavelab.core.plotting import space_time_svg, supports_svg
from wavelab.core.profiles import Profile
from wavelab.core.utils import write_csv_atomic, write_markdown_atomic
from wavelab.euler.model import GasParameters, base_field, characteristic_fields, h_acoustic
from wavelab.euler.waves import printed_double_wave_mismatch
from wavelab.fields.vectorfield import StateVector
from wavelab.geometry import geometry_report, phi_surface, write_point_cloud, write_wireframe
from wavelab.interaction import profile_independence, run_interaction, span_cross_check
from wavelab.liealg import analyze_variant, family, witt_pattern_scan
from wavelab.quasirect.base import CriterionConfig
from wavelab.quasirect.criteria import CriterionFactory
from wavelab.quasirect.rescaling import rescaling_convention, verify_rescaling
from wavelab.solver import (
    WaveProfile,
    euler_grid,
    grid_from_csv,
    kappa3_initial_from_euler,
    refined_nodes,
    solve_euler,
    solve_reduced_kappa3,
    solve_reduced_sound,
)
from wavelab.solver.grid import TimeSeries
from wavelab.types import Command, OutputFormat, SystemKind, WaveKind

logger = logging.getLogger(__name__)

PRINTED_MISMATCH_TOL = 1e-6
DOUBLE_WAVE_POINT = (0.1, 0.2)


@dataclass
class CommandResult:
    report: Dict[str, Any]
    discrepancy: bool = False
    artifacts: List[Path] = field(default_factory=list)


@dataclass
class RunContext:
    out_dir: Path
    seed: int
    formats: Set[OutputFormat]

    def wants(self, fmt: OutputFormat) -> bool:
        return fmt in self.formats


def _waves(specs: List[WaveSpec]) -> List[WaveProfile]:
    return [WaveProfile(spec.kind, Profile(**spec.profile.model_dump())) for spec in specs]


def _tolerances() -> Dict[str, float]:
    return {"derivative": settings.DERIVATIVE_TOL, "exact": settings.EXACT_TOL, "cfl": settings.CFL}


def _write_series(series: TimeSeries, path: Path, ctx: RunContext, extra: Dict[str, Any]) -> Path:
    return write_csv_atomic(
        path, ["t", "x", *series.variables], series.rows(), ctx.seed, _tolerances(), extra
    )


class CommandHandler(ABC):
    command: Command

    @abstractmethod
    def run(self, params: Any, ctx: RunContext) -> CommandResult:
        pass


class AnalyzeHandler(CommandHandler):
    """Quasi-rectifiability of a named family, optionally with rescaling and printed-formula checks."""

    command = Command.ANALYZE

    def run(self, params: AnalyzeParams, ctx: RunContext) -> CommandResult:
        family_fields = [base_field(name, params.kappa) for name in params.fields]
        criterion = CriterionFactory.create_criterion(
            params.criterion, CriterionConfig(params.samples, ctx.seed, params.tolerance)
        )
        verdict = criterion.evaluate(family_fields)
        report: Dict[str, Any] = {
            "fields": params.fields,
            "kappa": params.kappa,
            "quasi_rectifiable": verdict.verdict,
            "criterion": verdict.model_dump(mode="json"),
        }
        discrepancy = False

        if params.rescaling:
            g = GasParameters(kappa=params.kappa)
            fields = characteristic_fields(g)
            acoustic = [fields[0].gamma, fields[2].gamma]
            h = [h_acoustic(params.kappa)] * 2
            report["rescaling"] = verify_rescaling(acoustic, h, params.samples, ctx.seed).model_dump(mode="json")
            report["rescaling_convention"] = rescaling_convention(acoustic, h, params.samples, ctx.seed).convention

        if params.printed_double_wave:
            mismatch = printed_double_wave_mismatch(*DOUBLE_WAVE_POINT, GasParameters(kappa=params.kappa))
            report["printed_double_wave"] = mismatch
            worst = max(entry["mismatch"] for entry in mismatch.values())
            discrepancy = worst > PRINTED_MISMATCH_TOL

        result = CommandResult(report, discrepancy)
        if ctx.wants(OutputFormat.CSV):
            rows = [(row.pair[0], row.pair[1], row.max_residual, float(row.passed)) for row in verdict.per_pair]
            result.artifacts.append(
                write_csv_atomic(
                    ctx.out_dir / "pairs.csv",
                    ["i", "j", "max_residual", "passed"],
                    rows,
                    ctx.seed,
                    {"criterion": verdict.tolerance},
                    {"fields": params.fields},
                )
            )
        return result


class SimulateHandler(CommandHandler):
    """Run one of the quasilinear systems and write its frames."""

    command = Command.SIMULATE

    def run(self, params: SimulateParams, ctx: RunContext) -> CommandResult:
        system = SystemKind(params.system)
        if system == SystemKind.REDUCED_SOUND:
            return self._reduced_sound(params, ctx)
        if system == SystemKind.REDUCED_KAPPA3:
            return self._reduced_kappa3(params, ctx)
        return self._full(params, ctx)

    def _initial(self, params: SimulateParams, kappa: float, nx: int = None):
        base = StateVector(params.base.rho, params.base.p, params.base.u)
        if params.initial_csv:
            return grid_from_csv(Path(params.initial_csv), nx)
        d = params.domain
        return euler_grid(d.x0, d.x1, nx or d.nx, _waves(params.waves), base, kappa)

    def _emit(self, series: TimeSeries, report: Dict[str, Any], ctx: RunContext, tag: str) -> CommandResult:
        result = CommandResult(report)
        extra = {"system": series.system, "convention": series.convention}
        if ctx.wants(OutputFormat.CSV):
            result.artifacts.append(_write_series(series, ctx.out_dir / f"{tag}.csv", ctx, extra))
        if ctx.wants(OutputFormat.SVG):
            values = series.stacked()[:, :, 0]
            result.artifacts.append(
                space_time_svg(
                    np.asarray(series.times), series.initial.x, values, ctx.out_dir / f"{tag}.svg", ctx.seed,
                    series.variables[0],
                )
            )
        return result

    @staticmethod
    def _summary(series: TimeSeries) -> Dict[str, Any]:
        return {
            "frames": len(series.frames),
            "final_time": series.times[-1],
            "nx": series.initial.nx,
            "max_cfl": max(series.cfl_history, default=0.0),
            "variables": list(series.variables),
        }

    def _full(self, params: SimulateParams, ctx: RunContext) -> CommandResult:
        g = GasParameters(kappa=params.kappa)
        series = solve_euler(
            self._initial(params, params.kappa), g, params.T, params.convention, params.cfl, params.record_every
        )
        report = {"system": SystemKind.FULL.value, **self._summary(series)}
        return self._emit(series, report, ctx, "frames")

    def _reduced_sound(self, params: SimulateParams, ctx: RunContext) -> CommandResult:
        g = GasParameters(kappa=params.kappa, u0=params.base.u)
        first = {kind: Profile(shape="zero") for kind in (WaveKind.S_PLUS, WaveKind.S_MINUS)}
        for wave in reversed(_waves(params.waves)):
            if wave.kind in first:
                first[wave.kind] = wave.profile
        series = solve_reduced_sound(
            first[WaveKind.S_PLUS],
            first[WaveKind.S_MINUS],
            g,
            params.T,
            params.domain.as_tuple(),
            params.cfl,
            record_every=params.record_every,
        )
        report = {"system": SystemKind.REDUCED_SOUND.value, **self._summary(series)}
        return self._emit(series, report, ctx, "frames")

    def _reduced_kappa3(self, params: SimulateParams, ctx: RunContext) -> CommandResult:
        nx = params.domain.nx
        levels = []
        run = None
        for _ in range(params.refinements + 1):
            initial = kappa3_initial_from_euler(self._initial(params, 3.0, nx))
            run = solve_reduced_kappa3(initial, params.T, params.convention, params.cfl, params.record_every)
            levels.append(
                {
                    "nx": nx,
                    "final_distance": run.final_distance,
                    "max_spectrum_error": max(run.spectrum_errors),
                }
            )
            nx = refined_nodes(nx)
        distances = [level["final_distance"] for level in levels]
        report = {
            "system": SystemKind.REDUCED_KAPPA3.value,
            **self._summary(run.reduced),
            "levels": levels,
            "distance_decreases": all(b < a for a, b in zip(distances, distances[1:])),
        }
        result = self._emit(run.mapped(), report, ctx, "mapped")
        if ctx.wants(OutputFormat.CSV):
            result.artifacts.append(_write_series(run.full, ctx.out_dir / "full.csv", ctx, {"system": "full"}))
        return result


class IndexHandler(CommandHandler):
    """Interaction index and elasticity verdict of a wave scenario."""

    command = Command.INDEX

    def run(self, params: IndexParams, ctx: RunContext) -> CommandResult:
        g = GasParameters(kappa=params.kappa)
        base = StateVector(params.base.rho, params.base.p, params.base.u)
        waves = _waves(params.waves)
        options = dict(
            domain=params.domain.as_tuple(),
            convention=params.convention,
            cfl=params.cfl,
            threshold=params.threshold,
            collar_cells=params.collar_cells,
            scale=params.scale,
            seed=ctx.seed,
        )
        run = run_interaction(waves, base, g, params.T, **options)
        report: Dict[str, Any] = {"interaction": run.report.model_dump(mode="json")}

        kinds = sorted({w.kind for w in waves}, key=lambda k: k.value)
        if len(kinds) >= 2:
            predicted = span_cross_check(kinds, g, ctx.seed)
            report["quasi_rectifiable_prediction"] = predicted.value
            report["prediction_agrees"] = predicted == run.report.verdict
        if params.shapes:
            indices = profile_independence(waves, base, g, params.T, params.shapes, **options)
            report["profile_indices"] = indices
            report["profile_independent"] = len(set(indices.values())) == 1

        discrepancy = params.expected_index is not None and run.report.index != params.expected_index
        result = CommandResult(report, discrepancy)
        region = run.region
        if ctx.wants(OutputFormat.CSV):
            masks = [region.supports[k].active for k in region.supports]
            rows = (
                (t, x, *(float(m[i, j]) for m in masks), float(region.cells[i, j]))
                for i, t in enumerate(region.times)
                for j, x in enumerate(region.x)
            )
            result.artifacts.append(
                write_csv_atomic(
                    ctx.out_dir / "supports.csv",
                    ["t", "x", *(k.value for k in region.supports), "M"],
                    rows,
                    ctx.seed,
                    {"support": region.threshold},
                )
            )
        if ctx.wants(OutputFormat.SVG):
            result.artifacts.append(
                supports_svg(
                    region.times,
                    region.x,
                    {k.value: s.active for k, s in region.supports.items()},
                    region.cells,
                    ctx.out_dir / "supports.svg",
                    ctx.seed,
                    None if region.empty else region.collar(),
                )
            )
        return result


class AlgebraHandler(CommandHandler):
    """Graded closure, ideal test, quotient fingerprint and Witt scan."""

    command = Command.ALGEBRA

    def run(self, params: AlgebraParams, ctx: RunContext) -> CommandResult:
        g = GasParameters(kappa=params.kappa)
        N = settings.MAX_GRADE if params.max_grade is None else params.max_grade
        report, table = analyze_variant(params.variant, g, N, ctx.seed)
        payload: Dict[str, Any] = {"algebra": report.model_dump(mode="json"), "table": table.to_dict()}
        if params.witt_scan:
            seed = [e for base in ("gamma+", "gamma-", "gamma0", "w2") for e in family(base, range(N + 1))]
            payload["witt"] = witt_pattern_scan(seed, N, g).model_dump(mode="json")

        result = CommandResult(payload, report.discrepancy)
        result.artifacts.append(
            write_markdown_atomic(
                ctx.out_dir / "brackets.md",
                table.to_markdown(),
                ctx.seed,
                {"closure": settings.CLOSURE_TOL},
                {"variant": params.variant.value, "max_grade": N},
            )
        )
        if ctx.wants(OutputFormat.CSV):
            constants = table.constants()
            labels = table.labels
            rows = (
                (i, j, k, constants[i, j, k])
                for i in range(len(labels))
                for j in range(len(labels))
                for k in range(len(labels))
                if constants[i, j, k] != 0.0
            )
            result.artifacts.append(
                write_csv_atomic(
                    ctx.out_dir / "constants.csv",
                    ["i", "j", "k", "c"],
                    rows,
                    ctx.seed,
                    {"closure": settings.CLOSURE_TOL},
                    {"basis": labels},
                )
            )
        return result


class GeometryHandler(CommandHandler):
    """Forms, curvatures and foliation of the Phi leaves."""

    command = Command.GEOMETRY

    def run(self, params: GeometryParams, ctx: RunContext) -> CommandResult:
        report = geometry_report(params.t3_values, params.points_per_side, params.foliation_samples, ctx.seed)
        payload = {"geometry": report.model_dump(mode="json")}
        result = CommandResult(payload, report.discrepancy)
        patches = [phi_surface(t3) for t3 in params.t3_values]
        if ctx.wants(OutputFormat.CSV):
            result.artifacts.append(write_point_cloud(patches, ctx.out_dir / "leaves.csv", seed=ctx.seed))
        if ctx.wants(OutputFormat.SVG):
            result.artifacts.append(write_wireframe(patches, ctx.out_dir / "leaves.svg", seed=ctx.seed))
        return result


class CommandFactory:
    @staticmethod
    def create_handler(command: Command) -> CommandHandler:
        if command == Command.ANALYZE:
            return AnalyzeHandler()
        elif command == Command.SIMULATE:
            return SimulateHandler()
        elif command == Command.INDEX:
            return IndexHandler()
        elif command == Command.ALGEBRA:
            return AlgebraHandler()
        elif command == Command.GEOMETRY:
            return GeometryHandler()
        else:
            raise ValueError(f"Unknown command: {command}")
