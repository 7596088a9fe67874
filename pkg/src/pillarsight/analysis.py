"""Parameter sweeps, figure reproduction bundles, and the verification suite.

Sweeps are pure functions of their inputs: rows are computed independently
(optionally in parallel, capped by the PILLAR_SIGHT_THREADS environment
variable) and emitted in ascending x order, so output bytes never depend on
scheduling.  Row values are quantized to 4 decimals on creation; summaries
are computed from the quantized values, which makes an independent re-read
of the emitted CSV reproduce them exactly.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import headmotion, mirror, obstruction, oracle
from .scene import (
    Angle,
    Deflector,
    DomainError,
    DriverModel,
    GeometryError,
    NoBracketError,
    Point2,
    VehicleGeometry,
    forward_pupils,
)
from .svgplot import line_plot, scene_sketch

# 2007 Honda Odyssey measurements used by the physical test and all default
# reproduction grids.  The bundled data/odyssey.json carries the same values
# for the CLI.
ODYSSEY_GEOMETRY = VehicleGeometry(
    pillar_width=20.8,
    pillar_offset=25.4,
    mirror_forward=107.0,
    mirror_outboard=27.9,
    mirror_length=17.8,
    mirror_angle_deg=9.0,
)
ODYSSEY_DRIVER = DriverModel(pupil_gap=6.7, head_to_pupil=19.0, headrest_offset=6.0)
ODYSSEY_DEFLECTION_DEG = 45.7

# Default sweep grids.  The published figures do not state their grids, so
# paper-average comparisons made on these grids are labeled grid-dependent.
DEFAULT_WIDTH_GRID = (5.0, 40.0, 1.0)
DEFAULT_HEAD_GRID = (0.0, 12.0, 0.5)
DEFAULT_EYE_TARGETS = (-5.0, 13.75, 30.0)
DEFAULT_SHIFT_DEFLECTIONS = (0.0, 30.0, 45.7)

FIGURE_IDS = ("fig20", "fig22", "fig25", "experiment")


def _quant(value: float | None) -> float | None:
    return None if value is None else round(value, 4)


def _thread_count() -> int:
    raw = os.environ.get("PILLAR_SIGHT_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


@dataclass(frozen=True)
class Scenario:
    """One sweep series: a driver (with overrides applied) and an optional
    window deflector film."""

    label: str
    driver: DriverModel
    deflector: Deflector | None = None


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    start: float
    stop: float
    step: float
    scenarios: tuple[Scenario, ...]

    def __post_init__(self) -> None:
        if self.step <= 0.0:
            raise DomainError(f"step must be > 0, got {self.step}")
        if not self.start < self.stop:
            raise DomainError(f"need start < stop, got [{self.start}, {self.stop}]")
        if not self.scenarios:
            raise DomainError("need at least one scenario")

    def grid(self) -> list[float]:
        n = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        return [round(self.start + i * self.step, 10) for i in range(n)]


@dataclass(frozen=True)
class SweepRow:
    x: float
    values: dict[str, float | None]
    cases: dict[str, str | None]
    params: dict


@dataclass
class SweepResult:
    variable: str
    x_column: str
    value_columns: list[str]
    case_columns: list[str]
    rows: list[SweepRow]
    summary: dict[str, float] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def column(self, name: str) -> list[float | None]:
        return [row.values[name] for row in self.rows]

    def reductions(self, base_column: str, other_column: str) -> list[float | None]:
        """Pointwise fractional reductions (base - other) / base; None where
        either side is absent or the baseline is zero."""
        out: list[float | None] = []
        for row in self.rows:
            base = row.values.get(base_column)
            other = row.values.get(other_column)
            if base is None or other is None or base == 0.0:
                out.append(None)
            else:
                out.append((base - other) / base)
        return out

    def average_reduction_pct(self, base_column: str, other_column: str) -> float:
        vals = [r for r in self.reductions(base_column, other_column) if r is not None]
        if not vals:
            raise DomainError(
                f"no defined reductions between {base_column!r} and {other_column!r}"
            )
        return 100.0 * sum(vals) / len(vals)

    def to_csv(self) -> str:
        """CSV with a mandatory header, LF endings, 4-decimal values, and
        empty cells for absent values."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow([self.x_column, *self.value_columns, *self.case_columns])
        for row in self.rows:
            cells: list[str] = [f"{row.x:.4f}"]
            for col in self.value_columns:
                v = row.values[col]
                cells.append("" if v is None else f"{v:.4f}")
            for col in self.case_columns:
                c = row.cases.get(col)
                cells.append("" if c is None else c)
            writer.writerow(cells)
        return buf.getvalue()

    def to_svg(self, title: str, x_label: str, y_label: str) -> str:
        series = []
        for col in self.value_columns:
            pts = [
                (row.x, row.values[col])
                for row in self.rows
                if row.values[col] is not None
            ]
            series.append((col, pts))
        return line_plot(series, title, x_label, y_label)


def read_sweep_csv(text: str) -> tuple[list[str], list[dict[str, float | str | None]]]:
    """Independent re-reader for emitted sweep CSVs.

    Parses numeric cells to floats, empty cells to None, and leaves case
    labels as strings; shares no code with the emitter beyond the csv module.
    """
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    rows: list[dict[str, float | str | None]] = []
    for raw in reader:
        row: dict[str, float | str | None] = {}
        for name, cell in zip(header, raw):
            if cell == "":
                row[name] = None
            else:
                try:
                    row[name] = float(cell)
                except ValueError:
                    row[name] = cell
        rows.append(row)
    return header, rows


def csv_average_reduction_pct(text: str, base_column: str, other_column: str) -> float:
    """Average percentage reduction recomputed from CSV text alone."""
    _, rows = read_sweep_csv(text)
    vals = []
    for row in rows:
        base, other = row.get(base_column), row.get(other_column)
        if isinstance(base, float) and isinstance(other, float) and base != 0.0:
            vals.append((base - other) / base)
    if not vals:
        raise DomainError("no defined reductions in CSV")
    return 100.0 * sum(vals) / len(vals)


def _map_rows(fn, xs: list[float]) -> list[SweepRow]:
    workers = _thread_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, xs))
    return [fn(x) for x in xs]


def _geometry_params(geom: VehicleGeometry) -> dict:
    return {
        "pillar_width": round(geom.pillar_width, 4),
        "pillar_offset": round(geom.pillar_offset, 4),
        "mirror_forward": round(geom.mirror_forward, 4),
        "mirror_outboard": round(geom.mirror_outboard, 4),
        "mirror_length": round(geom.mirror_length, 4),
        "mirror_angle_deg": round(geom.mirror_angle_deg, 4),
    }


def _driver_params(driver: DriverModel, geom: VehicleGeometry) -> dict:
    return {
        "pupil_gap": round(driver.pupil_gap, 4),
        "head_to_pupil": round(driver.head_to_pupil, 4),
        "headrest_offset": round(driver.headrest_offset, 4),
        "pillar_distance": round(driver.resolved_pillar_distance(geom), 4),
        "right_eye_default": round(driver.right_eye_default, 4),
    }


def default_width_scenarios(driver: DriverModel) -> tuple[Scenario, ...]:
    """Head locations whose default right-eye positions land behind, within,
    and ahead of the reference pillar, exercising the eye-position cases."""
    scenarios = []
    for target in DEFAULT_EYE_TARGETS:
        offset = target - (driver.pupil_forward + driver.pupil_gap) / 2.0
        scenarios.append(
            Scenario(
                label=f"E0={target:g}",
                driver=replace(driver, headrest_offset=offset),
            )
        )
    return tuple(scenarios)


def sweep_width(
    geom: VehicleGeometry,
    driver: DriverModel,
    spec: SweepSpec | None = None,
) -> SweepResult:
    """Obstruction angles versus pillar width (both view models)."""
    if spec is None:
        start, stop, step = DEFAULT_WIDTH_GRID
        spec = SweepSpec(
            "pillar_width", start, stop, step, default_width_scenarios(driver)
        )
    value_columns = []
    case_columns = []
    for scen in spec.scenarios:
        value_columns += [f"forward[{scen.label}]", f"turned[{scen.label}]"]
        case_columns.append(f"case[{scen.label}]")

    def compute(width: float) -> SweepRow:
        geom_w = replace(geom, pillar_width=width)
        values: dict[str, float | None] = {}
        cases: dict[str, str | None] = {}
        params: dict = {"geometry": _geometry_params(geom_w), "scenarios": {}}
        for scen in spec.scenarios:
            d = scen.driver.resolved_pillar_distance(geom_w)
            e0 = scen.driver.right_eye_default
            try:
                mono = obstruction.forward_obstruction(geom_w, scen.driver)
                values[f"forward[{scen.label}]"] = _quant(mono.effective.degrees)
            except GeometryError:
                values[f"forward[{scen.label}]"] = None
            try:
                binoc = obstruction.turned_obstruction(
                    e0, width, d, scen.driver.pupil_gap
                )
                values[f"turned[{scen.label}]"] = _quant(binoc.effective.degrees)
                cases[f"case[{scen.label}]"] = binoc.case.value
            except GeometryError:
                values[f"turned[{scen.label}]"] = None
                cases[f"case[{scen.label}]"] = None
            params["scenarios"][scen.label] = _driver_params(scen.driver, geom_w)
        return SweepRow(x=width, values=values, cases=cases, params=params)

    rows = _map_rows(compute, spec.grid())
    return SweepResult(
        variable=spec.variable,
        x_column="pillar_width_cm",
        value_columns=value_columns,
        case_columns=case_columns,
        rows=rows,
        notes=["eye-position targets are reconstructions; the published grid is unspecified"],
    )


def sweep_head(
    geom: VehicleGeometry,
    driver: DriverModel,
    spec: SweepSpec | None = None,
    deflector: Deflector | None = None,
) -> SweepResult:
    """Forward-facing obstruction angle versus head position, with and
    without the deflector film."""
    if deflector is None:
        deflector = Deflector.from_degrees(ODYSSEY_DEFLECTION_DEG)
    if spec is None:
        start, stop, step = DEFAULT_HEAD_GRID
        spec = SweepSpec(
            "head_position",
            start,
            stop,
            step,
            (
                Scenario("unassisted", driver),
                Scenario("assisted", driver, deflector),
            ),
        )
    value_columns = [f"obstruction[{s.label}]" for s in spec.scenarios]

    def compute(offset: float) -> SweepRow:
        values: dict[str, float | None] = {}
        params: dict = {"geometry": _geometry_params(geom), "scenarios": {}}
        for scen in spec.scenarios:
            driver_row = replace(scen.driver, headrest_offset=offset)
            col = f"obstruction[{scen.label}]"
            try:
                if scen.deflector is None:
                    res = obstruction.forward_obstruction(geom, driver_row)
                else:
                    res = obstruction.forward_obstruction_deflected(
                        geom, driver_row, scen.deflector
                    )
                values[col] = _quant(res.effective.degrees)
            except GeometryError:
                values[col] = None
            scen_params = _driver_params(driver_row, geom)
            if scen.deflector is not None:
                scen_params["deflection_deg"] = round(scen.deflector.angle.degrees, 4)
            params["scenarios"][scen.label] = scen_params
        return SweepRow(x=offset, values=values, cases={}, params=params)

    rows = _map_rows(compute, spec.grid())
    result = SweepResult(
        variable=spec.variable,
        x_column="headrest_offset_cm",
        value_columns=value_columns,
        case_columns=[],
        rows=rows,
        notes=["published average reductions are grid-dependent"],
    )
    base = value_columns[0]
    for col in value_columns[1:]:
        result.summary[f"avg_reduction_pct[{col}/{base}]"] = (
            result.average_reduction_pct(base, col)
        )
    return result


def sweep_shift(
    geom: VehicleGeometry,
    driver: DriverModel,
    spec: SweepSpec | None = None,
    deflections_deg: tuple[float, ...] = DEFAULT_SHIFT_DEFLECTIONS,
) -> SweepResult:
    """Required head shift versus head position for each film deflection."""
    if spec is None:
        start, stop, step = DEFAULT_HEAD_GRID
        scenarios = tuple(
            Scenario(
                label=f"mu={mu:g}",
                driver=driver,
                deflector=Deflector.from_degrees(mu) if mu else None,
            )
            for mu in deflections_deg
        )
        spec = SweepSpec("head_position_shift", start, stop, step, scenarios)
    value_columns = [f"shift[{s.label}]" for s in spec.scenarios]

    def compute(offset: float) -> SweepRow:
        values: dict[str, float | None] = {}
        params: dict = {"geometry": _geometry_params(geom), "scenarios": {}}
        for scen in spec.scenarios:
            driver_row = replace(scen.driver, headrest_offset=offset)
            col = f"shift[{scen.label}]"
            try:
                if scen.deflector is None:
                    res = headmotion.required_shift(geom, driver_row)
                else:
                    res = headmotion.required_shift_deflected(
                        geom, driver_row, scen.deflector
                    )
                values[col] = _quant(res.shift)
            except GeometryError:
                values[col] = None
            scen_params = _driver_params(driver_row, geom)
            if scen.deflector is not None:
                scen_params["deflection_deg"] = round(scen.deflector.angle.degrees, 4)
            params["scenarios"][scen.label] = scen_params
        return SweepRow(x=offset, values=values, cases={}, params=params)

    rows = _map_rows(compute, spec.grid())
    result = SweepResult(
        variable=spec.variable,
        x_column="headrest_offset_cm",
        value_columns=value_columns,
        case_columns=[],
        rows=rows,
        notes=["published average reductions are grid-dependent"],
    )
    base = value_columns[0]
    for col in value_columns:
        result.summary[f"avg_reduction_pct[{col}/{base}]"] = (
            result.average_reduction_pct(base, col)
        )
    return result


def width_threshold(
    geom: VehicleGeometry,
    driver: DriverModel,
    eye_targets: tuple[float, ...] = DEFAULT_EYE_TARGETS,
    alpha_min_deg: float = 1.0,
    bracket: tuple[float, float] = (0.5, 50.0),
) -> float:
    """Smallest pillar width at which the turned-head obstruction exceeds the
    threshold at every eye target (bisection; the obstruction is strictly
    increasing in width, so the crossing is unique)."""
    d = driver.resolved_pillar_distance(geom)
    f = driver.pupil_gap

    def clears(width: float) -> bool:
        return all(
            obstruction.turned_obstruction(e, width, d, f).effective.degrees
            > alpha_min_deg
            for e in eye_targets
        )

    lo, hi = bracket
    if clears(lo) or not clears(hi):
        raise NoBracketError(
            f"threshold crossing is not bracketed by widths [{lo}, {hi}]"
        )
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if clears(mid):
            hi = mid
        else:
            lo = mid
        if hi - lo < 1e-9:
            break
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class DiscrepancyRow:
    """One reference-versus-computed comparison in a reproduction report."""

    quantity: str
    reference: str
    computed: str
    status: str  # "match" or "flagged"
    note: str = ""


@dataclass
class ReproBundle:
    """Everything a figure reproduction produces."""

    figure_id: str
    sweep: SweepResult | None
    experiment: oracle.ExperimentReconstruction | None
    oracle_checks: list[oracle.OracleReport]
    discrepancies: list[DiscrepancyRow]
    notes: list[str]

    def discrepancy_markdown(self) -> str:
        lines = [
            f"# Reproduction report: {self.figure_id}",
            "",
            "| quantity | reference | computed | status | note |",
            "| --- | --- | --- | --- | --- |",
        ]
        for row in self.discrepancies:
            lines.append(
                f"| {row.quantity} | {row.reference} | {row.computed} "
                f"| {row.status} | {row.note} |"
            )
        lines.append("")
        if self.notes:
            lines.append("Notes:")
            lines += [f"- {note}" for note in self.notes]
            lines.append("")
        if self.oracle_checks:
            lines.append("Oracle cross-checks:")
            for chk in self.oracle_checks:
                lines.append(
                    f"- {chk.quantity}: measured {chk.measured:.6f} vs closed form "
                    f"{chk.closed_form:.6f} {chk.unit} "
                    f"(|err| {chk.abs_error:.2e}, rays {chk.rays_used}, seed {chk.seed})"
                )
            lines.append("")
        return "\n".join(lines)

    def data_csv(self) -> str:
        if self.sweep is not None:
            return self.sweep.to_csv()
        assert self.experiment is not None
        rec = self.experiment
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["point", "x_cm", "y_cm"])
        for name, pt in (
            ("deflection_point", rec.deflection_point),
            ("unaided_intercept", rec.unaided_point),
            ("aided_intercept", rec.aided_point),
            ("sheet_reference", rec.sheet_reference),
        ):
            writer.writerow([name, f"{pt.x:.4f}", f"{pt.y:.4f}"])
        writer.writerow(
            ["inferred_deflection_deg", f"{rec.inferred_deflection.degrees:.4f}", ""]
        )
        writer.writerow(["intercept_gap_cm", f"{rec.ab_distance:.4f}", ""])
        return buf.getvalue()

    def plot_svg(self) -> str:
        titles = {
            "fig20": ("Obstruction angle vs pillar width", "pillar width (cm)", "obstruction angle (deg)"),
            "fig22": ("Forward obstruction vs head position", "headrest offset (cm)", "obstruction angle (deg)"),
            "fig25": ("Required head shift vs head position", "headrest offset (cm)", "head shift (cm)"),
        }
        if self.sweep is not None:
            title, xl, yl = titles[self.figure_id]
            return self.sweep.to_svg(title, xl, yl)
        assert self.experiment is not None
        rec = self.experiment
        eye = rec.deflection_point  # rays are drawn from the window edge
        segments = [
            ("pillar face", (0.0, rec.deflection_point.y), (rec.deflection_point.x, rec.deflection_point.y)),
            ("sheet", (rec.sheet_reference.x, rec.sheet_reference.y), (rec.aided_point.x, rec.aided_point.y)),
            ("unaided ray", (eye.x, eye.y), (rec.unaided_point.x, rec.unaided_point.y)),
            ("aided ray", (eye.x, eye.y), (rec.aided_point.x, rec.aided_point.y)),
        ]
        return scene_sketch(segments, "Sheet-intercept reconstruction")


def _fan_check(
    quantity: str,
    scene: oracle.Scene,
    eyes: tuple[Point2, ...],
    closed_deg: float,
    rays: int,
    seed: int,
    context: dict,
) -> oracle.OracleReport:
    measured = oracle.fan_trace_obstruction(scene, eyes, n_rays=rays, seed=seed)
    return oracle.OracleReport(
        quantity=quantity,
        measured=measured.degrees,
        closed_form=closed_deg,
        unit="deg",
        rays_used=rays,
        seed=seed,
        context=context,
    )


def _sample_indices(count: int, want: int = 5) -> list[int]:
    if count <= want:
        return list(range(count))
    return [round(i * (count - 1) / (want - 1)) for i in range(want)]


def reproduce(
    figure_id: str,
    geom: VehicleGeometry | None = None,
    driver: DriverModel | None = None,
    rays: int = 200_000,
    seed: int = 0,
) -> ReproBundle:
    """Run one figure reproduction with the documented default grids."""
    if figure_id not in FIGURE_IDS:
        raise DomainError(
            f"unknown figure id {figure_id!r}; expected one of {FIGURE_IDS}"
        )
    geom = ODYSSEY_GEOMETRY if geom is None else geom
    driver = ODYSSEY_DRIVER if driver is None else driver
    if figure_id == "fig20":
        return _reproduce_fig20(geom, driver, rays, seed)
    if figure_id == "fig22":
        return _reproduce_fig22(geom, driver, rays, seed)
    if figure_id == "fig25":
        return _reproduce_fig25(geom, driver, seed)
    return _reproduce_experiment(geom, driver, rays, seed)


def _reproduce_fig20(geom, driver, rays, seed) -> ReproBundle:
    sweep = sweep_width(geom, driver)
    threshold = width_threshold(geom, driver)
    status = "match" if 6.0 < threshold < 8.0 else "flagged"
    discrepancies = [
        DiscrepancyRow(
            quantity="zero-impact pillar width",
            reference="< 7 cm",
            computed=f"{threshold:.4f} cm",
            status=status,
            note="smallest width with turned-head obstruction > 1 deg at all eye targets",
        )
    ]
    checks = []
    scenarios = default_width_scenarios(driver)
    for k, idx in enumerate(_sample_indices(len(sweep.rows))):
        row = sweep.rows[idx]
        scen = scenarios[k % len(scenarios)]
        geom_w = replace(geom, pillar_width=row.x)
        closed = row.values[f"turned[{scen.label}]"]
        if closed is None:
            continue
        scene = oracle.Scene.turned(geom_w, scen.driver)
        checks.append(
            _fan_check(
                f"turned[{scen.label}]@W={row.x:g}",
                scene,
                scene.eyes,
                closed,
                rays,
                seed + idx,
                {"pillar_width": row.x, "scenario": scen.label},
            )
        )
    return ReproBundle(
        figure_id="fig20",
        sweep=sweep,
        experiment=None,
        oracle_checks=checks,
        discrepancies=discrepancies,
        notes=[
            "eye targets reconstruct the unstated published head locations",
            "threshold computed by bisection on continuous width, not on the grid",
        ],
    )


def _reproduce_fig22(geom, driver, rays, seed) -> ReproBundle:
    sweep = sweep_head(geom, driver)
    assisted = [v for v in sweep.column("obstruction[assisted]") if v is not None]
    unassisted = [v for v in sweep.column("obstruction[unassisted]") if v is not None]
    min_assisted = min(assisted)
    reduction = sweep.summary["avg_reduction_pct[obstruction[assisted]/obstruction[unassisted]]"]
    forward_rows_80 = all(
        v == 80.0
        for row in sweep.rows
        if row.x >= 6.0
        for v in [row.values["obstruction[unassisted]"]]
    )
    discrepancies = [
        DiscrepancyRow(
            quantity="minimum assisted obstruction angle",
            reference="34 deg",
            computed=f"{min_assisted:.4f} deg",
            status="match" if abs(min_assisted - 34.0) <= 0.5 else "flagged",
            note="attained for all head positions at or forward of 6 cm",
        ),
        DiscrepancyRow(
            quantity="unassisted obstruction at forward head positions",
            reference="80 deg",
            computed="80.0000 deg" if forward_rows_80 else "varies",
            status="match" if forward_rows_80 else "flagged",
            note="field-of-view floor binds for headrest offsets >= 6 cm",
        ),
        DiscrepancyRow(
            quantity="average obstruction reduction",
            reference="41.37 %",
            computed=f"{reduction:.4f} %",
            status="match" if abs(reduction - 41.37) <= 5.0 else "flagged",
            note="grid-dependent: the published sweep grid is unspecified",
        ),
    ]
    checks = []
    for idx in _sample_indices(len(sweep.rows)):
        row = sweep.rows[idx]
        driver_row = replace(driver, headrest_offset=row.x)
        geometric = obstruction.forward_obstruction(geom, driver_row).geometric.degrees
        scene = oracle.Scene.forward(geom, driver_row)
        checks.append(
            _fan_check(
                f"forward_geometric@H0={row.x:g}",
                scene,
                scene.eyes,
                geometric,
                rays,
                seed + idx,
                {"headrest_offset": row.x},
            )
        )
    return ReproBundle(
        figure_id="fig22",
        sweep=sweep,
        experiment=None,
        oracle_checks=checks,
        discrepancies=discrepancies,
        notes=["fan cross-checks compare the geometric (pre-floor) angle"],
    )


def _reproduce_fig25(geom, driver, seed) -> ReproBundle:
    sweep = sweep_shift(geom, driver)
    cols = sweep.value_columns
    ordering_holds = True
    positive_reductions = True
    for row in sweep.rows:
        vals = [row.values[c] for c in cols]
        if any(v is None for v in vals):
            continue
        if not vals[2] <= vals[1] <= vals[0]:
            ordering_holds = False
        if not (vals[0] - vals[1] > 0.0 and vals[0] - vals[2] > 0.0):
            positive_reductions = False
    red30 = sweep.summary[f"avg_reduction_pct[{cols[1]}/{cols[0]}]"]
    red457 = sweep.summary[f"avg_reduction_pct[{cols[2]}/{cols[0]}]"]
    discrepancies = [
        DiscrepancyRow(
            quantity="average shift reduction, 30 deg film",
            reference="58.11 %",
            computed=f"{red30:.4f} %",
            status="match" if abs(red30 - 58.11) <= 5.0 else "flagged",
            note="grid-dependent: the published sweep grid is unspecified",
        ),
        DiscrepancyRow(
            quantity="average shift reduction, 45.7 deg film",
            reference="79.85 %",
            computed=f"{red457:.4f} %",
            status="match" if abs(red457 - 79.85) <= 5.0 else "flagged",
            note="grid-dependent: the published sweep grid is unspecified",
        ),
        DiscrepancyRow(
            quantity="pointwise shift ordering (45.7 <= 30 <= none)",
            reference="holds",
            computed="holds" if ordering_holds else "violated",
            status="match" if ordering_holds else "flagged",
        ),
        DiscrepancyRow(
            quantity="pointwise shift reductions",
            reference="positive at every grid point",
            computed="all positive" if positive_reductions else "not all positive",
            status="match" if positive_reductions else "flagged",
        ),
    ]
    checks = []
    deflections = DEFAULT_SHIFT_DEFLECTIONS
    for k, idx in enumerate(_sample_indices(len(sweep.rows), want=10)):
        if len(checks) >= 5:
            break
        row = sweep.rows[idx]
        mu = deflections[k % len(deflections)]
        driver_row = replace(driver, headrest_offset=row.x)
        closed = row.values[f"shift[mu={mu:g}]"]
        if closed is None:
            continue
        scene = oracle.Scene.turned(geom, driver_row)
        try:
            target = headmotion.first_crossing(geom, driver_row)
            measured = oracle.bisect_shift(
                scene, driver_row, Angle.from_degrees(mu), target
            )
        except GeometryError:
            continue
        checks.append(
            oracle.OracleReport(
                quantity=f"shift[mu={mu:g}]@H0={row.x:g}",
                measured=measured,
                closed_form=closed,
                unit="cm",
                seed=seed,
                context={"headrest_offset": row.x, "deflection_deg": mu},
            )
        )
    return ReproBundle(
        figure_id="fig25",
        sweep=sweep,
        experiment=None,
        oracle_checks=checks,
        discrepancies=discrepancies,
        notes=[
            "x axis sweeps the headrest offset; the published axis variable is unstated",
            "bisection cross-checks compare against the quantized emitted rows",
        ],
    )


def _reproduce_experiment(geom, driver, rays, seed) -> ReproBundle:
    rec = oracle.reconstruct_experiment(geom, driver, unaided_cm=35.0, aided_cm=105.0)
    computed_descent = mirror.sightline_angle(geom, driver)
    mu = rec.inferred_deflection.degrees
    discrepancies = [
        DiscrepancyRow(
            quantity="inferred film deflection",
            reference="45.7 deg",
            computed=f"{mu:.4f} deg",
            status="match" if abs(mu - 45.7) <= 2.0 else "flagged",
            note="exact 2D reconstruction from the 35/105 cm sheet intercepts",
        ),
        DiscrepancyRow(
            quantity="sheet intercept separation",
            reference="70 cm",
            computed=f"{rec.ab_distance:.4f} cm",
            status="match" if rec.ab_distance == 70.0 else "flagged",
            note="exact by construction; only the intercept difference is physical",
        ),
        DiscrepancyRow(
            quantity="mirror sight line descent",
            reference="10.3 deg (measured)",
            computed=f"{computed_descent.degrees:.4f} deg",
            status="flagged",
            note="the stated parameters yield the computed value through the "
            "mirror construction; the measured line is used for sheet placement",
        ),
    ]
    for item in oracle.sheet_chain_report():
        discrepancies.append(
            DiscrepancyRow(
                quantity=f"printed chain: {item['quantity']}",
                reference=f"{item['printed']:g}",
                computed=f"{item['recomputed']:g}",
                status="flagged",
                note=item["note"],
            )
        )
    forward_scene = oracle.Scene.forward(geom, driver)
    geometric = obstruction.forward_obstruction(geom, driver).geometric.degrees
    checks = [
        _fan_check(
            "forward_geometric@experiment",
            forward_scene,
            forward_scene.eyes,
            geometric,
            rays,
            seed,
            {"headrest_offset": driver.headrest_offset},
        )
    ]
    return ReproBundle(
        figure_id="experiment",
        sweep=None,
        experiment=rec,
        oracle_checks=checks,
        discrepancies=discrepancies,
        notes=[
            "the sheet hangs along the measured sight line; its zero reference is "
            "fitted, and only the 70 cm intercept difference carries information",
            "the printed trigonometric chain is reported verbatim, not asserted",
        ],
    )


DEFAULT_VERIFY_TOLERANCES = {
    "mirror_descent_rad": 1e-9,
    "forward_deg": 0.1,
    "forward_deflected_deg": 0.1,
    "turned_deg": 0.1,
    "shift_cm": 1e-6,
    "shift_deflected_cm": 1e-6,
}


@dataclass
class VerificationReport:
    payload: dict

    @property
    def ok(self) -> bool:
        return bool(self.payload["pass"])

    def to_json(self) -> str:
        return json.dumps(self.payload, sort_keys=True, indent=2) + "\n"


def run_verification(
    seed: int = 0,
    trials: int = 200,
    rays: int = 20_000,
    tolerances: dict[str, float] | None = None,
) -> VerificationReport:
    """Closed forms versus the brute-force oracle over random scenes.

    Deterministic given (seed, trials, rays): every random draw comes from a
    single seeded generator in a fixed order.  Metrics whose preconditions a
    scene fails to meet (blocked mirror glance, shift outside the bisection
    bracket) are skipped and counted.
    """
    if trials < 1:
        raise DomainError(f"need at least one trial, got {trials}")
    if rays < 1000:
        raise DomainError(f"need at least 1000 rays, got {rays}")
    tolerances = dict(DEFAULT_VERIFY_TOLERANCES if tolerances is None else tolerances)
    rng = np.random.default_rng(seed)
    stats: dict[str, dict] = {
        name: {"count": 0, "skipped": 0, "worst_abs_error": 0.0, "worst_context": None}
        for name in tolerances
    }

    def record(name: str, measured: float, closed: float, context: dict) -> None:
        err = abs(measured - closed)
        entry = stats[name]
        entry["count"] += 1
        if err > entry["worst_abs_error"]:
            entry["worst_abs_error"] = err
            entry["worst_context"] = context

    for trial in range(trials):
        geom, driver = oracle.random_configuration(rng)
        eye_x = float(
            rng.uniform(-geom.pillar_width, 2.0 * geom.pillar_width + driver.pupil_gap)
        )
        mu_frac = float(rng.uniform(0.05, 0.95))
        shift_mu_deg = float(rng.uniform(5.0, 50.0))
        fan_seed = int(rng.integers(2**31))
        context = {
            "trial": trial,
            "pillar_width": round(geom.pillar_width, 4),
            "pillar_offset": round(geom.pillar_offset, 4),
            "headrest_offset": round(driver.headrest_offset, 4),
            "pupil_gap": round(driver.pupil_gap, 4),
        }

        # Mirror line: law-of-reflection trace vs the closed-form descent.
        closed_descent = mirror.sightline_angle(geom, driver)
        turned_scene = oracle.Scene.turned(geom, driver, right_eye_x=eye_x)
        right_eye = forward_pupils(driver)[1]
        forward_scene = oracle.Scene.forward(geom, driver)
        try:
            traced = oracle.trace_reflected_line(forward_scene, right_eye)
            record(
                "mirror_descent_rad",
                oracle.measured_descent(traced).radians,
                closed_descent.radians,
                context,
            )
        except GeometryError:
            stats["mirror_descent_rad"]["skipped"] += 1

        # Forward (monocular) obstruction, bare and deflected.
        forward = obstruction.forward_obstruction(geom, driver)
        measured = oracle.fan_trace_obstruction(
            forward_scene, n_rays=rays, seed=fan_seed
        )
        record("forward_deg", measured.degrees, forward.geometric.degrees, context)

        mu_cap = min(50.0, forward.geometric.degrees - 5.0)
        if mu_cap > 0.0:
            mu_deg = mu_frac * mu_cap
            deflected_scene = oracle.Scene.forward(
                geom, driver, deflector=Deflector.from_degrees(mu_deg)
            )
            measured = oracle.fan_trace_obstruction(
                deflected_scene, n_rays=rays, seed=fan_seed + 1
            )
            record(
                "forward_deflected_deg",
                measured.degrees,
                forward.geometric.degrees - mu_deg,
                {**context, "deflection_deg": round(mu_deg, 4)},
            )
        else:
            stats["forward_deflected_deg"]["skipped"] += 1

        # Turned-head (binocular) obstruction at a random eye position.
        turned = obstruction.turned_obstruction(
            eye_x,
            geom.pillar_width,
            driver.resolved_pillar_distance(geom),
            driver.pupil_gap,
        )
        measured = oracle.fan_trace_obstruction(
            turned_scene, n_rays=rays, seed=fan_seed + 2
        )
        record(
            "turned_deg",
            measured.degrees,
            turned.effective.degrees,
            {**context, "right_eye_x": round(eye_x, 4)},
        )

        # Head shifts: closed forms vs bisection on the construction.
        default_scene = oracle.Scene.turned(geom, driver)
        try:
            target = headmotion.first_crossing(geom, driver)
            closed_shift = headmotion.required_shift(geom, driver)
            measured_shift = oracle.bisect_shift(
                default_scene, driver, Angle.from_degrees(0.0), target
            )
            record("shift_cm", measured_shift, closed_shift.shift, context)
        except GeometryError:
            stats["shift_cm"]["skipped"] += 1
        try:
            target = headmotion.first_crossing(geom, driver)
            closed_shift = headmotion.required_shift_deflected(
                geom, driver, Deflector.from_degrees(shift_mu_deg)
            )
            measured_shift = oracle.bisect_shift(
                default_scene, driver, Angle.from_degrees(shift_mu_deg), target
            )
            record(
                "shift_deflected_cm",
                measured_shift,
                closed_shift.shift,
                {**context, "deflection_deg": round(shift_mu_deg, 4)},
            )
        except GeometryError:
            stats["shift_deflected_cm"]["skipped"] += 1

    metrics = {}
    all_pass = True
    for name, entry in stats.items():
        passed = entry["worst_abs_error"] <= tolerances[name]
        all_pass = all_pass and passed
        metrics[name] = {
            "tolerance": tolerances[name],
            "count": entry["count"],
            "skipped": entry["skipped"],
            "worst_abs_error": entry["worst_abs_error"],
            "worst_context": entry["worst_context"],
            "pass": passed,
        }
    payload = {
        "seed": seed,
        "trials": trials,
        "rays": rays,
        "metrics": metrics,
        "pass": all_pass,
    }
    return VerificationReport(payload)
