"""Forward head displacement that eliminates the turned-head blind spot.

The driver starts with the head on the headrest.  The left eye's sight line
through the pillar's reference edge crosses the mirror sight line at some
point; moving the head forward until the right eye's sight line through the
pillar's forward edge passes through the same point closes the gap between
pillar shadow and mirror coverage.  A window deflector film bends that final
sight line rearward at the window plane, shrinking the required movement.

All turned-head constructions anchor the pillar plane at the single lateral
distance d (``DriverModel.pillar_distance``, defaulting to the vehicle's
pillar offset).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import mirror
from .scene import (
    Angle,
    DegenerateGeometryError,
    Deflector,
    DriverModel,
    ParallelLinesError,
    Point2,
    SightLine,
    VehicleGeometry,
    deflect,
    turned_eyes,
)


@dataclass(frozen=True)
class ShiftResult:
    """Required right-eye position and head displacement.

    ``crossing`` is where the first-position sight line meets the mirror
    sight line; ``eye_x`` the right-eye x that routes the final sight line
    through it; ``shift`` the displacement from the default position
    (negative when the head is already forward enough; never clamped).
    """

    crossing: Point2
    eye_x: float
    shift: float
    deflected: bool = False
    deflection: Angle | None = None


def first_sight_line(geom: VehicleGeometry, driver: DriverModel) -> SightLine:
    """First-position sight line: left eye through the pillar reference edge."""
    d = driver.resolved_pillar_distance(geom)
    left, _ = turned_eyes(driver)
    return SightLine(left, Angle(math.atan2(d, -left.x)))


def final_sight_line(
    geom: VehicleGeometry, driver: DriverModel, result: ShiftResult
) -> SightLine:
    """Second-position sight line beyond the window plane.

    Runs from the shifted right eye through the pillar's forward edge; when
    the result is deflected the direction is rotated at that edge, where the
    film sits on the window.
    """
    d = driver.resolved_pillar_distance(geom)
    edge = Point2(geom.pillar_width, d)
    direction = Angle(math.atan2(d, geom.pillar_width - result.eye_x))
    if result.deflected and result.deflection is not None:
        direction = deflect(direction, result.deflection)
    return SightLine(edge, direction)


def first_crossing(geom: VehicleGeometry, driver: DriverModel) -> Point2:
    """Where the first-position sight line meets the mirror sight line."""
    ms = mirror.sightline(geom, driver)
    tip = ms.line.origin
    total = 2.0 * geom.mirror_angle.radians + ms.eye_angle.radians
    cot = math.cos(total) / math.sin(total)
    d = driver.resolved_pillar_distance(geom)
    e0 = driver.right_eye_default
    slope = d / (driver.pupil_gap - e0)
    denom = slope + cot
    if abs(denom) <= 1e-12:
        raise ParallelLinesError(
            "first-position sight line is parallel to the mirror sight line"
        )
    x0 = (tip.x * cot + tip.y - d) / denom
    y0 = slope * x0 + d
    return Point2(x0, y0)


def required_shift(geom: VehicleGeometry, driver: DriverModel) -> ShiftResult:
    """Minimal forward head shift without a deflector film."""
    crossing = first_crossing(geom, driver)
    x0 = crossing.x
    if abs(x0) <= 1e-12:
        raise DegenerateGeometryError(
            "sight lines cross on the pillar reference edge (x0 = 0)"
        )
    w = geom.pillar_width
    e0 = driver.right_eye_default
    eye_x = w + (x0 - w) * (e0 - driver.pupil_gap) / x0
    return ShiftResult(crossing=crossing, eye_x=eye_x, shift=eye_x - e0)


def required_shift_deflected(
    geom: VehicleGeometry, driver: DriverModel, deflector: Deflector
) -> ShiftResult:
    """Minimal forward head shift with the deflector film assisting.

    At zero deflection this returns exactly what :func:`required_shift`
    returns, in every field.
    """
    mu = deflector.angle.radians
    if mu == 0.0:
        return required_shift(geom, driver)
    crossing = first_crossing(geom, driver)
    x0 = crossing.x
    if abs(x0) <= 1e-12:
        raise DegenerateGeometryError(
            "sight lines cross on the pillar reference edge (x0 = 0)"
        )
    w = geom.pillar_width
    d = driver.resolved_pillar_distance(geom)
    e0 = driver.right_eye_default
    tan_mu = math.tan(mu)
    ratio = d * x0 / ((x0 - w) * (driver.pupil_gap - e0))
    denom = ratio - tan_mu
    if abs(denom) <= 1e-12:
        raise DegenerateGeometryError(
            "deflection angle alone closes the gap; the final sight line "
            "cannot be anchored at a finite eye position"
        )
    eye_x = w - (d + tan_mu * d * ratio) / denom
    return ShiftResult(
        crossing=crossing,
        eye_x=eye_x,
        shift=eye_x - e0,
        deflected=True,
        deflection=deflector.angle,
    )


def closure_residual(
    geom: VehicleGeometry, driver: DriverModel, result: ShiftResult
) -> float:
    """Distance from the crossing point to the final (possibly deflected)
    sight line; zero for a correct solution."""
    return final_sight_line(geom, driver, result).perpendicular_distance(
        result.crossing
    )
