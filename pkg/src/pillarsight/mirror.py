"""Side-mirror geometry: the outermost reflected sight line and its angles.

The driver glancing at the mirror sweeps their eyes to its edges; the widest
rearward coverage comes from the off-window (right) eye reflected at the
mirror's outer tip.  That reflected line bounds the area the mirror can show,
so it is the only mirror line this model needs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .scene import (
    Angle,
    DegenerateGeometryError,
    DriverModel,
    Point2,
    SightLine,
    VehicleGeometry,
    forward_pupils,
    mirror_tip,
)


@dataclass(frozen=True)
class MirrorSightLine:
    """The outer reflected sight line of the side mirror.

    ``line`` is anchored at the mirror tip and oriented so that its direction
    angle is the negation of ``angle`` (the line descends toward +x when the
    descent angle is positive).  ``eye_angle`` is the eye-to-tip angle the
    reflection was built from.
    """

    line: SightLine
    angle: Angle
    eye_angle: Angle

    def y_at(self, x: float) -> float:
        """Evaluate the infinite mirror line at a longitudinal position."""
        tip = self.line.origin
        k = self.angle.radians
        if abs(math.cos(k)) < 1e-15:
            raise DegenerateGeometryError("mirror sight line is vertical")
        return tip.y - math.tan(k) * (x - tip.x)

    def descent_slope(self) -> float:
        """Slope dy/dx of the line (negative tangent of the descent angle)."""
        return -math.tan(self.angle.radians)


def eye_to_tip_angle(geom: VehicleGeometry, driver: DriverModel) -> Angle:
    """Angle between the lateral axis and the right-eye-to-mirror-tip segment.

    Computed from the right triangle the right eye makes with the mirror tip:
    arctan of the longitudinal leg over the lateral leg.  Valid only while the
    mirror tip is forward of and outboard of the eye, where the result lies in
    (0, 90) degrees.
    """
    tip = mirror_tip(geom)
    _, right = forward_pupils(driver)
    run = tip.x - right.x
    rise = tip.y - right.y
    if run <= 0.0:
        raise DegenerateGeometryError(
            f"mirror tip is not forward of the eye (longitudinal leg {run:.4g} cm)"
        )
    if rise <= 0.0:
        raise DegenerateGeometryError(
            f"mirror tip is not outboard of the eye (lateral leg {rise:.4g} cm)"
        )
    return Angle(math.atan2(run, rise))


def sightline_angle(geom: VehicleGeometry, driver: DriverModel) -> Angle:
    """Descent angle of the outer reflected sight line below the +x axis.

    Equals 90 degrees minus the eye-to-tip angle minus twice the mirror angle.
    Negative values (mirror aimed far outward) are valid and propagate.
    """
    tau = eye_to_tip_angle(geom, driver)
    return Angle(0.5 * math.pi - tau.radians - 2.0 * geom.mirror_angle.radians)


def sightline(geom: VehicleGeometry, driver: DriverModel) -> MirrorSightLine:
    """The outer reflected sight line, anchored at the mirror tip."""
    tau = eye_to_tip_angle(geom, driver)
    total = 2.0 * geom.mirror_angle.radians + tau.radians
    if abs(math.sin(total)) < 1e-12:
        raise DegenerateGeometryError(
            "mirror line is degenerate (eye-to-tip angle plus twice the mirror "
            "angle is a multiple of 180 degrees)"
        )
    kappa = Angle(0.5 * math.pi - total)
    line = SightLine(mirror_tip(geom), Angle(-kappa.radians))
    return MirrorSightLine(line=line, angle=kappa, eye_angle=tau)
