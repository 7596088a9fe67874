"""2D sight-line model of driver-side B-pillar vision obstruction.

The package computes mirror sight lines, forward-facing and turned-head
obstruction angles, the head motion that eliminates the blind spot, and the
effect of a refractive window film on both, all in one documented planar
frame.  Every closed form is backed by an independent brute-force oracle
(ray fans, reflection traces, bisection constructions).
"""

from .scene import (
    Angle,
    DEFAULT_FOV,
    Deflector,
    DegenerateGeometryError,
    DomainError,
    DriverModel,
    FieldOfView,
    FRAME_NOTE,
    GeometryError,
    NoBracketError,
    ParallelLinesError,
    Point2,
    SightBlockedError,
    SightLine,
    VehicleGeometry,
    deflect,
    forward_pupils,
    intersect_lines,
    mirror_base,
    mirror_tip,
    pupil_offset,
    reflect_direction,
    turned_eyes,
)
from .mirror import MirrorSightLine, eye_to_tip_angle, sightline, sightline_angle
from .obstruction import (
    EyePositionCase,
    ObstructionResult,
    classify_eyes,
    forward_obstruction,
    forward_obstruction_deflected,
    turned_obstruction,
)
from .headmotion import (
    ShiftResult,
    closure_residual,
    first_crossing,
    required_shift,
    required_shift_deflected,
)

__version__ = "0.1.0"

__all__ = [
    "Angle",
    "DEFAULT_FOV",
    "Deflector",
    "DegenerateGeometryError",
    "DomainError",
    "DriverModel",
    "EyePositionCase",
    "FieldOfView",
    "FRAME_NOTE",
    "GeometryError",
    "MirrorSightLine",
    "NoBracketError",
    "ObstructionResult",
    "ParallelLinesError",
    "Point2",
    "ShiftResult",
    "SightBlockedError",
    "SightLine",
    "VehicleGeometry",
    "classify_eyes",
    "closure_residual",
    "deflect",
    "eye_to_tip_angle",
    "first_crossing",
    "forward_obstruction",
    "forward_obstruction_deflected",
    "forward_pupils",
    "intersect_lines",
    "mirror_base",
    "mirror_tip",
    "pupil_offset",
    "reflect_direction",
    "required_shift",
    "required_shift_deflected",
    "sightline",
    "sightline_angle",
    "turned_eyes",
    "turned_obstruction",
]
