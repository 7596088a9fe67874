"""Canonical coordinate frame, core domain types, and primitive 2D ray operations.

Every other module works in the single frame documented by :data:`FRAME_NOTE`.
Angles are stored in radians internally and reported in degrees at all
external boundaries (CLI, files, reports).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

TWO_PI = 2.0 * math.pi

FRAME_NOTE = """\
Canonical frame (used everywhere, all lengths in cm):

  * x axis: the vehicle's longitudinal direction.  Origin at the B-pillar's
    reference (rearmost) edge on the window line; +x toward the vehicle front.
    The pillar occupies x in [0, W] along the window line.
  * y axis: lateral.  Origin on the seat/headrest centerline; +y toward the
    driver-side window.  The window line (inner pillar face) lies at y = h.
  * Forward-facing pupils sit at (H0 + b, +f/2) for the eye nearer the window
    (the driver's left eye on a left-hand-drive vehicle) and (H0 + b, -f/2)
    for the other, where b is the pupils' forward offset from the head center.
  * The side-mirror base sits at (l, p); its outer tip at
    (l - m*sin(theta), p + m*cos(theta)).
  * With the head turned 90 degrees the two pupils line up along the x axis:
    the eye line lies on y = 0, the pillar plane at y = d (d defaults to h),
    right eye at x = E and left eye at x = E - f.

Ray directions are measured counter-clockwise from the +x axis.
"""


class GeometryError(Exception):
    """Base class for all geometric failures raised by this package."""


class DomainError(GeometryError, ValueError):
    """An input is outside the mathematical domain of an operation."""


class ParallelLinesError(GeometryError):
    """Two lines required to intersect are parallel within tolerance."""


class DegenerateGeometryError(GeometryError):
    """A configuration collapses a required construction (zero legs, etc.)."""


class NoBracketError(GeometryError):
    """A root solver found no sign change inside its search bracket."""


class SightBlockedError(GeometryError):
    """A sight line that must be clear is obstructed by the pillar."""


@dataclass(frozen=True)
class Angle:
    """A plane angle stored in radians.

    Directional angles are normalized to [0, 360) degrees via
    :meth:`normalized`; angle differences are mapped to (-180, 180] via
    :meth:`signed`.
    """

    radians: float

    @classmethod
    def from_degrees(cls, degrees: float) -> "Angle":
        return cls(math.radians(degrees))

    @property
    def degrees(self) -> float:
        return math.degrees(self.radians)

    def normalized(self) -> "Angle":
        r = math.fmod(self.radians, TWO_PI)
        if r < 0.0:
            r += TWO_PI
        return Angle(r)

    def signed(self) -> "Angle":
        """Equivalent angle in (-180, 180] degrees."""
        r = self.normalized().radians
        if r > math.pi:
            r -= TWO_PI
        return Angle(r)

    def __add__(self, other: "Angle") -> "Angle":
        return Angle(self.radians + other.radians)

    def __sub__(self, other: "Angle") -> "Angle":
        return Angle(self.radians - other.radians)

    def __neg__(self) -> "Angle":
        return Angle(-self.radians)


@dataclass(frozen=True)
class Point2:
    """A point in the canonical frame (cm)."""

    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise DomainError(f"point components must be finite, got ({self.x}, {self.y})")

    def distance_to(self, other: "Point2") -> float:
        return math.hypot(other.x - self.x, other.y - self.y)


@dataclass(frozen=True)
class SightLine:
    """A ray: an origin point plus a direction angle from the +x axis."""

    origin: Point2
    direction: Angle

    def __post_init__(self) -> None:
        if not math.isfinite(self.direction.radians):
            raise DomainError("sight line direction must be finite")
        object.__setattr__(self, "direction", self.direction.normalized())

    def unit(self) -> tuple[float, float]:
        return math.cos(self.direction.radians), math.sin(self.direction.radians)

    def point_at(self, t: float) -> Point2:
        ux, uy = self.unit()
        return Point2(self.origin.x + t * ux, self.origin.y + t * uy)

    def y_at(self, x: float) -> float:
        """y of the infinite line through this ray at the given x."""
        ux, uy = self.unit()
        if abs(ux) < 1e-15:
            raise DegenerateGeometryError("line is vertical; y is not a function of x")
        return self.origin.y + (x - self.origin.x) * (uy / ux)

    def perpendicular_distance(self, point: Point2) -> float:
        """Unsigned distance from a point to the infinite line through this ray."""
        ux, uy = self.unit()
        rx, ry = point.x - self.origin.x, point.y - self.origin.y
        return abs(ux * ry - uy * rx)


# Adult interpupillary range used for soft validation of driver inputs.
PUPIL_GAP_SOFT_RANGE = (5.4, 7.4)


@dataclass(frozen=True)
class VehicleGeometry:
    """Pillar and mirror layout of one vehicle (lengths cm, angle degrees).

    Attributes
    ----------
    pillar_width:
        Cross-section width of the B-pillar along the window line (W).
    pillar_offset:
        Lateral distance from the headrest centerline to the pillar (h).
    mirror_forward:
        Longitudinal distance from the pillar reference edge to the mirror
        base (l).
    mirror_outboard:
        Lateral distance from the headrest centerline to the mirror base (p).
    mirror_length:
        Length of the side mirror (m).
    mirror_angle_deg:
        Mirror angle from the lateral axis (theta), in [0, 45).
    """

    pillar_width: float
    pillar_offset: float
    mirror_forward: float
    mirror_outboard: float
    mirror_length: float
    mirror_angle_deg: float

    def __post_init__(self) -> None:
        if self.pillar_width <= 0.0:
            raise DomainError(f"pillar_width must be > 0, got {self.pillar_width}")
        if self.pillar_offset <= 0.0:
            raise DomainError(f"pillar_offset must be > 0, got {self.pillar_offset}")
        if self.mirror_forward <= 0.0:
            raise DomainError(f"mirror_forward must be > 0, got {self.mirror_forward}")
        if self.mirror_outboard <= 0.0:
            raise DomainError(f"mirror_outboard must be > 0, got {self.mirror_outboard}")
        if self.mirror_length < 0.0:
            raise DomainError(f"mirror_length must be >= 0, got {self.mirror_length}")
        if not 0.0 <= self.mirror_angle_deg < 45.0:
            raise DomainError(
                f"mirror_angle_deg must be in [0, 45), got {self.mirror_angle_deg}"
            )

    @property
    def mirror_angle(self) -> Angle:
        return Angle.from_degrees(self.mirror_angle_deg)


@dataclass(frozen=True)
class DriverModel:
    """Driver head/eye layout (lengths cm).

    Attributes
    ----------
    pupil_gap:
        Interpupillary distance (f).  Values outside the adult range
        [5.4, 7.4] cm only warn; f <= 0 or f >= 2g is rejected.
    head_to_pupil:
        Distance from the head center (back of head) to either pupil (g).
    headrest_offset:
        Longitudinal distance from the pillar reference edge to the headrest
        center (H0).  May be negative for head positions rear of the pillar.
    pillar_distance:
        Perpendicular eye-line-to-pillar distance in the turned-head model
        (d).  ``None`` means "use the vehicle's pillar_offset"; supplying an
        independent value is experimental.
    """

    pupil_gap: float
    head_to_pupil: float
    headrest_offset: float
    pillar_distance: float | None = None

    def __post_init__(self) -> None:
        if self.pupil_gap <= 0.0:
            raise DomainError(f"pupil_gap must be > 0, got {self.pupil_gap}")
        if self.pupil_gap >= 2.0 * self.head_to_pupil:
            raise DomainError(
                f"pupil_gap {self.pupil_gap} must be < twice head_to_pupil "
                f"{self.head_to_pupil}"
            )
        lo, hi = PUPIL_GAP_SOFT_RANGE
        if not lo <= self.pupil_gap <= hi:
            warnings.warn(
                f"pupil_gap {self.pupil_gap} cm is outside the adult range "
                f"[{lo}, {hi}] cm",
                stacklevel=2,
            )
        if self.pillar_distance is not None and self.pillar_distance <= 0.0:
            raise DomainError(
                f"pillar_distance must be > 0, got {self.pillar_distance}"
            )

    @property
    def pupil_forward(self) -> float:
        """Forward offset b of the pupils from the head center."""
        return pupil_offset(self.head_to_pupil, self.pupil_gap)

    @property
    def right_eye_default(self) -> float:
        """Turned-head right-eye x coordinate E0 in the default position."""
        return self.headrest_offset + (self.pupil_forward + self.pupil_gap) / 2.0

    def resolved_pillar_distance(self, geom: VehicleGeometry) -> float:
        return (
            self.pillar_distance
            if self.pillar_distance is not None
            else geom.pillar_offset
        )


@dataclass(frozen=True)
class Deflector:
    """A refractive film on the driver-side window, modeled as a constant
    angular deflection applied to sight lines at the window plane."""

    angle: Angle

    def __post_init__(self) -> None:
        if not 0.0 <= self.angle.degrees < 90.0:
            raise DomainError(
                f"deflection angle must be in [0, 90) degrees, got {self.angle.degrees}"
            )

    @classmethod
    def from_degrees(cls, degrees: float) -> "Deflector":
        return cls(Angle.from_degrees(degrees))


@dataclass(frozen=True)
class FieldOfView:
    """Fixed human field-of-view constants.

    ``monocular_floor_deg`` is the smallest unassisted monocular obstruction
    angle: with a nominal 120-degree viewing angle, peripheral vision extends
    10 degrees past straight-left, leaving 80 degrees toward straight-back
    that a forward-facing eye can never cover.
    """

    total_deg: float = 120.0
    monocular_floor_deg: float = 80.0

    def __post_init__(self) -> None:
        if self.monocular_floor_deg != 80.0:
            raise DomainError("monocular floor is a fixed 80-degree constant")


DEFAULT_FOV = FieldOfView()


def pupil_offset(head_to_pupil: float, pupil_gap: float) -> float:
    """Forward offset of the pupils from the head center.

    The two pupils and the head center form an isosceles triangle with equal
    sides ``head_to_pupil`` and base ``pupil_gap``, so the offset is the
    triangle's height: sqrt(g^2 - (f/2)^2).
    """
    if head_to_pupil <= 0.0 or pupil_gap < 0.0:
        raise DomainError(
            f"need head_to_pupil > 0 and pupil_gap >= 0, got "
            f"({head_to_pupil}, {pupil_gap})"
        )
    if pupil_gap >= 2.0 * head_to_pupil:
        raise DomainError(
            f"pupil_gap {pupil_gap} must be < twice head_to_pupil {head_to_pupil}"
        )
    return math.sqrt(head_to_pupil * head_to_pupil - 0.25 * pupil_gap * pupil_gap)


def forward_pupils(driver: DriverModel) -> tuple[Point2, Point2]:
    """Forward-facing pupil positions (window-side eye first)."""
    x = driver.headrest_offset + driver.pupil_forward
    half = driver.pupil_gap / 2.0
    return Point2(x, half), Point2(x, -half)


def turned_eyes(driver: DriverModel, right_eye_x: float | None = None) -> tuple[Point2, Point2]:
    """Turned-head eye positions on the y = 0 eye line (left eye first)."""
    e = driver.right_eye_default if right_eye_x is None else right_eye_x
    return Point2(e - driver.pupil_gap, 0.0), Point2(e, 0.0)


def mirror_base(geom: VehicleGeometry) -> Point2:
    return Point2(geom.mirror_forward, geom.mirror_outboard)


def mirror_tip(geom: VehicleGeometry) -> Point2:
    th = geom.mirror_angle.radians
    return Point2(
        geom.mirror_forward - geom.mirror_length * math.sin(th),
        geom.mirror_outboard + geom.mirror_length * math.cos(th),
    )


PARALLEL_CROSS_TOLERANCE = 1e-12


def _line_key(line: SightLine) -> tuple[float, float, float]:
    return line.origin.x, line.origin.y, line.direction.radians


def intersect_lines(a: SightLine, b: SightLine) -> Point2:
    """Intersection of the two infinite lines through the given rays.

    Raises :class:`ParallelLinesError` when the cross product of the unit
    directions is below 1e-12.  The computation is carried out in a canonical
    argument order so that ``intersect_lines(a, b)`` and
    ``intersect_lines(b, a)`` are bit-for-bit identical.
    """
    if _line_key(b) < _line_key(a):
        a, b = b, a
    rx, ry = a.unit()
    sx, sy = b.unit()
    denom = rx * sy - ry * sx
    if abs(denom) <= PARALLEL_CROSS_TOLERANCE:
        raise ParallelLinesError(
            f"lines are parallel within tolerance (cross product {denom:.3e})"
        )
    qpx = b.origin.x - a.origin.x
    qpy = b.origin.y - a.origin.y
    t = (qpx * sy - qpy * sx) / denom
    return Point2(a.origin.x + t * rx, a.origin.y + t * ry)


def reflect_direction(incoming: Angle, mirror_normal: Angle) -> Angle:
    """Reflect a ray's travel direction off a mirror with the given normal.

    ``incoming`` is the direction the ray travels toward the mirror and the
    result is the direction the reflected ray travels away from it, with the
    angle of reflection equal to the angle of incidence about the normal.
    The result is insensitive to the normal's parity (n and n + 180 degrees
    describe the same mirror surface).
    """
    out = 2.0 * mirror_normal.radians + math.pi - incoming.radians
    return Angle(out).normalized()


def deflect(direction: Angle, deflection: Angle) -> Angle:
    """Rotate a sight line by a window-film deflection angle.

    Positive deflection rotates the line further rearward (counter-clockwise),
    extending coverage on the obstruction side; a negative value undoes a
    previous deflection.  Magnitudes of 90 degrees or more are rejected.
    """
    if not abs(deflection.degrees) < 90.0:
        raise DomainError(
            f"deflection magnitude must be < 90 degrees, got {deflection.degrees}"
        )
    return (direction + deflection).normalized()
