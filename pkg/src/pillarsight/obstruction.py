"""Obstruction angles: how much of the driver's view the B-pillar blocks.

Three measurements:

* forward-facing monocular obstruction (window-side eye), floored at the
  80-degree field-of-view limit;
* turned-head binocular obstruction with the five-way eye/pillar position
  classification;
* forward-facing monocular obstruction through a window deflector film.

The arctangent quotients are evaluated with the two-argument arctangent of
the actual edge-to-eye geometry, which selects the correct branch in
(0, 180) degrees for every eye position without per-case sign tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .scene import (
    Angle,
    DEFAULT_FOV,
    Deflector,
    DomainError,
    DriverModel,
    FieldOfView,
    VehicleGeometry,
)


class EyePositionCase(Enum):
    """Relative position of the two turned-head eyes and the pillar edges."""

    BOTH_BEHIND = "BothBehind"
    LEFT_BEHIND = "LeftBehind"
    BOTH_WITHIN = "BothWithin"
    RIGHT_AHEAD = "RightAhead"
    BOTH_AHEAD = "BothAhead"


@dataclass(frozen=True)
class ObstructionResult:
    """A computed obstruction angle.

    ``geometric`` is the raw branch-aware arctangent value; ``effective``
    applies the clamps (the 80-degree monocular floor, or the zero floor for
    binocular fusion).  ``clamped`` is set whenever a clamp changed the value.
    """

    geometric: Angle
    effective: Angle
    clamped: bool
    case: EyePositionCase | None = None


def forward_obstruction(
    geom: VehicleGeometry,
    driver: DriverModel,
    fov: FieldOfView = DEFAULT_FOV,
) -> ObstructionResult:
    """Monocular obstruction angle with the head facing forward.

    The window-side eye's rearward view is bounded by the sight line grazing
    the pillar's forward edge; the obstruction is the angular gap between that
    graze line and straight back.  A forward-facing eye cannot cover the last
    80 degrees of that gap regardless of geometry, so the effective value is
    floored there.
    """
    rise = geom.pillar_offset - driver.pupil_gap / 2.0
    if rise <= 0.0:
        raise DomainError(
            f"pillar_offset {geom.pillar_offset} must exceed half the pupil gap "
            f"{driver.pupil_gap / 2.0}"
        )
    run = driver.headrest_offset + driver.pupil_forward - geom.pillar_width
    geometric = math.atan2(rise, run)
    floor = math.radians(fov.monocular_floor_deg)
    clamped = geometric < floor
    return ObstructionResult(
        geometric=Angle(geometric),
        effective=Angle(max(geometric, floor)),
        clamped=clamped,
    )


def classify_eyes(
    right_eye_x: float, pillar_width: float, pupil_gap: float
) -> EyePositionCase:
    """Classify the turned-head eye pair against the pillar edges.

    Boundary positions (an eye exactly on an edge) resolve toward the
    earlier-listed, more rearward case.
    """
    if pillar_width <= 0.0 or pupil_gap <= 0.0:
        raise DomainError("pillar_width and pupil_gap must be > 0")
    e = right_eye_x
    left = e - pupil_gap
    if e < 0.0:
        return EyePositionCase.BOTH_BEHIND
    if left < 0.0:
        return EyePositionCase.LEFT_BEHIND
    if e <= pillar_width:
        return EyePositionCase.BOTH_WITHIN
    if left <= pillar_width:
        return EyePositionCase.RIGHT_AHEAD
    return EyePositionCase.BOTH_AHEAD


def turned_obstruction(
    right_eye_x: float,
    pillar_width: float,
    pillar_distance: float,
    pupil_gap: float,
) -> ObstructionResult:
    """Binocular obstruction angle with the head turned 90 degrees.

    Each eye is blocked over the angular interval its sight lines sweep across
    the pillar face; binocular fusion sees only the overlap of the two
    intervals.  That overlap is the angle from the right eye's forward-edge
    graze up to the left eye's rear-edge graze, clamped below at zero when the
    intervals are disjoint.
    """
    if pillar_distance <= 0.0:
        raise DomainError(f"pillar_distance must be > 0, got {pillar_distance}")
    if pillar_width <= 0.0 or pupil_gap <= 0.0:
        raise DomainError("pillar_width and pupil_gap must be > 0")
    d = pillar_distance
    rear_graze = math.atan2(d, pupil_gap - right_eye_x)   # left eye -> (0, d)
    fwd_graze = math.atan2(d, pillar_width - right_eye_x)  # right eye -> (W, d)
    geometric = rear_graze - fwd_graze
    return ObstructionResult(
        geometric=Angle(geometric),
        effective=Angle(max(geometric, 0.0)),
        clamped=geometric < 0.0,
        case=classify_eyes(right_eye_x, pillar_width, pupil_gap),
    )


def forward_obstruction_deflected(
    geom: VehicleGeometry,
    driver: DriverModel,
    deflector: Deflector,
    fov: FieldOfView = DEFAULT_FOV,
) -> ObstructionResult:
    """Monocular obstruction angle through the window deflector film.

    The film rotates the marginal sight line rearward by its deflection
    angle, so both the geometric and the effective obstruction shrink by
    exactly that angle.  The field-of-view floor applies to the unassisted
    view before the subtraction: the film extends coverage past what the
    bare eye could reach, but it cannot recover view the eye never had.
    """
    base = forward_obstruction(geom, driver, fov)
    mu = deflector.angle.radians
    if mu >= base.effective.radians:
        raise DomainError(
            f"deflection {deflector.angle.degrees:.4g} degrees would drive the "
            f"obstruction angle negative (unassisted effective "
            f"{base.effective.degrees:.4g} degrees)"
        )
    return ObstructionResult(
        geometric=Angle(base.geometric.radians - mu),
        effective=Angle(base.effective.radians - mu),
        clamped=base.clamped,
    )
