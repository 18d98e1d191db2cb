"""Dynamics of solution directions y = x/||x|| on the unit circle.

For x' = A x the direction obeys y' = G(y) = (A - (Ay.y) I) y, whose
equilibria are the eigendirections of A.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum

from config.constants import IntegratorConfig, ScheduleConfig, ToleranceConfig
from core.errors import InvalidParameter, NotMetzler, NotUnit
from core.rootfinding import bisect
from geometry.matrices import Mat2, is_metzler
from geometry.transforms import AngleUtils
from geometry.vectors import Vec2
from systems.propagation import Trajectory


class Rotation(Enum):
    CLOCKWISE = "clockwise"
    COUNTERCLOCKWISE = "counterclockwise"
    FIXED = "fixed"


@dataclass(frozen=True)
class AngleInterval:
    """Open interval of polar angles inside [0, pi/2]; lo and hi are NaN when empty."""

    lo: float
    hi: float
    empty: bool

    @staticmethod
    def empty_interval() -> 'AngleInterval':
        return AngleInterval(math.nan, math.nan, True)

    def contains(self, theta: float) -> bool:
        return not self.empty and self.lo < theta < self.hi

    def width(self) -> float:
        return 0.0 if self.empty else self.hi - self.lo


def _require_unit(y: Vec2) -> None:
    if not AngleUtils.is_unit(y, ToleranceConfig.UNIT_NORM):
        raise NotUnit(f"y: {y} does not have unit length (|y| = {y.length():.17g})")


def _require_metzler(a: Mat2) -> None:
    if not is_metzler(a):
        raise NotMetzler(f"{a!r} has a non-positive off-diagonal entry")


def _require_positive_quadrant(y: Vec2) -> None:
    if not y.is_nonnegative():
        raise InvalidParameter("y", f"{y} lies outside the closed positive quadrant")


def quadratic_form(a: Mat2, y: Vec2) -> float:
    """A y . y, the radial growth rate of solutions through the unit direction y"""
    return (a @ y).dot(y)


def direction_field(a: Mat2, y: Vec2) -> Vec2:
    _require_unit(y)
    ay = a @ y
    return ay - y.scaled(ay.dot(y))


def rotation_indicator(a: Mat2, y: Vec2) -> float:
    """sigma = G(y) . D y; positive means clockwise motion of the direction."""
    return direction_field(a, y).dot(AngleUtils.clockwise_normal(y))


def rotation_sign(a: Mat2, y: Vec2) -> Rotation:
    _require_metzler(a)
    _require_unit(y)
    _require_positive_quadrant(y)

    sigma = rotation_indicator(a, y)
    if sigma > ToleranceConfig.ROTATION_SIGMA:
        return Rotation.CLOCKWISE
    if sigma < -ToleranceConfig.ROTATION_SIGMA:
        return Rotation.COUNTERCLOCKWISE
    return Rotation.FIXED


def growth_cone(c: float) -> AngleInterval:
    """Angles where A(1)y.y = -1 + (c + 1/(4c)) sin(2 theta)/2 is positive.

    The form is unchanged by c -> 1/(4c), so the set is empty exactly for
    c in [1 - sqrt(3)/2, 1 + sqrt(3)/2].
    """
    if not (math.isfinite(c) and c > 0.0):
        raise InvalidParameter("c", f"must be a positive number, got {c}")
    lower_window = 1.0 - (ScheduleConfig.CONE_THRESHOLD - 1.0)
    if lower_window <= c <= ScheduleConfig.CONE_THRESHOLD:
        return AngleInterval.empty_interval()

    ratio = 8.0 * c / (4.0 * c * c + 1.0)
    if ratio >= 1.0:
        return AngleInterval.empty_interval()
    lo = 0.5 * math.asin(ratio)
    return AngleInterval(lo, 0.5 * math.pi - lo, False)


def cone_occupancy(tr: Trajectory, c: float) -> float:
    """Fraction of trajectory samples whose angle lies inside growth_cone(c)"""
    cone = growth_cone(c)
    if cone.empty or not tr.angles:
        return 0.0
    inside = sum(1 for theta in tr.angles if cone.contains(theta))
    return inside / len(tr.angles)


def sign_change_angle(a: Mat2) -> float:
    """theta_0 in (0, pi/2) where the direction field vanishes, i.e. the angle of the principal eigenvector."""
    _require_metzler(a)
    bracket = bisect(
        lambda theta: rotation_indicator(a, AngleUtils.direction(theta)),
        0.0, 0.5 * math.pi, ToleranceConfig.ANGLE_BISECTION_WIDTH,
    )
    return bracket.root


def _rk4_direction_step(a: Mat2, y: Vec2, h: float) -> Vec2:
    def field(z: Vec2) -> Vec2:
        az = a @ z
        return az - z.scaled(az.dot(z))

    k1 = field(y)
    k2 = field(y + k1.scaled(0.5 * h))
    k3 = field(y + k2.scaled(0.5 * h))
    k4 = field(y + k3.scaled(h))
    return (y + (k1 + k2.scaled(2.0) + k3.scaled(2.0) + k4).scaled(h / 6.0)).normalized()


def integrate_direction(a: Mat2, y0: Vec2, T: float,
                        dt: float = IntegratorConfig.DEFAULT_DIRECTION_DT) -> Trajectory:
    """RK4 on y' = G(y) from y0 over [0, T], renormalized after every step."""
    _require_metzler(a)
    _require_unit(y0)
    _require_positive_quadrant(y0)
    if not (math.isfinite(dt) and dt > 0.0):
        raise InvalidParameter("dt", f"must be positive, got {dt}")
    if not (math.isfinite(T) and T > 0.0):
        raise InvalidParameter("horizon", f"must be positive, got {T}")

    steps = max(1, math.ceil(round(T / dt, 9)))
    h = T / steps
    y = y0.normalized()
    times = [0.0]
    states = [y]
    for index in range(1, steps + 1):
        y = _rk4_direction_step(a, y, h)
        times.append(index * h)
        states.append(y)

    logging.debug(f"Direction path with {steps} steps, final angle {AngleUtils.polar_angle(y):.12f}")
    return Trajectory(
        times=times,
        states=states,
        norms=[s.length() for s in states],
        angles=[AngleUtils.polar_angle(s) for s in states],
        radial_rates=[quadratic_form(a, s) for s in states],
    )
