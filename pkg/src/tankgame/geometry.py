"""Angle arithmetic, circular-arc prediction and bullet intercepts.

Conventions: every absolute direction (body, gun and radar headings, fire
angles) is in radians, counterclockwise from +x. Relative quantities that a
driver would read off the body (bearing to a target, turn requests) are
positive to the right, i.e. clockwise, so a target on the left has a
negative bearing.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

TWO_PI = 2.0 * math.pi
STRAIGHT_EPS = 1e-9          # rad; smaller central angles count as straight motion
HIT_TOLERANCE = 18.0         # half the 36-unit tank box
MAX_INTERCEPT_ITERS = 50
INTERCEPT_TOL = 1e-6


class StraightLine(ValueError):
    """Central angle too small to define an arc; use linear prediction."""


class NoIntercept(ValueError):
    """The bullet cannot catch the target on its predicted path."""


def _finite(*xs):
    for x in xs:
        if not math.isfinite(x):
            raise ValueError(f"non-finite value {x!r}")


def normalize_angle(a: float) -> float:
    """Reduce ``a`` into (-pi, pi]."""
    _finite(a)
    r = math.remainder(a, TWO_PI)
    return math.pi if r <= -math.pi else r


def angle_to(x0: float, y0: float, x1: float, y1: float) -> float:
    """Absolute direction of the point (x1, y1) seen from (x0, y0)."""
    return math.atan2(y1 - y0, x1 - x0)


def relative_bearing(heading: float, direction: float) -> float:
    """Clockwise-positive bearing of ``direction`` off ``heading``."""
    return normalize_angle(heading - direction)


def radar_sweep_back(radar_heading: float, heading: float, bearing: float) -> float:
    """Clockwise radar turn that brings the beam back onto a scanned target.

    ``bearing`` is the target bearing off the body heading, negative on the
    left. With CCW headings and a clockwise bearing the target lies at
    ``heading - bearing``, so the clockwise turn from the radar is
    ``radar_heading - heading + bearing``.
    """
    _finite(radar_heading, heading, bearing)
    return normalize_angle(radar_heading - heading + bearing)


def arc_radius(arc_length: float, central_angle: float) -> float:
    """Radius of a circle from the arc length swept and the central angle."""
    _finite(arc_length, central_angle)
    if arc_length < 0:
        raise ValueError("arc length must be non-negative")
    if abs(central_angle) <= STRAIGHT_EPS:
        raise StraightLine(central_angle)
    return arc_length / abs(central_angle)


def predict_point(radius: float, angle_cax: float) -> tuple[float, float]:
    """Point on a circle of ``radius`` at polar angle ``angle_cax`` about its centre."""
    _finite(radius, angle_cax)
    if radius <= 0:
        raise ValueError("radius must be positive")
    return radius * math.cos(angle_cax), radius * math.sin(angle_cax)


@dataclass(frozen=True)
class Pose:
    x: float
    y: float
    heading: float

    def __post_init__(self):
        _finite(self.x, self.y, self.heading)


@dataclass(frozen=True)
class ArcPath:
    """Motion on a circle: centre, radius, signed angular rate (rad/tick) and
    the current polar angle of the mover about the centre."""
    cx: float
    cy: float
    radius: float
    angular_rate: float
    phase: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("radius must be positive")
        if self.angular_rate == 0:
            raise ValueError("a turning path needs a non-zero angular rate")

    @property
    def speed(self) -> float:
        return abs(self.angular_rate) * self.radius

    def position(self, t: float) -> tuple[float, float]:
        x, y = predict_point(self.radius, self.phase + self.angular_rate * t)
        return self.cx + x, self.cy + y


@dataclass(frozen=True)
class LinePath:
    """Straight motion from (x, y) along ``direction`` at ``speed`` per tick."""
    x: float
    y: float
    direction: float
    speed: float

    def position(self, t: float) -> tuple[float, float]:
        d = self.speed * t
        return self.x + d * math.cos(self.direction), self.y + d * math.sin(self.direction)


def fit_arc(p_prev: Pose, p_now: Pose, dt: float, speed: float | None = None):
    """Recover the circle a mover is on from two poses ``dt`` ticks apart.

    The heading change equals the central angle swept (tangents at B and C
    meet the radii at right angles). The arc length is ``|speed| * dt`` when
    ``speed`` is given, otherwise it is derived from the chord, which is
    exact for constant-rate turning. Returns an :class:`ArcPath`, or a
    :class:`LinePath` when the heading change is below ``STRAIGHT_EPS``.
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    theta = normalize_angle(p_now.heading - p_prev.heading)
    dx, dy = p_now.x - p_prev.x, p_now.y - p_prev.y
    chord = math.hypot(dx, dy)
    if abs(theta) <= STRAIGHT_EPS:
        if speed is not None:
            v = abs(speed)
            direction = p_now.heading if speed >= 0 else p_now.heading + math.pi
        else:
            v = chord / dt
            direction = math.atan2(dy, dx) if chord > 0 else p_now.heading
        return LinePath(p_now.x, p_now.y, normalize_angle(direction), v)
    if chord == 0 if speed is None else speed == 0:
        # turning on the spot
        return LinePath(p_now.x, p_now.y, p_now.heading, 0.0)
    if speed is not None:
        radius = arc_radius(abs(speed) * dt, theta)
    else:
        radius = chord / (2.0 * math.sin(abs(theta) / 2.0))
    if radius <= 0:
        raise StraightLine(theta)
    # centre sits on the chord's perpendicular bisector, on the turning side
    mx, my = p_prev.x + dx / 2.0, p_prev.y + dy / 2.0
    half_chord = chord / 2.0
    offset = math.sqrt(max(radius * radius - half_chord * half_chord, 0.0))
    if chord > 0:
        nx, ny = -dy / chord, dx / chord          # left normal of the chord
    else:
        nx, ny = -math.sin(p_now.heading), math.cos(p_now.heading)
    side = 1.0 if theta > 0 else -1.0
    cx, cy = mx + side * offset * nx, my + side * offset * ny
    phase = math.atan2(p_now.y - cy, p_now.x - cx)
    return ArcPath(cx, cy, radius, theta / dt, phase)


@dataclass(frozen=True)
class Intercept:
    fire_angle: float
    time_to_hit: float


def _quadratic_intercept(sx, sy, path: LinePath, bullet_speed):
    ux = path.speed * math.cos(path.direction)
    uy = path.speed * math.sin(path.direction)
    dx, dy = path.x - sx, path.y - sy
    a = ux * ux + uy * uy - bullet_speed * bullet_speed
    b = 2.0 * (dx * ux + dy * uy)
    c = dx * dx + dy * dy
    if c == 0:
        return 0.0
    if abs(a) < 1e-12:
        if b >= 0:
            raise NoIntercept("target is not closing and moves at bullet speed")
        return -c / b
    disc = b * b - 4 * a * c
    if disc < 0:
        raise NoIntercept("target outruns the bullet")
    r = math.sqrt(disc)
    roots = sorted(t for t in ((-b - r) / (2 * a), (-b + r) / (2 * a)) if t > 0)
    if not roots:
        raise NoIntercept("no positive intercept time")
    return roots[0]


def solve_intercept(shooter: tuple[float, float], target: Pose, target_speed: float,
                    path, bullet_speed: float) -> Intercept:
    """Fire angle and flight time (ticks) to hit a target on its predicted path.

    ``path`` is an :class:`ArcPath`, a :class:`LinePath` or ``None`` (straight
    motion along ``target.heading`` at signed ``target_speed``). Straight
    paths use the closed-form quadratic; arcs use the fixed-point iteration
    ``t <- |target(t) - shooter| / bullet_speed``.
    """
    if not bullet_speed > 0:
        raise ValueError("bullet speed must be positive")
    sx, sy = shooter
    if path is None:
        direction = target.heading if target_speed >= 0 else target.heading + math.pi
        path = LinePath(target.x, target.y, direction, abs(target_speed))
    if isinstance(path, LinePath):
        t = _quadratic_intercept(sx, sy, path, bullet_speed)
        px, py = path.position(t)
        return Intercept(math.atan2(py - sy, px - sx), t)

    t = math.hypot(target.x - sx, target.y - sy) / bullet_speed
    for _ in range(MAX_INTERCEPT_ITERS):
        px, py = path.position(t)
        t_new = math.hypot(px - sx, py - sy) / bullet_speed
        if abs(t_new - t) * bullet_speed < INTERCEPT_TOL:
            px, py = path.position(t_new)
            return Intercept(math.atan2(py - sy, px - sx), t_new)
        t = t_new
    raise NoIntercept("fixed-point iteration did not converge")
