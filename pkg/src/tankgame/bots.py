"""Bot implementations: TestRobot and six scripted sample opponents.

All turn requests are clockwise-positive radians (see :mod:`tankgame.geometry`).
The sample opponents approximate the behaviour of the classic sample robots
they are named after; ``My-Robot`` and ``V-Robot`` are simple seek-and-shoot
variants since their originals are not documented.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .engine import DEG, BattleConfig, Bot, Command, Observation, Scan
from .gametree import RADII, GameTree, choose_radius
from .geometry import (ArcPath, LinePath, NoIntercept, Pose, fit_arc, normalize_angle,
                       radar_sweep_back, solve_intercept)


def turn_toward(current: float, desired: float) -> float:
    """Clockwise turn taking ``current`` onto ``desired``."""
    return normalize_angle(current - desired)


def clamp(x: float, limit: float) -> float:
    return max(-limit, min(limit, x))


def scan_direction(obs: Observation, scan: Scan) -> float:
    return obs.me.heading - scan.bearing


def scan_position(obs: Observation, scan: Scan) -> tuple[float, float]:
    d = scan_direction(obs, scan)
    return obs.me.x + scan.distance * math.cos(d), obs.me.y + scan.distance * math.sin(d)


class ScriptedBot(Bot):
    """Shared helpers for bots that need physics limits."""

    def reset(self, rng, config: BattleConfig):
        super().reset(rng, config)
        self.phys = config.physics

    def body_limit(self, v):
        return self.phys.max_body_turn(v)

    @property
    def gun_limit(self):
        return self.phys.max_gun_turn * DEG

    @property
    def radar_limit(self):
        return self.phys.max_radar_turn * DEG


# -- TestRobot ------------------------------------------------------------------

EPOCH_TICKS = 16
GUN_ALIGN_TOLERANCE = 2 * DEG
ASSUMED_ENEMY_BULLET_SPEED = 14.0      # power-2 shot
MISS_CAP = 40.0                        # displacement beyond this is a sure miss
PAYOFF_STEP = 10.0
MIN_CLOSING_DISTANCE = 60.0


def fire_power_for(distance: float) -> float:
    if distance < 150:
        return 3.0
    if distance < 400:
        return 2.0
    return 1.0


def arc_speed(radius: float, phys) -> float:
    """Fastest speed at which the body can still turn tightly enough for ``radius``."""
    k = radius * DEG
    return min(phys.max_velocity, k * phys.max_body_turn_base / (1.0 + k * phys.velocity_penalty))


def arc_chord(radius: float, speed: float, ticks: float) -> float:
    return 2.0 * radius * abs(math.sin(speed * ticks / (2.0 * radius)))


def threat_payoff(distance: float, phys, epoch: int = EPOCH_TICKS) -> Callable[[tuple], float]:
    """Leaf payoff for the (own radius, opponent radius) game.

    The opponent closes along its arc for one epoch, then fires head-on; our
    payoff is how far our own arc carries us from the aim point while the
    bullet flies, capped at a sure miss and discretised to 10 units.
    """
    def payoff(path):
        own, opp = path[0], path[-1]
        closed = max(MIN_CLOSING_DISTANCE,
                     distance - arc_chord(opp, arc_speed(opp, phys), epoch))
        flight = closed / ASSUMED_ENEMY_BULLET_SPEED
        miss = min(arc_chord(own, arc_speed(own, phys), flight), MISS_CAP)
        return math.floor(miss / PAYOFF_STEP) * PAYOFF_STEP
    return payoff


@dataclass
class Track:
    x: float
    y: float
    heading: float
    velocity: float
    energy: float
    tick: int
    distance: float


@dataclass
class GameCircle:
    index: int
    candidate_radii: tuple
    chosen_radius: float
    epoch_start: int


class TestRobot(ScriptedBot):
    """Alpha-beta arc planning, radar lock and arc-predictive fire."""

    name = "TestRobot"
    __test__ = False       # keep pytest from collecting the class by its name

    def __init__(self, radii=RADII, epoch: int = EPOCH_TICKS,
                 shape: GameTree | None = None, preferred_distance=(150.0, 450.0)):
        self.radii = tuple(radii)
        self.epoch = epoch
        self.shape = shape
        self.preferred = preferred_distance

    def reset(self, rng, config):
        super().reset(rng, config)
        self.tracks: dict[str, list[Track]] = {}
        self.target: str | None = None
        self.circles: list[GameCircle] = []
        self.direction = 1.0 if rng.random() < 0.5 else -1.0
        self.side = 1.0
        self.mode = "circle"

    # -- memory
    def _remember(self, obs):
        for s in obs.scans:
            x, y = scan_position(obs, s)
            hist = self.tracks.setdefault(s.target, [])
            hist.append(Track(x, y, s.heading, s.velocity, s.energy, s.tick, s.distance))
            del hist[:-2]

    def _pick_target(self, obs):
        fresh = {n: h[-1] for n, h in self.tracks.items() if obs.tick - h[-1].tick <= 16}
        if self.target in fresh and obs.tick - fresh[self.target].tick <= 1:
            return self.target
        if not fresh:
            return None
        me = obs.me
        return min(fresh, key=lambda n: (math.hypot(fresh[n].x - me.x, fresh[n].y - me.y), n))

    # -- decision
    def decide(self, obs: Observation) -> Command:
        self._remember(obs)
        for name in [n for n, h in self.tracks.items() if h and h[-1].energy <= 0]:
            del self.tracks[name]
        self.target = self._pick_target(obs)
        radar = self._radar(obs)
        velocity, body = self._move(obs)
        gun, power = self._gun(obs)
        return Command(velocity, body, gun, radar, power)

    def _radar(self, obs):
        current = [s for s in obs.scans if s.target == self.target]
        if current:
            s = current[0]
            turn = radar_sweep_back(obs.me.radar_heading, obs.me.heading, s.bearing)
            return clamp(turn, self.radar_limit)
        return self.radar_limit

    def plan_radius(self, distance: float) -> float:
        """Alpha-beta choice of the next arc radius at a game-circle boundary."""
        if self.shape is not None:
            return choose_radius(self.radii, shape=self.shape)
        return choose_radius(self.radii, threat_payoff(distance, self.phys, self.epoch), depth=2)

    def _move(self, obs):
        me = obs.me
        t = self.tracks.get(self.target, [None])[-1] if self.target else None
        if t is not None:
            dist = math.hypot(t.x - me.x, t.y - me.y)
            to_target = math.atan2(t.y - me.y, t.x - me.x)
        else:
            dist = 300.0
            to_target = math.atan2(obs.arena_height / 2 - me.y, obs.arena_width / 2 - me.x)

        if not self.circles or obs.tick - self.circles[-1].epoch_start >= self.epoch:
            radius = self.plan_radius(dist)
            self.circles.append(GameCircle(len(self.circles) + 1, self.radii, radius, obs.tick))
            self.direction = 1.0 if self.rng.random() < 0.5 else -1.0
            lo, hi = self.preferred
            if dist > hi:
                self.mode = "approach"
            elif dist < lo:
                self.mode = "retreat"
            else:
                self.mode = "circle"
            self.side = 1.0 if self.rng.random() < 0.5 else -1.0
        radius = self.circles[-1].chosen_radius
        speed = arc_speed(radius, self.phys)

        if self.mode == "circle":
            v = self.direction * speed
            body = self.side * min(speed / radius, self.body_limit(me.velocity))
        else:
            # head along the target line (or away from it), body axis either way
            want = to_target if self.mode == "approach" else to_target + math.pi
            if self.direction < 0:
                want += math.pi
            v = self.direction * self.phys.max_velocity
            body = clamp(turn_toward(me.heading, want), self.body_limit(me.velocity))
        v, body = self._avoid_walls(obs, v, body)
        return v, body

    def _avoid_walls(self, obs, v, body):
        me = obs.me
        margin = self.phys.tank_size / 2 + 24
        look = 6.0
        h = me.heading - body
        px = me.x + v * look * math.cos(h)
        py = me.y + v * look * math.sin(h)
        if margin < px < obs.arena_width - margin and margin < py < obs.arena_height - margin:
            return v, body
        # reverse and steer toward the centre
        self.direction = -self.direction
        v = -v
        cx, cy = obs.arena_width / 2, obs.arena_height / 2
        to_centre = math.atan2(cy - me.y, cx - me.x)
        want = to_centre if v > 0 else to_centre + math.pi
        body = clamp(turn_toward(me.heading, want), self.body_limit(me.velocity))
        return v, body

    def predicted_path(self, obs):
        hist = self.tracks.get(self.target) if self.target else None
        if not hist:
            return None, None
        now = hist[-1]
        pose = Pose(now.x, now.y, now.heading)
        if len(hist) < 2 or now.tick - hist[-2].tick > 8:
            return pose, None
        prev = hist[-2]
        path = fit_arc(Pose(prev.x, prev.y, prev.heading), pose, now.tick - prev.tick)
        return pose, path

    def _gun(self, obs):
        me = obs.me
        pose, path = self.predicted_path(obs)
        if pose is None:
            return 0.0, None
        track = self.tracks[self.target][-1]
        dist = math.hypot(pose.x - me.x, pose.y - me.y)
        power = min(fire_power_for(dist), max(me.energy - 0.2, 0.0))
        if power < self.phys.min_power:
            power = None
        bullet_speed = self.phys.bullet_speed(power or 1.0)
        # our own move this tick happens before the shot leaves
        sx = me.x + me.velocity * math.cos(me.heading)
        sy = me.y + me.velocity * math.sin(me.heading)
        age = obs.tick - 1 - track.tick
        try:
            if path is None:
                hit = solve_intercept((sx, sy), pose, track.velocity, None, bullet_speed)
            else:
                hit = solve_intercept((sx, sy), pose, track.velocity,
                                      _shifted(path, age), bullet_speed)
            angle = hit.fire_angle
        except NoIntercept:
            angle = math.atan2(pose.y - sy, pose.x - sx)
        need = turn_toward(me.gun_heading, angle)
        gun = clamp(need, self.gun_limit)
        fire = None
        if power and me.gun_heat == 0 and abs(need - gun) <= GUN_ALIGN_TOLERANCE:
            fire = power
        return gun, fire


def _shifted(path, ticks):
    if ticks <= 0:
        return path
    if isinstance(path, ArcPath):
        return ArcPath(path.cx, path.cy, path.radius, path.angular_rate,
                       path.phase + path.angular_rate * ticks)
    x, y = path.position(ticks)
    return LinePath(x, y, path.direction, path.speed)


# -- sample opponents -----------------------------------------------------------

class Crazy(ScriptedBot):
    """Drives on reversing arcs, fires weak shots at whatever its gun sweeps."""

    name = "Crazy"

    def reset(self, rng, config):
        super().reset(rng, config)
        self.direction = 1.0
        self.pending = 90 * DEG
        self.sign = 1.0
        self.step = 0

    def decide(self, obs):
        me = obs.me
        if obs.hit_wall:
            self.direction = -self.direction
        if abs(self.pending) < 1e-9:
            self.step += 1
            self.sign = -self.sign
            self.pending = self.sign * 180 * DEG
        turn = clamp(self.pending, self.body_limit(me.velocity))
        self.pending -= turn
        fire = 1.0 if obs.scans and me.gun_heat == 0 else None
        # gun and radar ride along with the body
        return Command(self.direction * 8.0, turn, turn, turn, fire)


class Fire(ScriptedBot):
    """Sits still spinning its gun; fires at scans, hops aside when hit."""

    name = "Fire"

    def reset(self, rng, config):
        super().reset(rng, config)
        self.dodge = 0.0
        self.dodge_turn = 0.0

    def decide(self, obs):
        me = obs.me
        if obs.hit_by and self.dodge <= 0:
            self.dodge = 50.0
            self.dodge_turn = normalize_angle(obs.hit_by[0] + 90 * DEG)
        body = 0.0
        v = 0.0
        if abs(self.dodge_turn) > 1e-9:
            body = clamp(self.dodge_turn, self.body_limit(me.velocity))
            self.dodge_turn -= body
        elif self.dodge > 0:
            v = min(8.0, self.dodge)
            self.dodge -= abs(me.velocity) if me.velocity else 1.0
        if obs.scans:
            s = min(obs.scans, key=lambda s: s.distance)
            power = 3.0 if s.distance < 50 and me.energy > 50 else 1.0
            return Command(v, body, 0.0, 0.0, power if me.gun_heat == 0 else None)
        step = 5 * DEG
        return Command(v, body, step, step, None)


class SpinBot(ScriptedBot):
    """Drives a tight constant circle, gun sweeping, hard shots on sight."""

    name = "SpinBot"
    speed = 5.0

    def decide(self, obs):
        me = obs.me
        body = self.body_limit(self.speed)
        if obs.scans:
            return Command(self.speed, body, 0.0, 0.0, 3.0 if me.gun_heat == 0 else None)
        sweep = self.gun_limit
        return Command(self.speed, body, sweep, sweep, None)


class Walls(ScriptedBot):
    """Patrols the arena perimeter with its gun facing inward."""

    name = "Walls"

    def reset(self, rng, config):
        super().reset(rng, config)
        self.phase = "align"
        self.pending = 0.0

    def _wall_gap(self, obs):
        """Distance from the body edge to the wall straight ahead."""
        me = obs.me
        half = self.phys.tank_size / 2
        c, s = math.cos(me.heading), math.sin(me.heading)
        if c > 0.5:
            return obs.arena_width - half - me.x
        if c < -0.5:
            return me.x - half
        if s > 0:
            return obs.arena_height - half - me.y
        return me.y - half

    def decide(self, obs):
        me = obs.me
        if self.phase == "align":
            # face the nearest cardinal direction, then drive to that wall
            target = round(me.heading / (math.pi / 2)) * (math.pi / 2)
            self.pending = turn_toward(me.heading, target)
            self.phase = "turning" if abs(self.pending) > 1e-9 else "drive"
        if self.phase == "turning":
            turn = clamp(self.pending, self.body_limit(me.velocity))
            self.pending -= turn
            if abs(self.pending) < 1e-9:
                self.phase = "drive"
            return self._with_gun(obs, 0.0, turn)
        gap = self._wall_gap(obs)
        if gap < 1.0 and me.velocity == 0:
            # wall or corner reached: turn 90 degrees left and follow the next wall
            self.pending = -90 * DEG
            self.phase = "turning"
            turn = clamp(self.pending, self.body_limit(0.0))
            self.pending -= turn
            return self._with_gun(obs, 0.0, turn)
        # brake (2/tick) so the body stops at the wall without hitting it
        v = min(8.0, max(0.0, -1.0 + math.sqrt(1.0 + 4.0 * max(gap, 0.0))))
        if gap < 1.0:
            v = 0.0
        return self._with_gun(obs, v, 0.0)

    def pending_turn(self) -> float:
        return self.pending

    def _with_gun(self, obs, v, body):
        me = obs.me
        # travelling counterclockwise round the arena, the interior is on the left
        want = me.heading - body + 90 * DEG
        gun = clamp(turn_toward(me.gun_heading, want), self.gun_limit)
        radar = clamp(turn_toward(me.radar_heading, want), self.radar_limit)
        fire = 2.0 if obs.scans and me.gun_heat == 0 else None
        return Command(v, body, gun, radar, fire)


class MyRobot(ScriptedBot):
    """Seeks the nearest scanned tank in short straight hops, weak shots at it."""

    name = "My-Robot"
    HOP = 100.0

    def reset(self, rng, config):
        super().reset(rng, config)
        self.last = None
        self.hop_left = 0.0

    def decide(self, obs):
        me = obs.me
        if obs.scans:
            s = min(obs.scans, key=lambda s: s.distance)
            self.last = (scan_position(obs, s), obs.tick)
        if self.last is None or obs.tick - self.last[1] > 20:
            return Command(0.0, 0.0, self.gun_limit, self.radar_limit, None)
        (tx, ty), _ = self.last
        direction = math.atan2(ty - me.y, tx - me.x)
        dist = math.hypot(tx - me.x, ty - me.y)
        if self.hop_left <= 0 and dist > 200 and me.velocity == 0:
            self.hop_left = self.HOP
        body = clamp(turn_toward(me.heading, direction), self.body_limit(me.velocity))
        v = 0.0
        if self.hop_left > 0:
            v = min(8.0, self.hop_left)
            self.hop_left -= max(abs(me.velocity), 1.0)
        need = turn_toward(me.gun_heading, direction)
        gun = clamp(need, self.gun_limit)
        radar = clamp(2.0 * turn_toward(me.radar_heading, direction), self.radar_limit)
        fire = 1.0 if me.gun_heat == 0 and abs(need - gun) < 3 * DEG else None
        return Command(v, body, gun, radar, fire)


class VRobot(ScriptedBot):
    """Zigzags across the target line in a V pattern, firing straight at it."""

    name = "V-Robot"
    LEG_TICKS = 30

    def reset(self, rng, config):
        super().reset(rng, config)
        self.last = None

    def decide(self, obs):
        me = obs.me
        if obs.scans:
            s = min(obs.scans, key=lambda s: s.distance)
            self.last = (scan_position(obs, s), obs.tick)
        if self.last is None or obs.tick - self.last[1] > 10:
            return Command(4.0, self.body_limit(me.velocity), self.gun_limit, self.radar_limit, None)
        (tx, ty), _ = self.last
        direction = math.atan2(ty - me.y, tx - me.x)
        dist = math.hypot(tx - me.x, ty - me.y)
        radar = clamp(2.0 * turn_toward(me.radar_heading, direction), self.radar_limit)
        leg = 1.0 if (obs.tick // self.LEG_TICKS) % 2 else -1.0
        # legs at +/-45 degrees off the target line; close in when far away
        lean = 45 * DEG if dist > 250 else 90 * DEG
        want = direction + leg * lean
        body = clamp(turn_toward(me.heading, want), self.body_limit(me.velocity))
        need = turn_toward(me.gun_heading, direction)
        gun = clamp(need, self.gun_limit)
        fire = None
        if me.gun_heat == 0 and abs(need - gun) < 3 * DEG:
            fire = 2.0 if dist < 400 else 1.0
        return Command(8.0, body, gun, radar, fire)


BOTS: dict[str, type[Bot]] = {
    "TestRobot": TestRobot,
    "Crazy": Crazy,
    "Fire": Fire,
    "My-Robot": MyRobot,
    "V-Robot": VRobot,
    "SpinBot": SpinBot,
    "Walls": Walls,
}
ALIASES = {"MyRobot": "My-Robot", "VRobot": "V-Robot"}
BASELINES = ("Crazy", "Fire", "My-Robot", "V-Robot", "SpinBot", "Walls")
MELEE_ROSTER = ("TestRobot",) + BASELINES


class UnknownBot(KeyError):
    pass


def canonical_name(name: str) -> str:
    name = ALIASES.get(name, name)
    if name not in BOTS:
        raise UnknownBot(f"unknown bot {name!r}; valid names: {', '.join(BOTS)}")
    return name


def bot_factory(name: str) -> type[Bot]:
    """Zero-argument callable building a fresh bot of this name."""
    return BOTS[canonical_name(name)]


def make_bot(name: str) -> Bot:
    return bot_factory(name)()


def baseline_decide(kind: str, obs: Observation, bot: Bot | None = None) -> Command:
    """Run one decision of a sample opponent; ``bot`` carries its memory."""
    if bot is None:
        bot = make_bot(kind)
        bot.reset(np.random.default_rng(0), BattleConfig())
    return bot.decide(obs)
