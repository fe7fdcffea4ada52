"""Deterministic tick-based tank battle simulation.

One :class:`BattleState` is advanced by :func:`tick`, which applies the
phases in a fixed order:

1. bullets advance and hit-test against tank boxes
2. tanks accelerate, turn and move (wall and tank collisions resolved here)
3. guns cool
4. guns fire (eligibility is judged on the heat the bot observed)
5. radars sweep and record scans
6. tanks at zero energy die
7. inactivity decay once nobody has dealt damage for ``inactivity_time``

Everything random is drawn from a ``numpy.random.Generator`` seeded from the
battle seed and round index, so a round is a pure function of its inputs.
"""
from __future__ import annotations

import json
import logging
import math
import time
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .geometry import normalize_angle

log = logging.getLogger(__name__)

DEG = math.pi / 180.0

EVENT_KINDS = (
    "scan", "fire", "bullet_hit", "bullet_miss", "wall_hit", "robot_collision",
    "robot_death", "inactivity", "fault", "round_end",
)


class EngineError(ValueError):
    pass


@dataclass(frozen=True)
class PhysicsConstants:
    max_velocity: float = 8.0
    acceleration: float = 1.0
    deceleration: float = 2.0
    max_body_turn_base: float = 10.0     # deg/tick at rest
    velocity_penalty: float = 0.75       # deg/tick lost per unit of speed
    max_gun_turn: float = 20.0           # deg/tick
    max_radar_turn: float = 45.0         # deg/tick
    bullet_speed_base: float = 20.0
    bullet_speed_slope: float = 3.0
    min_power: float = 0.1
    max_power: float = 3.0
    tank_size: float = 36.0
    radar_range: float = 1200.0

    def __post_init__(self):
        for f in fields(self):
            if not getattr(self, f.name) > 0:
                raise EngineError(f"physics.{f.name} must be positive")
        if not self.min_power < self.max_power:
            raise EngineError("min_power must be below max_power")

    def bullet_speed(self, power: float) -> float:
        return self.bullet_speed_base - self.bullet_speed_slope * power

    def max_body_turn(self, velocity: float) -> float:
        """Body turn limit in radians per tick at the given speed."""
        return (self.max_body_turn_base - self.velocity_penalty * abs(velocity)) * DEG


def bullet_damage(power: float) -> float:
    return 4.0 * power + (2.0 * (power - 1.0) if power > 1.0 else 0.0)


def hit_gain(power: float) -> float:
    return 3.0 * power


def wall_damage(velocity: float) -> float:
    return max(0.0, abs(velocity) / 2.0 - 1.0)


@dataclass(frozen=True)
class BattleConfig:
    arena_width: float = 800.0
    arena_height: float = 600.0
    rounds: int = 30
    gun_cooling_rate: float = 0.1
    inactivity_time: int = 450
    inactivity_decay: float = 0.1
    sentry_border_size: float = 100.0    # accepted, unused: no sentry bots exist
    initial_energy: float = 100.0
    initial_gun_heat: float = 3.0
    max_ticks: int = 20000
    fault_limit: int = 3
    decision_budget: float | None = None  # seconds per decision; None disables the wall clock
    seed: int = 0
    physics: PhysicsConstants = field(default_factory=PhysicsConstants)

    def __post_init__(self):
        for name in ("arena_width", "arena_height", "rounds", "gun_cooling_rate",
                     "inactivity_time", "inactivity_decay", "sentry_border_size",
                     "initial_energy", "max_ticks", "fault_limit"):
            if not getattr(self, name) > 0:
                raise EngineError(f"{name} must be positive")
        if self.initial_gun_heat < 0:
            raise EngineError("initial_gun_heat must be non-negative")
        if not 0 <= self.seed < 2 ** 64:
            raise EngineError("seed must fit in 64 unsigned bits")


_INT_FIELDS = {"rounds", "inactivity_time", "max_ticks", "fault_limit", "seed"}


def parse_config(text: str, base: BattleConfig | None = None) -> BattleConfig:
    """Parse ``key = value`` lines; physics keys are written ``physics.<name>``."""
    base = base or BattleConfig()
    top, phys = {}, {}
    known_top = {f.name for f in fields(BattleConfig)} - {"physics"}
    known_phys = {f.name for f in fields(PhysicsConstants)}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise EngineError(f"config line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        try:
            _parse_entry(key, value, known_top, known_phys, top, phys)
        except ValueError as exc:
            raise EngineError(f"config line {lineno}: {exc}") from None
    physics = replace(base.physics, **phys)
    return replace(base, physics=physics, **top)


def _parse_entry(key, value, known_top, known_phys, top, phys):
    if key.startswith("physics."):
        name = key[len("physics."):]
        if name not in known_phys:
            raise ValueError(f"unknown key {key!r}")
        phys[name] = float(value)
    elif key in known_top:
        if key == "decision_budget":
            top[key] = None if value.lower() in ("", "none") else float(value)
        elif key in _INT_FIELDS:
            top[key] = int(value)
        else:
            top[key] = float(value)
    else:
        raise ValueError(f"unknown key {key!r}")


def load_config(path: str | Path) -> BattleConfig:
    return parse_config(Path(path).read_text())


def format_config(config: BattleConfig) -> str:
    lines = []
    for f in fields(config):
        if f.name == "physics":
            continue
        lines.append(f"{f.name} = {getattr(config, f.name)}")
    for f in fields(config.physics):
        lines.append(f"physics.{f.name} = {getattr(config.physics, f.name)}")
    return "\n".join(lines) + "\n"


# -- bot-facing records -------------------------------------------------------

@dataclass(frozen=True)
class Command:
    """Per-tick request. Turns are clockwise-positive radians."""
    target_velocity: float = 0.0
    body_turn: float = 0.0
    gun_turn: float = 0.0
    radar_turn: float = 0.0
    fire_power: float | None = None


IDLE = Command()


@dataclass(frozen=True)
class TankView:
    x: float
    y: float
    heading: float
    gun_heading: float
    radar_heading: float
    velocity: float
    energy: float
    gun_heat: float


@dataclass(frozen=True)
class Scan:
    target: str
    bearing: float        # clockwise from scanner's body heading
    distance: float
    heading: float
    velocity: float
    energy: float
    tick: int


@dataclass(frozen=True)
class Observation:
    tick: int
    me: TankView
    scans: tuple[Scan, ...]
    arena_width: float
    arena_height: float
    others: int
    hit_wall: bool = False
    hit_by: tuple[float, ...] = ()   # bearings of bullets that hit us last tick


class Bot:
    """Decision interface. One instance per tank per round."""

    name = "Bot"

    def reset(self, rng: np.random.Generator, config: BattleConfig) -> None:
        self.rng = rng
        self.config = config

    def decide(self, obs: Observation) -> Command:
        raise NotImplementedError


# -- state --------------------------------------------------------------------

class TankState:
    __slots__ = ("name", "index", "x", "y", "heading", "gun_heading", "radar_heading",
                 "velocity", "energy", "gun_heat", "alive", "faults", "disabled",
                 "damage_dealt", "scans", "hit_wall", "hit_by")

    def __init__(self, name, index, x, y, heading, energy, gun_heat):
        self.name = name
        self.index = index
        self.x = x
        self.y = y
        self.heading = heading
        self.gun_heading = heading
        self.radar_heading = heading
        self.velocity = 0.0
        self.energy = energy
        self.gun_heat = gun_heat
        self.alive = True
        self.faults = 0
        self.disabled = False
        self.damage_dealt = 0.0
        self.scans: list[Scan] = []
        self.hit_wall = False
        self.hit_by: list[float] = []

    def view(self) -> TankView:
        return TankView(self.x, self.y, self.heading, self.gun_heading, self.radar_heading,
                        self.velocity, self.energy, self.gun_heat)


class Bullet:
    __slots__ = ("id", "owner", "x", "y", "heading", "power", "speed")

    def __init__(self, id, owner, x, y, heading, power, speed):
        self.id = id
        self.owner = owner
        self.x = x
        self.y = y
        self.heading = heading
        self.power = power
        self.speed = speed


@dataclass
class Event:
    round: int
    tick: int
    kind: str
    data: dict

    def to_json(self) -> str:
        rec = {"round": self.round, "tick": self.tick, "kind": self.kind}
        rec.update(self.data)
        return json.dumps(rec, separators=(",", ":"))


def format_events(events: Iterable[Event]) -> str:
    return "".join(e.to_json() + "\n" for e in events)


def parse_events(text: str) -> list[Event]:
    out = []
    for line in text.splitlines():
        if not line.strip():
            continue
        rec = json.loads(line)
        rnd, tk, kind = rec.pop("round"), rec.pop("tick"), rec.pop("kind")
        out.append(Event(rnd, tk, kind, rec))
    return out


@dataclass
class BattleState:
    config: BattleConfig
    tanks: list[TankState]
    rng: np.random.Generator
    round_index: int = 0
    tick: int = 0
    bullets: list[Bullet] = field(default_factory=list)
    next_bullet: int = 0
    last_damage_tick: int = 0
    deaths: list[tuple[int, str]] = field(default_factory=list)
    pair_damage: dict = field(default_factory=dict)

    def alive(self) -> list[TankState]:
        return [t for t in self.tanks if t.alive]

    def tank(self, name: str) -> TankState:
        for t in self.tanks:
            if t.name == name:
                return t
        raise KeyError(name)


def round_seed(seed: int, round_index: int, attempt: int = 0) -> np.random.SeedSequence:
    return np.random.SeedSequence([seed, round_index, attempt])


def new_battle(config: BattleConfig, roster: Sequence[str], round_index: int = 0,
               rng: np.random.Generator | None = None) -> BattleState:
    """Fresh round state with tanks spawned at random non-overlapping spots."""
    if len(roster) < 2:
        raise EngineError("need at least two tanks")
    if len(set(roster)) != len(roster):
        raise EngineError("tank names must be unique")
    if rng is None:
        rng = np.random.default_rng(round_seed(config.seed, round_index))
    size = config.physics.tank_size
    half = size / 2.0
    w, h = config.arena_width, config.arena_height
    if w < size or h < size:
        raise EngineError("arena smaller than a tank")
    tanks: list[TankState] = []
    for i, name in enumerate(roster):
        for _ in range(1000):
            x = half + float(rng.random()) * (w - size)
            y = half + float(rng.random()) * (h - size)
            if all(abs(x - t.x) >= size or abs(y - t.y) >= size for t in tanks):
                break
        else:
            raise EngineError(f"arena too small to place {len(roster)} tanks")
        heading = normalize_angle(float(rng.random()) * 2 * math.pi)
        tanks.append(TankState(name, i, x, y, heading, config.initial_energy,
                               config.initial_gun_heat))
    return BattleState(config, tanks, rng, round_index)


# -- kinematics helpers (also used by the intercept replay) -------------------

def next_velocity(v: float, target: float, phys: PhysicsConstants) -> float:
    """Speed after one tick of accelerating (1/tick) or braking (2/tick)."""
    target = max(-phys.max_velocity, min(phys.max_velocity, target))
    if v == 0 or (v > 0 and target >= 0) or (v < 0 and target <= 0):
        sign = math.copysign(1.0, v if v != 0 else target)
        if abs(target) > abs(v):
            return sign * min(abs(target), abs(v) + phys.acceleration)
        return sign * max(abs(target), abs(v) - phys.deceleration)
    # reversing: brake through zero, spend the leftover fraction accelerating
    mag = abs(v) - phys.deceleration
    if mag >= 0:
        return math.copysign(mag, v)
    leftover = -mag / phys.deceleration
    return math.copysign(min(leftover * phys.acceleration, abs(target)), target)


def step_pose(x, y, heading, velocity, command: Command, phys: PhysicsConstants):
    """One tick of body kinematics without collisions.

    Returns the new (x, y, heading, velocity). The turn limit uses the speed
    at the start of the tick.
    """
    limit = phys.max_body_turn(velocity)
    turn = max(-limit, min(limit, command.body_turn))
    heading = normalize_angle(heading - turn)
    velocity = next_velocity(velocity, command.target_velocity, phys)
    return (x + velocity * math.cos(heading), y + velocity * math.sin(heading),
            heading, velocity)


def _segment_hits_box(x0, y0, x1, y1, cx, cy, half):
    """Parametric entry point (0..1) of a segment into an axis-aligned box."""
    dx, dy = x1 - x0, y1 - y0
    t0, t1 = 0.0, 1.0
    for p, q in ((-dx, x0 - (cx - half)), (dx, (cx + half) - x0),
                 (-dy, y0 - (cy - half)), (dy, (cy + half) - y0)):
        if p == 0:
            if q < 0:
                return None
        else:
            r = q / p
            if p < 0:
                if r > t1:
                    return None
                if r > t0:
                    t0 = r
            else:
                if r < t0:
                    return None
                if r < t1:
                    t1 = r
    return t0


def _finite_command(c: Command) -> bool:
    vals = [c.target_velocity, c.body_turn, c.gun_turn, c.radar_turn]
    if c.fire_power is not None:
        vals.append(c.fire_power)
    return all(isinstance(v, (int, float)) and math.isfinite(v) for v in vals)


def _in_sweep(start, turn, centre, half_width):
    """Does the swept arc [start, start - turn] (clockwise turn) overlap the
    angular interval centre +/- half_width?"""
    # work in the CCW frame: sweep from a to a + s where s = -turn
    s = -turn
    lo = start if s >= 0 else start + s
    span = abs(s)
    off = (centre - lo) % (2 * math.pi)
    if off <= span + half_width:
        return True
    return (2 * math.pi - off) <= half_width


def _emit(events, state, kind, **data):
    events.append(Event(state.round_index, state.tick, kind, data))


def tick(state: BattleState, commands: dict[str, Command]) -> list[Event]:
    """Advance one tick. ``commands`` maps tank name to its request."""
    cfg = state.config
    phys = cfg.physics
    half = phys.tank_size / 2.0
    w, h = cfg.arena_width, cfg.arena_height
    events: list[Event] = []
    state.tick += 1
    tanks = state.tanks
    for t in tanks:
        t.hit_wall = False
        t.hit_by = []

    cmds: dict[str, Command] = {}
    for t in tanks:
        c = commands.get(t.name, IDLE)
        if not t.alive:
            if t.name in commands and commands[t.name] is not IDLE:
                log.debug("ignored command for dead tank %s", t.name)
            continue
        if not _finite_command(c):
            _emit(events, state, "fault", who=t.name, reason="non-finite command")
            c = IDLE
        cmds[t.name] = c

    # 1. bullets
    survivors = []
    for b in state.bullets:
        x0, y0 = b.x, b.y
        x1 = x0 + b.speed * math.cos(b.heading)
        y1 = y0 + b.speed * math.sin(b.heading)
        victim, best = None, 2.0
        for t in tanks:
            if not t.alive or t.energy <= 0 or t.name == b.owner:
                continue
            s = _segment_hits_box(x0, y0, x1, y1, t.x, t.y, half)
            if s is not None and s < best:
                victim, best = t, s
        if victim is not None:
            hx, hy = x0 + best * (x1 - x0), y0 + best * (y1 - y0)
            dmg = min(bullet_damage(b.power), victim.energy)
            victim.energy -= dmg
            owner = state.tank(b.owner)
            gain = 0.0
            if owner.alive and owner.energy > 0:
                gain = hit_gain(b.power)
                owner.energy += gain
            owner.damage_dealt += dmg
            key = (b.owner, victim.name)
            state.pair_damage[key] = state.pair_damage.get(key, 0.0) + dmg
            state.last_damage_tick = state.tick
            victim.hit_by.append(normalize_angle(victim.heading - (b.heading + math.pi)))
            _emit(events, state, "bullet_hit", bullet=b.id, who=b.owner, whom=victim.name,
                  damage=dmg, gain=gain, power=b.power, x=hx, y=hy)
        elif not (0 <= x1 <= w and 0 <= y1 <= h):
            _emit(events, state, "bullet_miss", bullet=b.id, who=b.owner, x=x1, y=y1)
        else:
            b.x, b.y = x1, y1
            survivors.append(b)
    state.bullets = survivors

    # 2. movement, gun and radar turns
    old_radar = {}
    radar_turns = {}
    for t in tanks:
        if not t.alive:
            continue
        c = cmds[t.name]
        old_radar[t.name] = t.radar_heading
        if t.energy <= 0:
            t.velocity = 0.0
            radar_turns[t.name] = 0.0
            continue
        ox, oy = t.x, t.y
        x, y, t.heading, t.velocity = step_pose(t.x, t.y, t.heading, t.velocity, c, phys)
        gun = max(-phys.max_gun_turn * DEG, min(phys.max_gun_turn * DEG, c.gun_turn))
        t.gun_heading = normalize_angle(t.gun_heading - gun)
        rt = max(-phys.max_radar_turn * DEG, min(phys.max_radar_turn * DEG, c.radar_turn))
        t.radar_heading = normalize_angle(t.radar_heading - rt)
        radar_turns[t.name] = rt
        cx = min(max(x, half), w - half)
        cy = min(max(y, half), h - half)
        if cx != x or cy != y:
            dmg = min(wall_damage(t.velocity), t.energy)
            t.energy -= dmg
            _emit(events, state, "wall_hit", who=t.name, damage=dmg, x=cx, y=cy)
            t.velocity = 0.0
            t.hit_wall = True
            x, y = cx, cy
        blocker = None
        for o in tanks:
            if o is t or not o.alive:
                continue
            if abs(o.x - x) < phys.tank_size and abs(o.y - y) < phys.tank_size:
                blocker = o
                break
        if blocker is not None:
            x, y = ox, oy
            t.velocity = 0.0
            _emit(events, state, "robot_collision", who=t.name, whom=blocker.name)
        t.x, t.y = x, y

    # 3. cooling; 4. firing
    heat_seen = {}
    for t in tanks:
        if not t.alive:
            continue
        heat_seen[t.name] = t.gun_heat
        t.gun_heat = max(0.0, t.gun_heat - cfg.gun_cooling_rate)
        if t.gun_heat < 1e-9:
            t.gun_heat = 0.0
    for t in tanks:
        if not t.alive or t.energy <= 0:
            continue
        power = cmds[t.name].fire_power
        if power is None or power <= 0 or heat_seen[t.name] > 0:
            continue
        power = max(phys.min_power, min(phys.max_power, power))
        if t.energy <= power:
            continue
        t.energy -= power
        t.gun_heat += 1.0 + power / 5.0
        b = Bullet(state.next_bullet, t.name, t.x, t.y, t.gun_heading, power,
                   phys.bullet_speed(power))
        state.next_bullet += 1
        state.bullets.append(b)
        _emit(events, state, "fire", bullet=b.id, who=t.name, power=power,
              x=t.x, y=t.y, heading=t.gun_heading)

    # 5. radar
    for t in tanks:
        if not t.alive:
            continue
        t.scans = []
        start, turn = old_radar[t.name], radar_turns[t.name]
        for o in tanks:
            if o is t or not o.alive:
                continue
            dx, dy = o.x - t.x, o.y - t.y
            dist = math.hypot(dx, dy)
            if dist > phys.radar_range or dist == 0:
                continue
            direction = math.atan2(dy, dx)
            width = math.asin(min(1.0, half / dist))
            if not _in_sweep(start, turn, direction, width):
                continue
            bearing = normalize_angle(t.heading - direction)
            s = Scan(o.name, bearing, dist, o.heading, o.velocity, o.energy, state.tick)
            t.scans.append(s)
            _emit(events, state, "scan", who=t.name, whom=o.name, bearing=bearing,
                  distance=dist, heading=o.heading, velocity=o.velocity)

    # 6. deaths
    dying = [t for t in tanks if t.alive and t.energy <= 0]
    if dying:
        for t in dying:
            t.alive = False
            t.velocity = 0.0
            state.deaths.append((state.tick, t.name))
        alive_after = [t.name for t in tanks if t.alive]
        killers = _killers(events, dying)
        for t in dying:
            killer = killers.get(t.name)
            basis = state.pair_damage.get((killer, t.name), 0.0) if killer else 0.0
            _emit(events, state, "robot_death", who=t.name, killer=killer,
                  killer_damage=basis, alive_after=alive_after)

    # 7. inactivity
    if state.tick - state.last_damage_tick > cfg.inactivity_time:
        for t in tanks:
            if t.alive and t.energy > 0:
                amt = min(cfg.inactivity_decay, t.energy)
                t.energy -= amt
                _emit(events, state, "inactivity", who=t.name, amount=amt)
    return events


def _killers(events, dying):
    names = {t.name for t in dying}
    out = {}
    for e in events:
        if e.kind == "bullet_hit" and e.data["whom"] in names:
            out[e.data["whom"]] = e.data["who"]   # last hit this tick wins
    return out


# -- rounds and battles -------------------------------------------------------

@dataclass
class RoundResult:
    round: int
    placements: list[str]           # 1st first
    survivor: str | None            # sole survivor, if any
    winner: str | None              # None when the top two cannot be separated
    ticks: int
    damage_dealt: dict[str, float]
    events: list[Event]
    attempt: int = 0


def observation(state: BattleState, t: TankState) -> Observation:
    cfg = state.config
    return Observation(state.tick, t.view(), tuple(t.scans), cfg.arena_width,
                       cfg.arena_height, sum(1 for o in state.tanks if o.alive) - 1,
                       t.hit_wall, tuple(t.hit_by))


def _placements(state: BattleState) -> tuple[list[str], bool]:
    """Placement order, and whether 1st and 2nd cannot be separated.

    Survivors rank above the dead (by energy, then damage dealt); the dead
    rank in reverse death order, same-tick deaths by damage dealt.
    """
    def key(t):
        if t.alive:
            return (1, t.energy, t.damage_dealt)
        return (0, death_tick[t.name], t.damage_dealt)

    death_tick = {name: tk for tk, name in state.deaths}
    ranked = sorted(state.tanks, key=lambda t: (tuple(-k for k in key(t)), t.index))
    tie = len(ranked) >= 2 and key(ranked[0]) == key(ranked[1])
    return [t.name for t in ranked], tie


def run_round(config: BattleConfig, bots: Sequence[Bot], names: Sequence[str] | None = None,
              round_index: int = 0, attempt: int = 0) -> RoundResult:
    """Run one round to last survivor or ``max_ticks``."""
    names = list(names or [b.name for b in bots])
    ss = round_seed(config.seed, round_index, attempt)
    spawn_ss, *bot_ss = ss.spawn(len(bots) + 1)
    state = new_battle(config, names, round_index, np.random.default_rng(spawn_ss))
    for bot, s in zip(bots, bot_ss):
        bot.reset(np.random.default_rng(s), config)
    by_name = dict(zip(names, bots))
    events: list[Event] = []
    while len(state.alive()) > 1 and state.tick < config.max_ticks:
        commands = {}
        for t in state.tanks:
            if not t.alive or t.disabled:
                continue
            commands[t.name] = _decide(state, t, by_name[t.name], events)
        events.extend(tick(state, commands))
    order, tie = _placements(state)
    alive = state.alive()
    survivor = alive[0].name if len(alive) == 1 else None
    winner = None if tie else order[0]
    events.append(Event(round_index, state.tick, "round_end", {
        "placements": order, "survivor": survivor, "winner": winner,
        "reason": "survivor" if len(alive) <= 1 else "tick_cap",
    }))
    return RoundResult(round_index, order, survivor, winner, state.tick,
                       {t.name: t.damage_dealt for t in state.tanks}, events, attempt)


def _decide(state, t, bot, events) -> Command:
    cfg = state.config
    obs = observation(state, t)
    try:
        started = time.perf_counter()
        cmd = bot.decide(obs)
        if cfg.decision_budget is not None and time.perf_counter() - started > cfg.decision_budget:
            raise TimeoutError("decision budget exceeded")
        if not isinstance(cmd, Command):
            raise TypeError(f"decide returned {type(cmd).__name__}")
        return cmd
    except Exception as exc:   # a faulty bot loses its turn, not the battle
        t.faults += 1
        events.append(Event(state.round_index, state.tick + 1, "fault",
                            {"who": t.name, "reason": f"{type(exc).__name__}: {exc}"}))
        if t.faults >= cfg.fault_limit:
            t.disabled = True
        return IDLE


def unique_names(names: Sequence[str]) -> list[str]:
    """Disambiguate repeated bot names: ``A``, ``A#2``, ..."""
    seen: dict[str, int] = {}
    out = []
    for n in names:
        seen[n] = seen.get(n, 0) + 1
        out.append(n if seen[n] == 1 else f"{n}#{seen[n]}")
    return out


@dataclass
class BattleResult:
    names: list[str]
    rounds: list[RoundResult]
    board: object

    @property
    def events(self) -> list[Event]:
        return [e for r in self.rounds for e in r.events]

    def log_text(self) -> str:
        return format_events(self.events)


def run_battle(config: BattleConfig, bots: Sequence, jobs: int = 1,
               replay_ties: bool | None = None) -> BattleResult:
    """Run ``config.rounds`` rounds of ``bots`` (names or factories) and score them.

    Rounds are independent, so ``jobs > 1`` farms them out to worker
    processes; results are merged in round order and the log is unchanged.
    """
    from . import tournament
    return tournament.run_battle(config, bots, jobs=jobs, replay_ties=replay_ties)


def battle_config_dict(config: BattleConfig) -> dict:
    return asdict(config)
