import math

import numpy as np
import pytest

from oracles import fit_circle
from tankgame.bots import (BASELINES, BOTS, EPOCH_TICKS, MELEE_ROSTER, Fire, SpinBot,
                           TestRobot, UnknownBot, Walls, baseline_decide, canonical_name,
                           fire_power_for, make_bot, threat_payoff)
from tankgame.engine import (DEG, BattleConfig, Bot, Command, Observation, PhysicsConstants,
                             Scan, TankView, new_battle, observation, tick)
from tankgame.gametree import RADII, build_fixture

PHYS = PhysicsConstants()


class Idle(Bot):
    name = "Idle"

    def decide(self, obs):
        return Command()


def view(x=400.0, y=300.0, heading=0.0, gun=None, radar=None, v=0.0, energy=100.0, heat=0.0):
    return TankView(x, y, heading, heading if gun is None else gun,
                    heading if radar is None else radar, v, energy, heat)


def obs_with(me, scans=(), tick_no=1):
    return Observation(tick_no, me, tuple(scans), 800.0, 600.0, 1)


def ready(bot, seed=0):
    bot.reset(np.random.default_rng(seed), BattleConfig())
    return bot


def drive(bots, names, poses=None, ticks=400, seed=0):
    """Step a hand-built round; returns the state and per-tick (obs, command) logs."""
    cfg = BattleConfig(seed=seed)
    state = new_battle(cfg, names)
    for t, pose in zip(state.tanks, poses or []):
        if pose is not None:
            t.x, t.y, t.heading = pose
            t.gun_heading = t.radar_heading = pose[2]
    for i, b in enumerate(bots):
        b.reset(np.random.default_rng(seed + i), cfg)
    log = []
    for _ in range(ticks):
        if len(state.alive()) < 2:
            break
        cmds, row = {}, {}
        for t, b in zip(state.tanks, bots):
            if t.alive:
                o = observation(state, t)
                cmds[t.name] = b.decide(o)
                row[t.name] = (o, cmds[t.name])
        tick(state, cmds)
        log.append(row)
    return state, log


# -- TestRobot ---------------------------------------------------------------------

def test_radar_sweep_back_command():
    bot = ready(TestRobot())
    me = view(heading=45 * DEG, radar=90 * DEG)
    scan = Scan("X", -30 * DEG, 200.0, 0.0, 0.0, 100.0, 1)
    cmd = bot.decide(obs_with(me, [scan]))
    assert cmd.radar_turn == pytest.approx(15 * DEG)


def test_radar_spins_without_target():
    bot = ready(TestRobot())
    assert bot.decide(obs_with(view())).radar_turn == pytest.approx(45 * DEG)


def test_main_shape_plans_radius_30():
    bot = ready(TestRobot(shape=build_fixture("main")))
    assert bot.plan_radius(300.0) == 30
    bot.decide(obs_with(view()))
    assert bot.circles[0].chosen_radius == 30


@pytest.mark.parametrize("distance", [60, 150, 300, 600, 900])
def test_threat_payoff_choice_is_a_candidate_radius(distance):
    bot = ready(TestRobot())
    assert bot.plan_radius(distance) in RADII
    pay = threat_payoff(distance, PHYS)
    vals = [pay((r, o)) for r in RADII for o in RADII]
    assert all(v % 10 == 0 and 0 <= v <= 40 for v in vals)


def test_fire_power_bands():
    assert [fire_power_for(d) for d in (50, 149.9, 150, 399, 400, 900)] == [3, 3, 2, 2, 1, 1]


def test_stationary_target_is_hit_at_band_power():
    state, log = drive([TestRobot(), Idle()], ["TestRobot", "Idle"],
                       [(400.0, 300.0, 0.0), (650.0, 300.0, 0.0)], ticks=60)
    fires = [(row["TestRobot"][0], row["TestRobot"][1].fire_power) for row in log
             if row["TestRobot"][1].fire_power]
    assert fires
    o, power = fires[0]
    target = state.tank("Idle")
    assert power == fire_power_for(math.hypot(o.me.x - target.x, o.me.y - target.y))
    assert target.energy < 100


@pytest.mark.parametrize("opponent", BASELINES)
def test_radar_lock(opponent):
    bot = TestRobot()
    state, log = drive([bot, make_bot(opponent)], ["TestRobot", opponent], ticks=600,
                       seed=3)
    locked = None
    fresh = 0
    for i, row in enumerate(log):
        if "TestRobot" not in row:
            break
        scanned = any(s.target == opponent for s in row["TestRobot"][0].scans)
        if locked is None:
            locked = i if scanned else None
            continue
        fresh += scanned
    assert locked is not None
    assert fresh / max(1, len(log) - locked - 1) >= 0.9


def test_epoch_discipline():
    bot = TestRobot()
    drive([bot, SpinBot()], ["TestRobot", "SpinBot"], ticks=500, seed=4)
    starts = [c.epoch_start for c in bot.circles]
    assert len(starts) > 10
    assert all(b - a >= EPOCH_TICKS for a, b in zip(starts, starts[1:]))
    assert [c.index for c in bot.circles] == list(range(1, len(starts) + 1))
    assert all(c.chosen_radius in RADII for c in bot.circles)


def within_limits(cmd: Command, me: TankView) -> bool:
    eps = 1e-9
    return (abs(cmd.target_velocity) <= PHYS.max_velocity + eps
            and abs(cmd.body_turn) <= PHYS.max_body_turn(me.velocity) + eps
            and abs(cmd.gun_turn) <= PHYS.max_gun_turn * DEG + eps
            and abs(cmd.radar_turn) <= PHYS.max_radar_turn * DEG + eps
            and (cmd.fire_power is None
                 or PHYS.min_power <= cmd.fire_power <= PHYS.max_power))


@pytest.mark.parametrize("seed", [0, 1])
def test_commands_within_physics_bounds(seed):
    names = list(MELEE_ROSTER)
    _, log = drive([make_bot(n) for n in names], names, ticks=1500, seed=seed)
    for row in log:
        for name, (o, cmd) in row.items():
            assert within_limits(cmd, o.me), (name, o.tick, cmd)


# -- sample opponents --------------------------------------------------------------

def test_fire_idle_without_scan():
    bot = ready(Fire())
    cmd = bot.decide(obs_with(view()))
    assert cmd.target_velocity == 0 and cmd.body_turn == 0
    assert cmd.radar_turn != 0 and cmd.fire_power is None


def test_walls_turns_ninety_at_corner():
    bot = ready(Walls())
    # counterclockwise patrol: reaching the top-right corner heading north
    me = view(x=782.0, y=582.0, heading=math.pi / 2)
    cmd = bot.decide(obs_with(me))
    total = cmd.body_turn + bot.pending_turn()
    assert total == pytest.approx(-90 * DEG)
    heading = me.heading - cmd.body_turn
    turned = cmd.body_turn
    for _ in range(20):
        if abs(bot.pending_turn()) < 1e-12:
            break
        cmd = bot.decide(obs_with(view(x=782.0, y=582.0, heading=heading)))
        turned += cmd.body_turn
        heading -= cmd.body_turn
    assert turned == pytest.approx(-90 * DEG)
    assert math.cos(heading) == pytest.approx(-1.0)


def test_spinbot_drives_a_circle():
    bot = SpinBot()
    state, log = drive([bot, Idle()], ["SpinBot", "Idle"],
                       [(400.0, 300.0, 0.0), (40.0, 40.0, 0.0)], ticks=120)
    xs = [row["SpinBot"][0].me.x for row in log[20:120]]
    ys = [row["SpinBot"][0].me.y for row in log[20:120]]
    *_, r, rms = fit_circle(xs, ys)
    assert rms < 1.0
    assert 20 < r < 80


@pytest.mark.parametrize("kind", BASELINES)
def test_baseline_decide_returns_commands(kind):
    cmd = baseline_decide(kind, obs_with(view()))
    assert isinstance(cmd, Command)
    assert within_limits(cmd, view())


def test_registry_names():
    assert set(BOTS) == set(MELEE_ROSTER)
    assert canonical_name("MyRobot") == "My-Robot"
    assert canonical_name("VRobot") == "V-Robot"
    with pytest.raises(UnknownBot) as err:
        canonical_name("Foo")
    assert "TestRobot" in str(err.value)
