"""End-to-end acceptance checks, one test per criterion.

Each test records a short detail string; the conftest prints one PASS/FAIL
line per criterion at the end of the run.
"""
import math
import time

import numpy as np
import pytest

from oracles import brute_minimax, intercept_trial
from tankgame.bots import BASELINES, MELEE_ROSTER
from tankgame.cli import main
from tankgame.engine import BattleConfig, parse_events
from tankgame.gametree import (FIXTURE_NAMES, alphabeta_value, build_fixture, minimax_value,
                               random_tree)
from tankgame.geometry import (HIT_TOLERANCE, ArcPath, Pose, fit_arc, normalize_angle,
                               predict_point)
from tankgame.tournament import (batch_score, boards_agree, run_duel_series, run_melee,
                                 stream_score, verify_tables)

SEED = 1
ROUNDS = 30


def note(record_property, text):
    print(text)
    record_property("detail", text)


@pytest.mark.criterion(1, "fixture values 30/100/100/160, exact, < 1 ms")
def test_fixture_values(record_property):
    trees = {n: build_fixture(n) for n in FIXTURE_NAMES}
    expected = {"main": 30, "ascending": 100, "descending": 100, "single_branch_max": 160}
    best = math.inf
    for _ in range(5):
        start = time.perf_counter()
        values = {n: alphabeta_value(t).value for n, t in trees.items()}
        best = min(best, time.perf_counter() - start)
    note(record_property, f"{values}, {best * 1e3:.3f} ms")
    assert values == expected
    assert all(isinstance(v, float) and v.is_integer() for v in values.values())
    assert best < 1e-3


@pytest.mark.criterion(2, "alpha-beta equals minimax on 1,000 random trees, < 1 s")
def test_oracle_equivalence(record_property):
    rng = np.random.default_rng(SEED)
    trees = [random_tree(rng, max_depth=5, max_branching=4) for _ in range(1000)]
    start = time.perf_counter()
    results = [(alphabeta_value(t), minimax_value(t)) for t in trees]
    elapsed = time.perf_counter() - start
    mismatches = sum(ab.value != mm.value for ab, mm in results)
    extra = sum(ab.visited > mm.visited for ab, mm in results)
    oracle_miss = sum(ab.value != brute_minimax(t) for t, (ab, _) in zip(trees, results))
    note(record_property, f"{mismatches} value mismatches, {extra} over-visits, "
                          f"{elapsed:.3f} s")
    assert mismatches == extra == oracle_miss == 0
    assert elapsed < 1.0


@pytest.mark.criterion(3, "geometry identities at 1e-9 / 1e-6")
def test_geometry_identities(record_property):
    rng = np.random.default_rng(SEED)
    worst_circle = 0.0
    for R, th in zip(rng.uniform(0.1, 2000, 10_000), rng.uniform(-20, 20, 10_000)):
        x, y = predict_point(R, th)
        worst_circle = max(worst_circle, abs(x * x + y * y - R * R) / (R * R))
    worst_angle = 0.0
    worst_fit = 0.0
    for _ in range(2000):
        R = rng.uniform(10, 1000)
        w = rng.uniform(0.005, 0.3) * rng.choice([-1, 1])
        dt = rng.uniform(0.5, min(10.0, 3.0 / abs(w)))
        path = ArcPath(rng.uniform(-400, 400), rng.uniform(-400, 400), R, w,
                       rng.uniform(-math.pi, math.pi))
        poses = []
        for t in (0.0, dt):
            x, y = path.position(t)
            a = path.phase + w * t
            poses.append(Pose(x, y, normalize_angle(a + math.copysign(math.pi / 2, w))))
        change = normalize_angle(poses[1].heading - poses[0].heading)
        worst_angle = max(worst_angle, abs(normalize_angle(change - w * dt)))
        fit = fit_arc(poses[0], poses[1], dt)
        worst_fit = max(worst_fit, abs(fit.radius - R) / R)
    note(record_property, f"circle {worst_circle:.1e}, tangent {worst_angle:.1e}, "
                          f"fit {worst_fit:.1e}")
    assert worst_circle <= 1e-9
    assert worst_angle <= 1e-9
    assert worst_fit <= 1e-6


@pytest.mark.criterion(4, ">= 95% of 10^4 arc intercepts replayed within 18 units, < 30 s")
def test_intercept_effectiveness(record_property):
    rng = np.random.default_rng(SEED)
    start = time.perf_counter()
    misses = [intercept_trial(rng) for _ in range(10_000)]
    elapsed = time.perf_counter() - start
    solved = np.array([m for m in misses if m is not None])
    rate = float(np.mean(solved < HIT_TOLERANCE))
    note(record_property, f"{len(solved)} solvable, hit rate {rate:.2%}, "
                          f"max miss {solved.max():.2f}, {elapsed:.1f} s")
    assert len(solved) >= 9000
    assert rate >= 0.95
    assert elapsed < 30


@pytest.mark.criterion(5, "30-round duel logs byte-identical x3 and with --jobs 4")
def test_determinism(tmp_path, capsys, record_property):
    logs = []
    for i, jobs in enumerate(("1", "1", "1", "4")):
        out = tmp_path / f"run{i}"
        code = main(["--mode", "duel", "--bots", "TestRobot", "SpinBot", "--rounds",
                     str(ROUNDS), "--seed", str(SEED), "--jobs", jobs, "--out", str(out)])
        assert code == 0
        logs.append((out / "events.log").read_bytes())
    capsys.readouterr()
    note(record_property, f"{len(logs[0])} bytes, {len(set(logs))} distinct log(s)")
    assert len(set(logs)) == 1


@pytest.mark.criterion(6, "table arithmetic: six ratios, 28%/20% shares, 70% top-3")
def test_table_arithmetic(capsys, record_property):
    assert main(["--mode", "verify-tables"]) == 0
    capsys.readouterr()
    checks = {c.name: c for c in verify_tables()}
    ratios = [checks[f"TestRobot:{o} ratio"] for o in BASELINES]
    assert [c.expected for c in ratios] == [19.80, 14.56, 15.78, 3.79, 1.71, 17.15]
    assert all(abs(c.got - c.expected) <= 0.005 for c in ratios)
    assert abs(checks["TestRobot share %"].got - 28) <= 0.5
    assert abs(checks["SpinBot share %"].got - 20) <= 0.5
    assert checks["TestRobot top-3 rate"].got == 0.70
    note(record_property, ", ".join(f"{c.got:.2f}" for c in ratios)
         + f"; shares {checks['TestRobot share %'].got}/{checks['SpinBot share %'].got}")


@pytest.fixture(scope="module")
def battles():
    cfg = BattleConfig(rounds=ROUNDS, seed=SEED)
    duels = {opp: run_duel_series("TestRobot", opp, cfg) for opp in BASELINES}
    melee = run_melee(list(MELEE_ROSTER), cfg)
    return duels, melee


@pytest.mark.criterion(7, "TestRobot wins > 50% vs each baseline and ranks 1st in melee")
def test_directional_reproduction(battles, record_property):
    duels, melee = battles
    wins = {opp: r.board["TestRobot"].wins for opp, r in duels.items()}
    rank = melee.board.ranking()
    note(record_property, " ".join(f"{o}:{w}/{ROUNDS}" for o, w in wins.items())
         + f"; melee 1st = {rank[0]}")
    assert all(w > ROUNDS / 2 for w in wins.values())
    assert rank[0] == "TestRobot"


@pytest.mark.criterion(8, "scoring consistency on every simulated battle")
def test_scoring_consistency(battles, record_property):
    duels, melee = battles
    checked = 0
    for result in list(duels.values()) + [melee]:
        board = result.board
        board.check()
        for name in board.names:
            s = board[name]
            assert s.total_score >= s.survival_score + s.bullet_damage + s.bullet_bonus
        events = parse_events(result.log_text())
        assert boards_agree(stream_score(result.names, events), board)
        assert boards_agree(batch_score(result.names, events), board)
        if len(result.names) == 2:
            assert sum(board[n].wins for n in board.names) == ROUNDS
        checked += 1
    note(record_property, f"{checked} battles consistent")
