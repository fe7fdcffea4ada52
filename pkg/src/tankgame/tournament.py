"""Duel series, melee battles and the score arithmetic behind the result tables."""
from __future__ import annotations

import csv
import io
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from importlib import resources
from pathlib import Path
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .engine import (BattleConfig, BattleResult, Bot, Event, RoundResult, run_round,
                     unique_names)

log = logging.getLogger(__name__)

SURVIVAL_POINTS = 50.0
LAST_SURVIVOR_POINTS = 10.0
BULLET_DAMAGE_POINTS = 1.0
BULLET_KILL_BONUS = 0.20
MAX_TIE_REPLAYS = 10
REPLAY_SEED_OFFSET = 1      # attempt index added to the round seed on a tied duel round

# quoted in the melee discussion: top-three finishes over 30 rounds
STATED_TOP3 = 0.70


class ScoringError(KeyError):
    pass


class TableDataError(ValueError):
    pass


class UndefinedRatio(ZeroDivisionError):
    pass


@dataclass
class BotScore:
    survival_score: float = 0.0
    last_survivor_bonus: float = 0.0
    bullet_damage: float = 0.0
    bullet_bonus: float = 0.0
    ram_damage: float = 0.0
    firsts: int = 0
    seconds: int = 0
    thirds: int = 0
    wins: int = 0

    @property
    def total_score(self) -> float:
        return (self.survival_score + self.last_survivor_bonus + self.bullet_damage
                + self.bullet_bonus + self.ram_damage)

    def as_tuple(self):
        return tuple(getattr(self, f.name) for f in fields(self))


@dataclass
class ScoreBoard:
    scores: dict[str, BotScore] = field(default_factory=dict)
    rounds: int = 0

    @classmethod
    def for_bots(cls, names: Iterable[str]) -> "ScoreBoard":
        return cls({n: BotScore() for n in names})

    def __getitem__(self, name: str) -> BotScore:
        try:
            return self.scores[name]
        except KeyError:
            raise ScoringError(f"unknown bot {name!r}") from None

    @property
    def names(self) -> list[str]:
        return list(self.scores)

    def ranking(self) -> list[str]:
        """Bots by total score, highest first; roster order breaks ties."""
        order = list(self.scores)
        return sorted(order, key=lambda n: (-self.scores[n].total_score, order.index(n)))

    def totals(self) -> dict[str, float]:
        return {n: s.total_score for n, s in self.scores.items()}

    def check(self) -> None:
        """Raise AssertionError when an invariant is broken."""
        for name, s in self.scores.items():
            for f in fields(s):
                assert getattr(s, f.name) >= 0, (name, f.name)
            assert s.firsts + s.seconds + s.thirds <= self.rounds, name
            assert s.total_score >= s.survival_score + s.bullet_damage + s.bullet_bonus - 1e-9


def score_event(board: ScoreBoard, event: Event) -> ScoreBoard:
    """Fold one event into ``board`` (in place) and return it."""
    d = event.data
    kind = event.kind
    if kind == "bullet_hit":
        board[d["whom"]]
        board[d["who"]].bullet_damage += BULLET_DAMAGE_POINTS * d["damage"]
    elif kind == "robot_death":
        board[d["who"]]
        for name in d["alive_after"]:
            board[name].survival_score += SURVIVAL_POINTS
        if d.get("killer"):
            board[d["killer"]].bullet_bonus += BULLET_KILL_BONUS * d["killer_damage"]
    elif kind == "round_end":
        board.rounds += 1
        placements = d["placements"]
        for name in placements:
            board[name]
        slots = ("firsts", "seconds", "thirds")
        for name, slot in zip(placements, slots):
            s = board[name]
            setattr(s, slot, getattr(s, slot) + 1)
        if d.get("survivor"):
            board[d["survivor"]].last_survivor_bonus += LAST_SURVIVOR_POINTS * (len(placements) - 1)
        if d.get("winner"):
            board[d["winner"]].wins += 1
    elif kind in ("scan", "fire", "bullet_miss", "wall_hit", "robot_collision",
                  "inactivity", "fault"):
        if "who" in d:
            board[d["who"]]
    return board


def stream_score(names: Sequence[str], events: Iterable[Event]) -> ScoreBoard:
    board = ScoreBoard.for_bots(names)
    for e in events:
        score_event(board, e)
    return board


def batch_score(names: Sequence[str], events: Sequence[Event]) -> ScoreBoard:
    """Score a whole log at once from per-round tables.

    Deliberately does not reuse :func:`score_event`: survival comes from death
    ticks, kill bonuses from summed hit damage, placements from the round
    summary.
    """
    names = list(names)
    idx = {n: i for i, n in enumerate(names)}
    n = len(names)
    dmg = np.zeros(n)
    survival = np.zeros(n)
    bonus = np.zeros(n)
    lsb = np.zeros(n)
    places = np.zeros((n, 3), dtype=int)
    wins = np.zeros(n, dtype=int)
    rounds = 0
    by_round: dict[tuple, list[Event]] = {}
    for e in events:
        by_round.setdefault(e.round, []).append(e)
    for rnd in sorted(by_round):
        evs = by_round[rnd]
        pair = np.zeros((n, n))
        hits = [e for e in evs if e.kind == "bullet_hit"]
        death_tick = {}
        killer = {}
        for e in evs:
            if e.kind == "robot_death":
                death_tick[e.data["who"]] = e.tick
                killer[e.data["who"]] = e.data.get("killer")
        for e in hits:
            i, j = idx[e.data["who"]], idx[e.data["whom"]]
            dmg[i] += e.data["damage"]
            pair[i, j] += e.data["damage"]
        ticks = np.array([death_tick.get(m, np.inf) for m in names])
        for who, tk in death_tick.items():
            survival[ticks > tk] += SURVIVAL_POINTS
            k = killer.get(who)
            if k:
                bonus[idx[k]] += BULLET_KILL_BONUS * pair[idx[k], idx[who]]
        end = [e for e in evs if e.kind == "round_end"]
        if len(end) != 1:
            raise ScoringError(f"round {rnd} has {len(end)} round_end events")
        end = end[0].data
        rounds += 1
        for place, name in enumerate(end["placements"][:3]):
            places[idx[name], place] += 1
        if end.get("survivor"):
            lsb[idx[end["survivor"]]] += LAST_SURVIVOR_POINTS * (len(end["placements"]) - 1)
        if end.get("winner"):
            wins[idx[end["winner"]]] += 1
    board = ScoreBoard(rounds=rounds)
    for i, name in enumerate(names):
        board.scores[name] = BotScore(
            survival_score=float(survival[i]), last_survivor_bonus=float(lsb[i]),
            bullet_damage=float(dmg[i]), bullet_bonus=float(bonus[i]),
            firsts=int(places[i, 0]), seconds=int(places[i, 1]), thirds=int(places[i, 2]),
            wins=int(wins[i]))
    return board


def boards_agree(a: ScoreBoard, b: ScoreBoard, tol: float = 1e-6) -> bool:
    if a.names != b.names or a.rounds != b.rounds:
        return False
    for name in a.names:
        for x, y in zip(a[name].as_tuple(), b[name].as_tuple()):
            if abs(x - y) > tol * max(1.0, abs(x)):
                return False
    return True


# -- running battles ------------------------------------------------------------

def _resolve(bot) -> Callable[[], Bot]:
    if isinstance(bot, str):
        from .bots import bot_factory
        return bot_factory(bot)
    return bot


def _play_one(args) -> RoundResult:
    config, factories, names, index, replay_ties = args
    attempt = 0
    while True:
        bots = [f() for f in factories]
        result = run_round(config, bots, names, index, attempt)
        if result.winner is not None or not replay_ties:
            return result
        attempt += REPLAY_SEED_OFFSET
        if attempt > MAX_TIE_REPLAYS:
            # give up replaying: fall back to placement order
            result.winner = result.placements[0]
            result.events[-1].data["winner"] = result.winner
            return result
        log.info("round %d tied, replaying (attempt %d)", index, attempt)


def play_rounds(config: BattleConfig, factories: Sequence, names: Sequence[str],
                jobs: int = 1, replay_ties: bool | None = None) -> list[RoundResult]:
    """Run every round of a battle; results come back in round order."""
    factories = [_resolve(f) for f in factories]
    if replay_ties is None:
        replay_ties = len(factories) == 2
    tasks = [(config, factories, list(names), i, replay_ties) for i in range(config.rounds)]
    if jobs <= 1:
        return [_play_one(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_play_one, tasks))


def score_rounds(names: Sequence[str], rounds: Sequence[RoundResult]) -> ScoreBoard:
    return stream_score(names, (e for r in rounds for e in r.events))


def run_battle(config: BattleConfig, bots: Sequence, jobs: int = 1,
               replay_ties: bool | None = None) -> BattleResult:
    factories = [_resolve(b) for b in bots]
    raw = [b if isinstance(b, str) else getattr(b, "name", "Bot") for b in bots]
    names = unique_names(raw)
    rounds = play_rounds(config, factories, names, jobs, replay_ties)
    return BattleResult(names, rounds, score_rounds(names, rounds))


def run_duel_series(a, b, config: BattleConfig | None = None, jobs: int = 1) -> BattleResult:
    """``config.rounds`` duel rounds between two bots (names or factories)."""
    config = config or BattleConfig()
    return run_battle(config, [a, b], jobs=jobs, replay_ties=True)


def run_melee(roster: Sequence, config: BattleConfig | None = None, jobs: int = 1) -> BattleResult:
    if len(roster) < 3:
        raise ValueError("a melee needs at least three bots")
    config = config or BattleConfig()
    return run_battle(config, roster, jobs=jobs, replay_ties=False)


# -- statistics ---------------------------------------------------------------

def relative_total(a_score: float, b_score: float) -> float:
    """``a / b`` rounded to two decimals."""
    if b_score == 0:
        raise UndefinedRatio("relative total against a zero score")
    return round(a_score / b_score, 2)


def score_share(board) -> dict[str, int]:
    """Whole-percent share of the summed total score, per bot.

    Accepts a :class:`ScoreBoard` or a name->total mapping.
    """
    totals = board.totals() if isinstance(board, ScoreBoard) else dict(board)
    s = sum(totals.values())
    if s <= 0:
        raise ValueError("no positive totals")
    return {n: int(round(100.0 * v / s)) for n, v in totals.items()}


def top3_rate(score, rounds: int | None = None) -> float:
    """Fraction of rounds finished in the top three.

    ``score`` is a :class:`BotScore` or a (firsts, seconds, thirds) triple.
    """
    if isinstance(score, BotScore):
        placed = score.firsts + score.seconds + score.thirds
    else:
        placed = sum(score)
    if not rounds:
        raise ValueError("rounds must be positive")
    return placed / rounds


# -- result tables ---------------------------------------------------------------

def _read_csv(text: str) -> list[dict]:
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


TABLE1_INT = ("total_a", "total_b", "survival_a", "survival_b", "damage_a", "damage_b",
              "bonus_a", "bonus_b", "wins_a", "wins_b")
TABLE2_INT = ("rank", "total", "share_pct", "survival", "damage", "bonus",
              "firsts", "seconds", "thirds")


def load_result_tables(table1: str | Path | None = None, table2: str | Path | None = None):
    """Load the duel and melee tables as lists of typed rows."""
    def text(path, default):
        if path is None:
            return (resources.files("tankgame") / "data" / default).read_text()
        return Path(path).read_text()

    try:
        t1 = _read_csv(text(table1, "duel_table.csv"))
        t2 = _read_csv(text(table2, "melee_table.csv"))
        for row in t1:
            for k in TABLE1_INT:
                row[k] = int(row[k])
            row["stated_ratio"] = float(row["stated_ratio"])
        for row in t2:
            for k in TABLE2_INT:
                row[k] = int(row[k])
    except (KeyError, ValueError, TypeError, csv.Error) as exc:
        raise TableDataError(f"corrupt table data: {exc}") from exc
    if len(t1) != 6 or len(t2) != 7:
        raise TableDataError(f"expected 6 duel rows and 7 melee rows, got {len(t1)}/{len(t2)}")
    return t1, t2


@dataclass
class Check:
    name: str
    expected: float
    got: float
    tol: float

    @property
    def ok(self) -> bool:
        return abs(self.expected - self.got) <= self.tol

    def line(self) -> str:
        flag = "ok  " if self.ok else "FAIL"
        return f"{flag} {self.name:<32} expected {self.expected:<8g} got {self.got:g}"


def verify_tables(table1=None, table2=None) -> list[Check]:
    """Recompute the derived statistics quoted alongside the result tables."""
    t1, t2 = load_result_tables(table1, table2)
    checks = []
    for row in t1:
        ratio = relative_total(row["total_a"], row["total_b"])
        checks.append(Check(f"TestRobot:{row['opponent']} ratio", row["stated_ratio"],
                            ratio, 0.005))
    shares = score_share({r["robot"]: r["total"] for r in t2})
    for r in t2:
        checks.append(Check(f"{r['robot']} share %", r["share_pct"], shares[r["robot"]], 0.5))
    ranking = sorted(t2, key=lambda r: -r["total"])
    for pos, r in enumerate(ranking, 1):
        checks.append(Check(f"{r['robot']} rank", r["rank"], pos, 0))
    test = next(r for r in t2 if r["robot"] == "TestRobot")
    checks.append(Check("TestRobot top-3 rate", STATED_TOP3,
                        top3_rate((test["firsts"], test["seconds"], test["thirds"]), 30), 0))
    return checks


# -- reporting ----------------------------------------------------------------

CSV_HEADER = ("rank", "robot", "total_score", "share_pct", "survival", "last_survivor_bonus",
              "bullet_damage", "bullet_bonus", "ram_damage", "firsts", "seconds", "thirds",
              "wins")


def board_rows(board: ScoreBoard) -> list[tuple]:
    shares = score_share(board) if any(v > 0 for v in board.totals().values()) else {}
    rows = []
    for rank, name in enumerate(board.ranking(), 1):
        s = board[name]
        rows.append((rank, name, round(s.total_score), shares.get(name, 0),
                     round(s.survival_score), round(s.last_survivor_bonus),
                     round(s.bullet_damage), round(s.bullet_bonus), round(s.ram_damage),
                     s.firsts, s.seconds, s.thirds, s.wins))
    return rows


def format_board(board: ScoreBoard) -> str:
    """Aligned text table: rank, name, total (share), then the score parts."""
    head = ("Rank", "Robot Name", "Total Score", "Survival", "Surv Bonus", "Bullet Damage",
            "Bullet Bonus", "Ram", "1sts", "2nds", "3rds", "WINS")
    body = []
    for r in board_rows(board):
        body.append((str(r[0]), r[1], f"{r[2]} ({r[3]}%)") + tuple(str(x) for x in r[4:]))
    widths = [max(len(x) for x in col) for col in zip(head, *body)]
    fmt = lambda row: "  ".join(c.ljust(w) if i == 1 else c.rjust(w)
                                for i, (c, w) in enumerate(zip(row, widths)))
    return "\n".join([fmt(head), "-" * (sum(widths) + 2 * (len(widths) - 1))]
                     + [fmt(r) for r in body]) + "\n"


def board_csv(board: ScoreBoard) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(CSV_HEADER)
    w.writerows(board_rows(board))
    return out.getvalue()


PLOT_CATEGORIES = {
    "Total Score": lambda s: s.total_score,
    "Survival": lambda s: s.survival_score,
    "Bullet Damage": lambda s: s.bullet_damage,
    "Bullet Bonus": lambda s: s.bullet_bonus,
}


def plot_data(board: ScoreBoard, melee: bool = False) -> str:
    """``category,bot,value`` triples for a bar chart (duel) or radar chart (melee)."""
    cats = dict(PLOT_CATEGORIES)
    if melee:
        cats.update({"1sts": lambda s: s.firsts, "2nds": lambda s: s.seconds,
                     "3rds": lambda s: s.thirds})
    else:
        cats["WINS"] = lambda s: s.wins
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(("category", "bot", "value"))
    for cat, fn in cats.items():
        for name in board.names:
            w.writerow((cat, name, round(float(fn(board[name])), 3)))
    return out.getvalue()


def duel_row(board: ScoreBoard) -> str:
    """One line in the layout of the duel table: A vs B, then a|b pairs."""
    a, b = board.names
    sa, sb = board[a], board[b]
    pairs = [(sa.total_score, sb.total_score), (sa.survival_score, sb.survival_score),
             (sa.bullet_damage, sb.bullet_damage), (sa.bullet_bonus, sb.bullet_bonus),
             (sa.wins, sb.wins)]
    cells = "  ".join(f"{round(x):>5} {round(y):>5}" for x, y in pairs)
    return f"{a} vs {b}  {cells}"
