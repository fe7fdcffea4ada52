"""
Scoring a saved event log
=========================

Writes a duel's event log to disk, reads it back, and scores it twice: once
event by event and once in bulk. The two boards agree.
"""
import tempfile
from pathlib import Path

from tankgame.engine import BattleConfig, parse_events
from tankgame.tournament import batch_score, boards_agree, run_duel_series, stream_score

result = run_duel_series("TestRobot", "Walls", BattleConfig(rounds=3, seed=4))

path = Path(tempfile.mkdtemp()) / "events.log"
path.write_text(result.log_text())
print(path, path.stat().st_size, "bytes")
print(path.read_text().splitlines()[0])

events = parse_events(path.read_text())
streamed = stream_score(result.names, events)
batch = batch_score(result.names, events)
print("boards agree:", boards_agree(streamed, batch))
for name in result.names:
    print(name, round(streamed[name].total_score, 1), "wins", streamed[name].wins)
