"""
Seven-tank melee
================

All seven bots in one arena. Prints the board, each bot's share of the
total score, and TestRobot's top-three rate.
"""
from tankgame.bots import MELEE_ROSTER
from tankgame.engine import BattleConfig
from tankgame.tournament import format_board, run_melee, score_share, top3_rate

config = BattleConfig(rounds=5, seed=2)
result = run_melee(list(MELEE_ROSTER), config)
board = result.board

print(format_board(board))
print(score_share(board))
print("TestRobot top-3 rate:", top3_rate(board["TestRobot"], board.rounds))

# the raw log is JSON lines; count what happened
kinds = {}
for e in result.events:
    kinds[e.kind] = kinds.get(e.kind, 0) + 1
print(kinds)
