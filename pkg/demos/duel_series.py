"""
A short duel series
===================

TestRobot against SpinBot for a handful of rounds, then the score table and
the relative total the result tables use.
"""
from tankgame.engine import BattleConfig
from tankgame.tournament import duel_row, format_board, relative_total, run_duel_series

config = BattleConfig(rounds=5, seed=1)
result = run_duel_series("TestRobot", "SpinBot", config)

print(format_board(result.board))
print(duel_row(result.board))

totals = result.board.totals()
print("TestRobot : SpinBot =", relative_total(totals["TestRobot"], totals["SpinBot"]))

# every round ends in a round_end record with the placements
for r in result.rounds:
    end = r.events[-1].data
    print(f"round {r.round}: winner {end['winner']} after {r.ticks} ticks")
