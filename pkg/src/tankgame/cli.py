"""Command-line entry point: run duels and melees, check fixtures and tables.

Exit codes: 0 success, 1 replay mismatch, 2 usage error, 3 I/O error,
4 corrupt table data.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path

from . import __version__
from .bots import BASELINES, BOTS, MELEE_ROSTER, UnknownBot, canonical_name
from .engine import BattleConfig, EngineError, format_config, load_config, parse_config
from .gametree import FIXTURE_NAMES, alphabeta_value, build_fixture
from .tournament import (TableDataError, board_csv, duel_row, format_board, plot_data,
                         run_duel_series, run_melee, verify_tables)

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_IO, EXIT_DATA = 0, 1, 2, 3, 4
OUT_ENV = "TANKGAME_OUT"
FIXTURE_EXPECTED = {"main": 30, "ascending": 100, "descending": 100, "single_branch_max": 160}
MODES = ("duel", "melee", "fixtures", "verify-tables", "replay")


class UsageError(Exception):
    pass


@dataclass
class RunSpec:
    mode: str
    roster: list[str] = field(default_factory=list)
    rounds: int | None = None
    seed: int | None = None
    config_path: str | None = None
    out_dir: Path = Path("tankgame-out")
    jobs: int = 1


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _config(spec: RunSpec) -> BattleConfig:
    config = load_config(spec.config_path) if spec.config_path else BattleConfig()
    if spec.rounds is not None:
        config = replace(config, rounds=spec.rounds)
    if spec.seed is not None:
        config = replace(config, seed=spec.seed)
    return config


def _write(out: Path, files: dict[str, str], manifest: dict) -> None:
    out.mkdir(parents=True, exist_ok=True)
    for name, text in files.items():
        (out / name).write_text(text)
    manifest["artifacts"] = {name: _sha256(out / name) for name in files}
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")


def _manifest(spec: RunSpec, config: BattleConfig, roster) -> dict:
    return {"tool": "tankgame", "version": __version__, "mode": spec.mode,
            "roster": list(roster), "seed": config.seed, "rounds": config.rounds,
            "config": format_config(config)}


def _duel(spec, config, a, b, out: Path) -> str:
    result = run_duel_series(a, b, config, jobs=spec.jobs)
    board = result.board
    files = {
        "scores.txt": format_board(board),
        "scores.csv": board_csv(board),
        "events.log": result.log_text(),
        "hist.csv": plot_data(board),
    }
    _write(out, files, _manifest(spec, config, [a, b]))
    return duel_row(board)


def cmd_duel(spec: RunSpec) -> int:
    config = _config(spec)
    roster = [canonical_name(n) for n in spec.roster] if spec.roster else None
    if roster is not None and len(roster) != 2:
        raise UsageError("duel mode needs exactly two bots")
    if roster:
        print(_duel(spec, config, roster[0], roster[1], spec.out_dir))
        return EXIT_OK
    # bare invocation: TestRobot against every sample robot
    lines = []
    for opp in BASELINES:
        row = _duel(spec, config, "TestRobot", opp, spec.out_dir / f"TestRobot-vs-{opp}")
        print(row)
        lines.append(row)
    spec.out_dir.mkdir(parents=True, exist_ok=True)
    (spec.out_dir / "table1.txt").write_text("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_melee(spec: RunSpec) -> int:
    config = _config(spec)
    roster = [canonical_name(n) for n in spec.roster] if spec.roster else list(MELEE_ROSTER)
    if len(roster) < 3:
        raise UsageError("melee mode needs at least three bots")
    result = run_melee(roster, config, jobs=spec.jobs)
    board = result.board
    files = {
        "scores.txt": format_board(board),
        "scores.csv": board_csv(board),
        "events.log": result.log_text(),
        "radar.csv": plot_data(board, melee=True),
    }
    _write(spec.out_dir, files, _manifest(spec, config, roster))
    print(files["scores.txt"], end="")
    return EXIT_OK


def cmd_fixtures(spec: RunSpec) -> int:
    parts, ok = [], True
    for name in FIXTURE_NAMES:
        res = alphabeta_value(build_fixture(name))
        value = int(res.value) if float(res.value).is_integer() else res.value
        parts.append(f"{name}={value}")
        print(f"{name:<18} value={value:<5} pruned={res.pruned} visited={res.visited}")
        ok &= res.value == FIXTURE_EXPECTED[name]
    print(" ".join(parts))
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_verify_tables(spec: RunSpec, table1=None, table2=None) -> int:
    checks = verify_tables(table1, table2)
    for c in checks:
        print(c.line())
    failed = [c for c in checks if not c.ok]
    print(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    return EXIT_OK if not failed else EXIT_MISMATCH


def cmd_replay(manifest_path: Path, out_dir: Path, jobs: int) -> int:
    """Re-run a recorded battle and compare its event log byte for byte."""
    try:
        manifest = json.loads(manifest_path.read_text())
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read manifest: {exc}") from exc
    config = parse_config(manifest["config"])
    spec = RunSpec(manifest["mode"], manifest["roster"], out_dir=out_dir, jobs=jobs)
    roster = manifest["roster"]
    if manifest["mode"] == "duel":
        _duel(spec, config, roster[0], roster[1], out_dir)
    else:
        result = run_melee(roster, config, jobs=jobs)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "events.log").write_text(result.log_text())
    got = _sha256(out_dir / "events.log")
    want = manifest["artifacts"]["events.log"]
    print(f"events.log {'identical' if got == want else 'DIFFERS'}: {got}")
    return EXIT_OK if got == want else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tankgame", description=__doc__.splitlines()[0])
    p.add_argument("--mode", choices=MODES, default="duel")
    p.add_argument("--bots", nargs="+", default=None,
                   help=f"bot names ({', '.join(BOTS)})")
    p.add_argument("--rounds", type=int, default=None, help="rounds per battle (default 30)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--config", default=None, help="key = value battle config file")
    p.add_argument("--out", default=None, help=f"output directory (env {OUT_ENV})")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for rounds")
    p.add_argument("--tables", nargs=2, metavar=("TABLE1", "TABLE2"), default=None,
                   help="override the checked-in result tables (verify-tables)")
    p.add_argument("--manifest", default=None, help="manifest.json to replay (replay)")
    p.add_argument("--version", action="version", version=__version__)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = Path(args.out or os.environ.get(OUT_ENV) or "tankgame-out")
    spec = RunSpec(args.mode, args.bots or [], args.rounds, args.seed, args.config, out,
                   max(1, args.jobs))
    try:
        if args.rounds is not None and args.rounds < 1:
            raise UsageError("--rounds must be positive")
        if args.mode == "duel":
            return cmd_duel(spec)
        if args.mode == "melee":
            return cmd_melee(spec)
        if args.mode == "fixtures":
            return cmd_fixtures(spec)
        if args.mode == "verify-tables":
            t1, t2 = args.tables or (None, None)
            return cmd_verify_tables(spec, t1, t2)
        if not args.manifest:
            raise UsageError("replay mode needs --manifest")
        return cmd_replay(Path(args.manifest), out, spec.jobs)
    except (UsageError, UnknownBot, EngineError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) else str(exc)
        print(f"tankgame: error: {msg}", file=sys.stderr)
        return EXIT_USAGE
    except TableDataError as exc:
        print(f"tankgame: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"tankgame: error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
