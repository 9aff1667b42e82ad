"""Command-line front door.

Subcommands: train, simulate, eval-policy, compare, export, serve.
Exit codes: 0 ok, 1 usage error, 2 config error, 3 acceptance-check failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Optional

from .experiments import (
    ExperimentConfig,
    compare,
    eval_policy_report,
    export_stats,
    read_stats,
    simulate,
    stats_to_csv,
    train_policy,
    training_curve_to_csv,
)
from .mentalising import MODE_NOTOM, MODE_TOM
from .players import PlayerSpec
from .qlearn import load_qtable, save_qtable

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CONFIG = 2
EXIT_CHECK_FAILED = 3


class UsageError(SystemExit):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


class ConfigError(Exception):
    pass


def _load_config(args: argparse.Namespace) -> ExperimentConfig:
    data: dict = {}
    if getattr(args, "config", None):
        try:
            with open(args.config, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config!r}: {exc}")
    try:
        config = ExperimentConfig.from_json_dict(data) if data else ExperimentConfig()
    except (TypeError, ValueError, KeyError) as exc:
        raise ConfigError(f"bad config: {exc}")
    if getattr(args, "seed", None) is not None:
        config.seed = args.seed
    if getattr(args, "mode", None) is not None:
        config.mode = args.mode
    if getattr(args, "episodes", None) is not None:
        config.episodes = args.episodes
    if getattr(args, "n_games", None) is not None:
        config.n_games = args.n_games
    if getattr(args, "backup", None) is not None:
        config.backup = args.backup
    if os.environ.get("SOURCE_DATE_EPOCH") and config.created_at is None:
        config.created_at = float(int(os.environ["SOURCE_DATE_EPOCH"]))
    return config


def _out_dir(args: argparse.Namespace) -> Path:
    out = Path(getattr(args, "out", None) or ".")
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ConfigError(f"cannot create output directory {out}: {exc}")
    return out


def cmd_train(args: argparse.Namespace) -> int:
    config = _load_config(args)
    table, curve = train_policy(config)
    out = _out_dir(args)
    table_path = out / "qtable.json"
    save_qtable(table, str(table_path))
    curve_path = out / "training_curve.csv"
    with open(curve_path, "w", encoding="utf-8") as fh:
        fh.write(training_curve_to_csv(curve, config.to_json_dict()))
    print(f"trained {config.episodes} episodes (seed {config.seed}) -> {table_path}")
    print(f"training curve -> {curve_path}")
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    config = _load_config(args)
    policy = args.policy
    if policy not in ("perfect", "none") and not Path(policy).is_file():
        raise ConfigError(f"policy {policy!r} is neither 'perfect', 'none' nor a readable file")
    stats = simulate(
        policy, config.player, config.n_games, config.seed,
        mode=config.mode, params=config.reward_params, window=config.window,
    )
    summary = stats.summary()
    print(f"arm={policy} n={summary['n']} mean_moves={summary['mean_moves']:.2f} "
          f"sd_moves={summary['sd_moves']:.2f} mean_flips={summary['mean_flips']:.2f}")
    print(f"normalized_assistance={summary['mean_normalized_assistance']:.4f} "
          f"follow_rate={summary['follow_rate']:.4f} "
          f"match_from_hint_rate={summary['match_from_hint_rate']:.4f}")
    if getattr(args, "out", None):
        out = _out_dir(args)
        path = out / f"simulate_{Path(policy).stem}_{config.seed}.csv"
        header = dict(config.to_json_dict(), policy=str(policy))
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(stats_to_csv(stats, header))
        print(f"per-game stats -> {path}")
    return EXIT_OK


def cmd_eval_policy(args: argparse.Namespace) -> int:
    try:
        table = load_qtable(args.policy)
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot load policy {args.policy!r}: {exc}")
    report = eval_policy_report(table)
    print("greedy policy (phase, prev_assist, prev_outcome -> action):")
    for entry in report["grid"]:
        print(f"  {entry['phase']:6s} {entry['prev_assist']:8s} "
              f"{entry['prev_outcome']:9s} -> {entry['action']}")
    print("checks:")
    for name, ok in report["checks"].items():
        print(f"  {name}: {'PASS' if ok else 'FAIL'}")
    diag = report["diagnostics"]
    print(f"  first-flip assistance mass:  {diag['first_flip_assistance_mass']:.3f}")
    print(f"  second-flip assistance mass: {diag['second_flip_assistance_mass']:.3f}")
    if not report["pass"]:
        print("policy structure checks FAILED", file=sys.stderr)
        return EXIT_CHECK_FAILED
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    try:
        config_a, stats_a = read_stats(args.stats_a)
        config_b, stats_b = read_stats(args.stats_b)
    except (OSError, ValueError, KeyError) as exc:
        raise ConfigError(f"cannot read stats: {exc}")
    report = compare(stats_a, stats_b, label_a=args.stats_a, label_b=args.stats_b,
                     config_a=config_a, config_b=config_b)
    if report["config_mismatch"]:
        print(f"WARNING: configs differ in {report['config_mismatch']}")
    for label in report["labels"]:
        side = report[label]
        print(f"{label}: n={side['n']} mean_moves={side['mean_moves']:.2f} "
              f"sd={side['sd_moves']:.2f} "
              f"norm_assist={side['mean_normalized_assistance']:.4f} "
              f"follow_rate={side['follow_rate']:.4f} "
              f"match_from_hint={side['match_from_hint_rate']:.4f}")
    deltas = report["deltas"]
    print("deltas (B - A): " + " ".join(f"{k}={v:+.4f}" for k, v in deltas.items()))
    return EXIT_OK


def cmd_export(args: argparse.Namespace) -> int:
    if args.format not in ("csv", "json"):
        raise ConfigError(f"unknown format {args.format!r}")
    try:
        config, stats = read_stats(args.stats)
    except (OSError, ValueError, KeyError) as exc:
        raise ConfigError(f"cannot read stats: {exc}")
    export_stats(stats, config, args.format, args.dest)
    print(f"exported {stats.n} games -> {args.dest}")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    if not Path(args.policy_dir).is_dir():
        raise ConfigError(f"policy directory {args.policy_dir!r} does not exist")
    app = create_app(args.policy_dir, args.log_dir)
    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pairmind", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--config", type=str, default=None, help="experiment config JSON file")
        p.add_argument("--out", type=str, default=None, help="output directory")
        p.add_argument("--mode", choices=[MODE_TOM, MODE_NOTOM], default=None)

    p_train = sub.add_parser("train", help="train a Q-table in simulation")
    common(p_train)
    p_train.add_argument("--episodes", type=int, default=None)
    p_train.add_argument("--backup", choices=["move", "game"], default=None)
    p_train.set_defaults(func=cmd_train)

    p_sim = sub.add_parser("simulate", help="run a batch simulation arm")
    common(p_sim)
    p_sim.add_argument("policy", help="'perfect', 'none' or a Q-table JSON file")
    p_sim.add_argument("--n-games", dest="n_games", type=int, default=None)
    p_sim.set_defaults(func=cmd_simulate)

    p_eval = sub.add_parser("eval-policy", help="qualitative structure report for a trained table")
    common(p_eval)
    p_eval.add_argument("policy", help="Q-table JSON file")
    p_eval.set_defaults(func=cmd_eval_policy)

    p_cmp = sub.add_parser("compare", help="side-by-side report over two stats files")
    common(p_cmp)
    p_cmp.add_argument("stats_a")
    p_cmp.add_argument("stats_b")
    p_cmp.set_defaults(func=cmd_compare)

    p_exp = sub.add_parser("export", help="convert a stats file between csv and json")
    common(p_exp)
    p_exp.add_argument("stats")
    p_exp.add_argument("--format", required=True, choices=["csv", "json"])
    p_exp.add_argument("--dest", required=True)
    p_exp.set_defaults(func=cmd_export)

    p_srv = sub.add_parser("serve", help="run the live play service")
    common(p_srv)
    p_srv.add_argument("--policy-dir", required=True)
    p_srv.add_argument("--log-dir", default="./session_logs")
    p_srv.add_argument("--host", default="127.0.0.1")
    p_srv.add_argument("--port", type=int, default=8000)
    p_srv.set_defaults(func=cmd_serve)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
