"""Command line entry point: ``csdqn train`` and ``csdqn compare``."""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path

from .exceptions import ConfigError, CsdqnError, MazeParseError, NumericError
from .harness import compare_runs, parse_config, run_training, write_metrics_csv
from .harness.training import agent_learners
from .neuralnet import save_snapshot

EXIT_CONFIG = 2
EXIT_NUMERIC = 3


def _common(p):
    p.add_argument("--config", help="key=value config file")
    p.add_argument("--env", choices=("cartpole", "maze"))
    p.add_argument("--algo", choices=("dqn", "ddqn"))
    p.add_argument("--max-episodes", type=int)
    p.add_argument("--maze-file")
    p.add_argument("--decision", choices=("advantage", "act_value"))
    p.add_argument("--out", help="output directory (default: runs)")
    p.add_argument("--wall-clock", action="store_true", default=None,
                   help="fill the wall_ms column (makes output timing-dependent)")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser():
    parser = argparse.ArgumentParser(prog="csdqn", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train one configuration")
    _common(p)
    p.add_argument("--mode", choices=("single", "binary-mas"))
    p.add_argument("--seed", type=int)

    p = sub.add_parser("compare", help="single learner vs binary ensemble over several seeds")
    _common(p)
    p.add_argument("--seeds", default="1,2,3,4,5", help="comma-separated seeds")
    p.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    return parser


def _load_config(args, **extra):
    text = Path(args.config).read_text(encoding="utf-8") if args.config else ""
    overrides = dict(
        env=args.env,
        algo=args.algo,
        max_episodes=args.max_episodes,
        maze_file=args.maze_file,
        decision=args.decision,
        out_dir=args.out,
        wall_clock=args.wall_clock,
        **extra,
    )
    return parse_config(text, overrides).resolved()


def cmd_train(args) -> int:
    cfg = _load_config(args, mode=args.mode, seed=args.seed)
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    summary, records, agent = run_training(cfg, return_agent=True)
    write_metrics_csv(records, out / "metrics.csv")
    (out / "config.txt").write_text(cfg.to_text(), encoding="utf-8")
    for i, learner in enumerate(agent_learners(agent)):
        save_snapshot(learner.online, out / f"agent{i}.mlp")
    info = dataclasses.asdict(summary)
    info["config"] = cfg.to_text().splitlines()
    (out / "summary.json").write_text(json.dumps(info, indent=2) + "\n", encoding="utf-8")
    state = f"solved at episode {summary.solve_episode}" if summary.solved else "not solved"
    print(f"{cfg.env}/{cfg.algo}/{cfg.mode} seed={cfg.seed}: {state} "
          f"after {summary.total_episodes} episodes ({summary.total_steps} steps)")
    return 0


def cmd_compare(args) -> int:
    try:
        seeds = [int(s) for s in args.seeds.split(",") if s.strip()]
    except ValueError:
        raise ConfigError(f"bad --seeds value {args.seeds!r}") from None
    if not seeds:
        raise ConfigError("--seeds is empty")
    base = _load_config(args, mode="single")
    mas = dataclasses.replace(base, mode="binary-mas")
    report = compare_runs(base, mas, seeds, jobs=args.jobs)
    out = Path(base.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    report.write_csv(out / "comparison.csv")
    text = report.to_text()
    (out / "comparison.txt").write_text(text, encoding="utf-8")
    for (mode, seed), records in report.records.items():
        write_metrics_csv(records, out / f"metrics_{mode}_seed{seed}.csv")
    print(text, end="")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "train":
            return cmd_train(args)
        return cmd_compare(args)
    except (ConfigError, MazeParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except CsdqnError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
