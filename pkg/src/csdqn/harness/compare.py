"""Baseline versus binary-ensemble comparison over a set of seeds."""

from __future__ import annotations

import csv
import dataclasses
import math
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from ..exceptions import ConfigError
from .config import TrainConfig
from .training import run_training


@dataclass
class ComparisonReport:
    env: str
    algo: str
    seeds: list
    runs: dict  # (mode, seed) -> RunSummary
    modes: tuple
    records: dict = dataclasses.field(default_factory=dict, repr=False)  # (mode, seed) -> records
    seconds: dict = dataclasses.field(default_factory=dict, repr=False)  # (mode, seed) -> wall time

    def solve_episodes(self, mode):
        return [self.runs[mode, s].solve_episode for s in self.seeds]

    def n_solved(self, mode):
        return sum(1 for e in self.solve_episodes(mode) if e is not None)

    def median(self, mode):
        """Median solve episode, unsolved runs counted as never solving (inf)."""
        eps = [math.inf if e is None else e for e in self.solve_episodes(mode)]
        return statistics.median(eps) if eps else math.nan

    def mode_seconds(self, mode):
        return sum(self.seconds.get((mode, s), 0.0) for s in self.seeds)

    def total_wins(self, mode):
        return [self.runs[mode, s].total_wins for s in self.seeds]

    @property
    def direction(self):
        """Sign of (second mode median - first mode median); -1 means the second converged sooner."""
        base, other = (self.median(m) for m in self.modes)
        if math.isinf(base) and math.isinf(other):
            return 0
        diff = other - base
        return (diff > 0) - (diff < 0)

    def rows(self):
        for mode in self.modes:
            for s in self.seeds:
                run = self.runs[mode, s]
                yield s, mode, int(run.solved), "" if run.solve_episode is None else run.solve_episode

    def write_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(("seed", "mode", "solved", "solve_episode"))
            w.writerows(self.rows())

    def to_text(self) -> str:
        lines = [f"env={self.env} algo={self.algo} seeds={','.join(map(str, self.seeds))}"]
        for mode in self.modes:
            med = self.median(mode)
            eps = ["-" if e is None else str(e) for e in self.solve_episodes(mode)]
            lines.append(
                f"{mode:>11}: solved {self.n_solved(mode)}/{len(self.seeds)}"
                f"  median={'unsolved' if math.isinf(med) else med}  per-seed=[{' '.join(eps)}]"
            )
            if self.env == "maze":
                lines.append(f"{'':>11}  total wins at stop: {self.total_wins(mode)}")
        verdict = {-1: "earlier", 0: "equal", 1: "later"}[self.direction]
        lines.append(f"direction: {self.modes[1]} converges {verdict} than {self.modes[0]} (sign={self.direction:+d})")
        return "\n".join(lines) + "\n"


def _run(cfg: TrainConfig):
    t0 = time.perf_counter()
    summary, records = run_training(cfg)
    return summary, records, time.perf_counter() - t0


def compare_runs(config_base: TrainConfig, config_mas: TrainConfig, seeds, jobs: int = 1) -> ComparisonReport:
    """Train both configurations on every seed.

    The two configurations must agree on every hyperparameter; normally only
    ``mode`` differs. Independent runs are farmed out to ``jobs`` processes.
    """
    base = config_base.resolved()
    mas = config_mas.resolved()
    if base.hyperparameters() != mas.hyperparameters():
        diff = {
            k for k, v in base.hyperparameters().items() if mas.hyperparameters()[k] != v
        }
        raise ConfigError(f"compared configs differ beyond mode: {sorted(diff)}")
    seeds = [int(s) for s in seeds]
    jobs_list = [(cfg.mode, s, dataclasses.replace(cfg, seed=s)) for cfg in (base, mas) for s in seeds]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run, [j[2] for j in jobs_list]))
    else:
        results = [_run(j[2]) for j in jobs_list]
    # same mode compared with itself: key collisions are harmless, the runs are identical
    runs = {(mode, s): res[0] for (mode, s, _), res in zip(jobs_list, results)}
    records = {(mode, s): res[1] for (mode, s, _), res in zip(jobs_list, results)}
    seconds = {(mode, s): res[2] for (mode, s, _), res in zip(jobs_list, results)}
    return ComparisonReport(base.env, base.algo, seeds, runs, (base.mode, mas.mode), records, seconds)
