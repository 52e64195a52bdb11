from .compare import ComparisonReport, compare_runs
from .config import TrainConfig, parse_config
from .metrics import read_metrics_csv, write_metrics_csv
from .training import (
    EpisodeRecord,
    RunSummary,
    check_solved_cartpole,
    check_solved_maze,
    run_training,
    total_win_count,
)

__all__ = [
    "ComparisonReport",
    "EpisodeRecord",
    "RunSummary",
    "TrainConfig",
    "check_solved_cartpole",
    "check_solved_maze",
    "compare_runs",
    "parse_config",
    "read_metrics_csv",
    "run_training",
    "total_win_count",
    "write_metrics_csv",
]
