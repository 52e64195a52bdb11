"""Per-episode metrics CSV."""

from __future__ import annotations

import csv

from .training import EpisodeRecord

COLUMNS = ("episode", "reward_or_steps", "win_flag", "epsilon", "window_stat", "wall_ms")


def _num(v):
    # repr round-trips float64 exactly
    return "" if v is None else repr(v)


def write_metrics_csv(records, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(COLUMNS)
        for r in records:
            w.writerow(
                [
                    r.episode,
                    _num(r.reward_or_steps),
                    "" if r.win is None else int(r.win),
                    _num(r.epsilon),
                    _num(r.window_stat),
                    _num(r.wall_ms),
                ]
            )


def read_metrics_csv(path) -> list[EpisodeRecord]:
    """Inverse of :func:`write_metrics_csv`."""
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != COLUMNS:
            raise ValueError(f"unexpected header {reader.fieldnames}")
        for row in reader:
            maze = row["win_flag"] != ""
            value = float(row["reward_or_steps"])
            out.append(
                EpisodeRecord(
                    episode=int(row["episode"]),
                    reward=float("nan") if maze else value,
                    steps=int(value),
                    win=bool(int(row["win_flag"])) if maze else None,
                    epsilon=float(row["epsilon"]),
                    window_stat=float(row["window_stat"]),
                    wall_ms=float(row["wall_ms"]) if row["wall_ms"] else None,
                )
            )
    return out
