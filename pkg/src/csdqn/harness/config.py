"""Training configuration and its ``key=value`` file format."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

from ..exceptions import ConfigError

ENVS = ("cartpole", "maze")
ALGOS = ("dqn", "ddqn")
MODES = ("single", "binary-mas")
DECISIONS = ("advantage", "act_value")

# per-environment defaults for fields left as None
ENV_DEFAULTS = {
    "cartpole": dict(gamma=0.99, sync_period=200, buffer_capacity=10_000, max_episodes=1500, solve_window=100),
    "maze": dict(gamma=0.95, sync_period=100, buffer_capacity=8_000, max_episodes=2000, solve_window=32),
}


@dataclass
class TrainConfig:
    env: str = "cartpole"
    algo: str = "dqn"
    mode: str = "single"
    seed: int = 0
    max_episodes: int | None = None
    gamma: float | None = None
    batch_size: int = 32
    sync_period: int | None = None
    epsilon_start: float = 1.0
    epsilon_min: float = 0.01
    epsilon_decay: float = 0.995
    learning_rate: float = 1e-3
    buffer_capacity: int | None = None
    hidden_sizes: tuple = (64, 64)
    decision: str = "advantage"
    solve_window: int | None = None
    maze_file: str | None = None
    out_dir: str = "runs"
    wall_clock: bool = False

    def resolved(self) -> "TrainConfig":
        """Copy with every environment-dependent default filled in, validated."""
        if self.env not in ENVS:
            raise ConfigError(f"env must be one of {ENVS}, got {self.env!r}")
        fill = {k: v for k, v in ENV_DEFAULTS[self.env].items() if getattr(self, k) is None}
        cfg = dataclasses.replace(self, **fill)
        cfg.validate()
        return cfg

    def validate(self) -> None:
        def check(ok, msg):
            if not ok:
                raise ConfigError(msg)

        check(self.env in ENVS, f"env must be one of {ENVS}, got {self.env!r}")
        check(self.algo in ALGOS, f"algo must be one of {ALGOS}, got {self.algo!r}")
        check(self.mode in MODES, f"mode must be one of {MODES}, got {self.mode!r}")
        check(self.decision in DECISIONS, f"decision must be one of {DECISIONS}, got {self.decision!r}")
        check(isinstance(self.seed, int) and self.seed >= 0, f"seed must be a nonnegative integer, got {self.seed!r}")
        if self.gamma is not None:
            check(0.0 <= self.gamma <= 1.0, f"gamma must lie in [0, 1], got {self.gamma}")
        for name in ("max_episodes",):
            v = getattr(self, name)
            check(v is None or v >= 0, f"{name} must be >= 0, got {v}")
        for name in ("batch_size", "sync_period", "buffer_capacity", "solve_window"):
            v = getattr(self, name)
            check(v is None or v >= 1, f"{name} must be >= 1, got {v}")
        check(0.0 <= self.epsilon_min <= self.epsilon_start <= 1.0,
              "epsilon values need 0 <= epsilon_min <= epsilon_start <= 1")
        check(0.0 < self.epsilon_decay <= 1.0, f"epsilon_decay must lie in (0, 1], got {self.epsilon_decay}")
        check(self.learning_rate > 0.0, f"learning_rate must be positive, got {self.learning_rate}")
        check(len(self.hidden_sizes) >= 1 and all(h >= 1 for h in self.hidden_sizes),
              f"hidden_sizes must be positive, got {self.hidden_sizes}")

    def hyperparameters(self) -> dict:
        """Everything except run identity (mode, seed, output location)."""
        d = dataclasses.asdict(self.resolved())
        for k in ("mode", "seed", "out_dir", "wall_clock"):
            d.pop(k)
        return d

    def to_text(self) -> str:
        lines = []
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            if v is None:
                continue
            if f.name == "hidden_sizes":
                v = ",".join(str(h) for h in v)
            lines.append(f"{f.name}={v}")
        return "\n".join(lines) + "\n"


def _field_types():
    return {
        "env": str, "algo": str, "mode": str, "decision": str, "maze_file": str, "out_dir": str,
        "seed": int, "max_episodes": int, "batch_size": int, "sync_period": int,
        "buffer_capacity": int, "solve_window": int,
        "gamma": float, "epsilon_start": float, "epsilon_min": float, "epsilon_decay": float,
        "learning_rate": float,
        "hidden_sizes": "ints", "wall_clock": "bool",
    }


def convert_value(key, raw):
    kinds = _field_types()
    if key not in kinds:
        raise ConfigError(f"unknown config key {key!r}")
    kind = kinds[key]
    raw = raw.strip() if isinstance(raw, str) else raw
    try:
        if kind == "ints":
            if isinstance(raw, str):
                return tuple(int(p) for p in raw.split(",") if p.strip())
            return tuple(int(p) for p in raw)
        if kind == "bool":
            if isinstance(raw, bool):
                return raw
            if raw.lower() in ("1", "true", "yes", "on"):
                return True
            if raw.lower() in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
        return kind(raw)
    except ValueError:
        raise ConfigError(f"bad value for {key}: {raw!r}") from None


def parse_config(text: str, overrides: dict | None = None) -> TrainConfig:
    """Parse ``key=value`` lines ('#' starts a comment), then apply ``overrides``.

    Missing keys keep their defaults; unknown keys are rejected. Overrides
    whose value is None are ignored, which is how absent CLI flags arrive.
    """
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {line!r}")
        key, raw = (part.strip() for part in line.split("=", 1))
        values[key] = convert_value(key, raw)
    for key, raw in (overrides or {}).items():
        if raw is not None:
            values[key] = convert_value(key, raw)
    cfg = TrainConfig(**values)
    cfg.validate()
    return cfg
