"""Types shared by the environments."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np


class Outcome(str, enum.Enum):
    ONGOING = "ongoing"
    TERMINATED = "terminated"  # cart-pole failure
    TRUNCATED = "truncated"  # cart-pole step cap
    WIN = "win"
    LOSE = "lose"


@dataclass(frozen=True)
class EnvSpec:
    name: str
    state_dim: int
    action_count: int


class StepResult(NamedTuple):
    state: np.ndarray
    reward: float
    done: bool
    outcome: Outcome

    @property
    def terminal(self) -> bool:
        """True when the episode ended for a reason other than the step cap."""
        return self.done and self.outcome is not Outcome.TRUNCATED
