"""Cart-pole balancing with the classic Barto/Sutton/Anderson dynamics."""

from __future__ import annotations

import math

import numpy as np

from ..exceptions import ContractError
from .base import EnvSpec, Outcome, StepResult

GRAVITY = 9.8
CART_MASS = 1.0
POLE_MASS = 0.1
TOTAL_MASS = CART_MASS + POLE_MASS
HALF_LENGTH = 0.5
POLEMASS_LENGTH = POLE_MASS * HALF_LENGTH
FORCE_MAG = 10.0
DT = 0.02
X_LIMIT = 2.4
THETA_LIMIT = 15 * 2 * math.pi / 360
MAX_STEPS = 500


def cartpole_dynamics(state, action, force=None) -> np.ndarray:
    """One explicit Euler step: accelerations from the current state, then all
    four components advance together. Action 1 pushes right, 0 pushes left;
    an explicit ``force`` overrides the action."""
    x, x_dot, theta, theta_dot = (float(v) for v in state)
    if force is None:
        force = FORCE_MAG if action == 1 else -FORCE_MAG
    cos_t = math.cos(theta)
    sin_t = math.sin(theta)
    temp = (force + POLEMASS_LENGTH * theta_dot**2 * sin_t) / TOTAL_MASS
    theta_acc = (GRAVITY * sin_t - cos_t * temp) / (
        HALF_LENGTH * (4.0 / 3.0 - POLE_MASS * cos_t**2 / TOTAL_MASS)
    )
    x_acc = temp - POLEMASS_LENGTH * theta_acc * cos_t / TOTAL_MASS
    return np.array(
        [
            x + DT * x_dot,
            x_dot + DT * x_acc,
            theta + DT * theta_dot,
            theta_dot + DT * theta_acc,
        ]
    )


class CartPole:
    """Keep the pole within 15 degrees of vertical and the cart within 2.4 units.

    Reward is +1 for every step taken, including the failing one. Episodes
    are capped at ``max_steps``.
    """

    spec = EnvSpec("cartpole", 4, 2)

    def __init__(self, max_steps: int = MAX_STEPS):
        self.max_steps = max_steps
        self.state = None
        self.step_count = 0
        self.done = True

    def reset(self, rng: np.random.Generator) -> np.ndarray:
        self.state = rng.uniform(-0.05, 0.05, size=4)
        self.step_count = 0
        self.done = False
        return self.state.copy()

    def set_state(self, state) -> None:
        self.state = np.asarray(state, dtype=np.float64).copy()
        self.step_count = 0
        self.done = False

    def step(self, action) -> StepResult:
        if self.done:
            raise ContractError("episode finished; call reset() first")
        if action not in (0, 1):
            raise ContractError(f"cart-pole action must be 0 or 1, got {action!r}")
        self.state = cartpole_dynamics(self.state, action)
        self.step_count += 1
        x, _, theta, _ = self.state
        if abs(x) > X_LIMIT or abs(theta) > THETA_LIMIT:
            outcome = Outcome.TERMINATED
        elif self.step_count >= self.max_steps:
            outcome = Outcome.TRUNCATED
        else:
            outcome = Outcome.ONGOING
        self.done = outcome is not Outcome.ONGOING
        return StepResult(self.state.copy(), 1.0, self.done, outcome)
