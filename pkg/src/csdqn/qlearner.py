"""Single DQN / Double-DQN learner: epsilon-greedy acting, replay training, hard target sync."""

from __future__ import annotations

import numpy as np

from .exceptions import ConfigError, NumericError
from .neuralnet import Adam, Mlp
from .replay import ReplayBuffer

__all__ = ["QLearner", "ALGOS"]

ALGOS = ("dqn", "ddqn")


class QLearner:
    """One Q-learning agent with an online network and a frozen target copy.

    Parameters
    ----------
    n_inputs, n_actions : int
        State width and number of network outputs.
    hidden_sizes : tuple of int
        Hidden layer widths.
    algo : {"dqn", "ddqn"}
        Bootstrap rule. ``ddqn`` picks the next action with the online
        network and scores it with the target network.
    gamma : float
        Discount in [0, 1].
    sync_period : int
        Gradient steps between hard copies of online into target.
    epsilon_start, epsilon_min, epsilon_decay : float
        Exploration schedule, decayed once per episode.
    learning_rate : float
        Adam step size.
    buffer_capacity : int
        Replay capacity.
    seed : int or Generator
        Drives the weight initialisation only.
    """

    def __init__(
        self,
        n_inputs,
        n_actions,
        hidden_sizes=(64, 64),
        algo="dqn",
        gamma=0.99,
        sync_period=200,
        epsilon_start=1.0,
        epsilon_min=0.01,
        epsilon_decay=0.995,
        learning_rate=1e-3,
        buffer_capacity=10_000,
        seed=None,
    ):
        if algo not in ALGOS:
            raise ConfigError(f"algo must be one of {ALGOS}, got {algo!r}")
        if not 0.0 <= gamma <= 1.0:
            raise ConfigError(f"gamma must lie in [0, 1], got {gamma}")
        if int(sync_period) != sync_period or sync_period < 1:
            raise ConfigError(f"sync_period must be a positive integer, got {sync_period}")
        if not 0.0 <= epsilon_min <= epsilon_start <= 1.0:
            raise ConfigError("need 0 <= epsilon_min <= epsilon_start <= 1")
        if not 0.0 < epsilon_decay <= 1.0:
            raise ConfigError(f"epsilon_decay must lie in (0, 1], got {epsilon_decay}")
        self.algo = algo
        self.gamma = float(gamma)
        self.sync_period = int(sync_period)
        self.epsilon = float(epsilon_start)
        self.epsilon_start = float(epsilon_start)
        self.epsilon_min = float(epsilon_min)
        self.epsilon_decay = float(epsilon_decay)
        self.n_actions = int(n_actions)

        self.online = Mlp([int(n_inputs), *hidden_sizes, self.n_actions], seed=seed)
        self.target = self.online.copy()
        self.optimizer = Adam(learning_rate=learning_rate)
        self.buffer = ReplayBuffer(buffer_capacity, n_actions=self.n_actions)
        self.n_updates = 0

    # acting

    def q_values(self, state) -> np.ndarray:
        return self.online.forward(state)

    def select_action(self, state, rng: np.random.Generator) -> int:
        """Epsilon-greedy; greedy ties go to the lowest action index."""
        if rng.random() < self.epsilon:
            self.online._check_input(state)
            return int(rng.integers(self.n_actions))
        return int(np.argmax(self.online.forward(state)))

    # bootstrap targets

    def compute_targets(self, rewards, next_states, dones) -> np.ndarray:
        """Batched bootstrap targets using this learner's ``algo``."""
        if self.algo == "ddqn":
            return self._ddqn_targets(rewards, next_states, dones)
        return self._dqn_targets(rewards, next_states, dones)

    def _dqn_targets(self, rewards, next_states, dones):
        q_next = self.target.forward(np.atleast_2d(next_states))
        return self._finish(rewards, q_next.max(axis=1), dones)

    def _ddqn_targets(self, rewards, next_states, dones):
        s2 = np.atleast_2d(next_states)
        best = self.online.forward(s2).argmax(axis=1)
        q_eval = self.target.forward(s2)[np.arange(s2.shape[0]), best]
        return self._finish(rewards, q_eval, dones)

    def _finish(self, rewards, bootstrap, dones):
        rewards = np.asarray(rewards, dtype=np.float64).reshape(-1)
        dones = np.asarray(dones, dtype=bool).reshape(-1)
        y = np.where(dones, rewards, rewards + self.gamma * bootstrap)
        if not np.isfinite(y).all():
            raise NumericError("non-finite bootstrap target")
        return y

    def dqn_target(self, reward, next_state, done) -> float:
        return float(self._dqn_targets([reward], next_state, [done])[0])

    def ddqn_target(self, reward, next_state, done) -> float:
        return float(self._ddqn_targets([reward], next_state, [done])[0])

    # learning

    def train_step(self, batch_size, rng: np.random.Generator):
        """One minibatch update. Returns the loss, or None while the buffer is warming up."""
        if not self.buffer.ready(batch_size):
            return None
        s, a, r, s2, d = self.buffer.sample_arrays(batch_size, rng)
        y = self.compute_targets(r, s2, d)
        mask = np.zeros((batch_size, self.n_actions))
        mask[np.arange(batch_size), a] = 1.0
        loss, grads = self.online.backward(s, y, mask, validate=False)
        self.optimizer.step(self.online, grads)
        self.n_updates += 1
        if self.n_updates % self.sync_period == 0:
            self.sync_target()
        return loss

    def sync_target(self) -> None:
        self.target.load_parameters_from(self.online)

    def decay_epsilon(self) -> None:
        self.epsilon = max(self.epsilon_min, self.epsilon * self.epsilon_decay)
