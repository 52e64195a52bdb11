"""Fixed-capacity FIFO experience replay with uniform sampling."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .exceptions import BufferNotReady, ContractError, ShapeError

__all__ = ["Transition", "ReplayBuffer"]


class Transition(NamedTuple):
    state: np.ndarray
    action: int
    reward: float
    next_state: np.ndarray
    done: bool


class ReplayBuffer:
    """Ring buffer of transitions; the oldest entry is evicted once full.

    Storage is columnar (one array per field) so a minibatch can be gathered
    with a single fancy-index per column. The state width is fixed by the
    first push.
    """

    def __init__(self, capacity: int, n_actions: int | None = None):
        if int(capacity) != capacity or capacity <= 0:
            raise ContractError(f"capacity must be a positive integer, got {capacity!r}")
        self.capacity = int(capacity)
        self.n_actions = n_actions
        self._states = None
        self._next_states = None
        self._actions = np.zeros(self.capacity, dtype=np.int64)
        self._rewards = np.zeros(self.capacity, dtype=np.float64)
        self._dones = np.zeros(self.capacity, dtype=bool)
        self._size = 0
        self._head = 0  # slot the next push writes to
        self.n_pushed = 0

    def __len__(self):
        return self._size

    @property
    def state_dim(self):
        return None if self._states is None else self._states.shape[1]

    def push(self, state, action, reward, next_state, done) -> None:
        state = np.asarray(state, dtype=np.float64)
        next_state = np.asarray(next_state, dtype=np.float64)
        if state.ndim != 1 or state.shape != next_state.shape:
            raise ShapeError(f"state {state.shape} and next_state {next_state.shape} must be equal 1-D")
        if self._states is None:
            self._states = np.zeros((self.capacity, state.shape[0]))
            self._next_states = np.zeros((self.capacity, state.shape[0]))
        elif state.shape[0] != self._states.shape[1]:
            raise ShapeError(f"state length {state.shape[0]} differs from stored {self._states.shape[1]}")
        action = int(action)
        if action < 0 or (self.n_actions is not None and action >= self.n_actions):
            raise ContractError(f"action {action} out of range for {self.n_actions} actions")
        if not np.isfinite(reward):
            raise ContractError(f"reward must be finite, got {reward}")

        i = self._head
        self._states[i] = state
        self._next_states[i] = next_state
        self._actions[i] = action
        self._rewards[i] = reward
        self._dones[i] = bool(done)
        self._head = (i + 1) % self.capacity
        self._size = min(self._size + 1, self.capacity)
        self.n_pushed += 1

    def add(self, t: Transition) -> None:
        self.push(*t)

    def _ordered_slots(self) -> np.ndarray:
        start = (self._head - self._size) % self.capacity
        return (start + np.arange(self._size)) % self.capacity

    def _transition(self, i) -> Transition:
        return Transition(
            self._states[i].copy(),
            int(self._actions[i]),
            float(self._rewards[i]),
            self._next_states[i].copy(),
            bool(self._dones[i]),
        )

    def contents(self) -> list[Transition]:
        """All stored transitions, oldest first."""
        return [self._transition(i) for i in self._ordered_slots()]

    def newest(self) -> Transition:
        if not self._size:
            raise IndexError("empty buffer")
        return self._transition((self._head - 1) % self.capacity)

    def ready(self, batch_size: int) -> bool:
        return batch_size >= 1 and self._size >= batch_size

    def sample_indices(self, batch_size: int, rng: np.random.Generator) -> np.ndarray:
        # draws are with replacement, so any non-empty buffer can serve a batch;
        # the warm-up rule (len >= batch_size) is enforced by callers via ready()
        if batch_size < 1:
            raise ContractError(f"batch_size must be >= 1, got {batch_size}")
        if not self._size:
            raise BufferNotReady("buffer is empty")
        # slots 0.._size-1 are all valid whether or not the ring has wrapped
        return rng.integers(0, self._size, size=batch_size)

    def sample_arrays(self, batch_size: int, rng: np.random.Generator):
        """Uniform draw with replacement, as ``(states, actions, rewards, next_states, dones)``."""
        idx = self.sample_indices(batch_size, rng)
        return (
            self._states[idx],
            self._actions[idx],
            self._rewards[idx],
            self._next_states[idx],
            self._dones[idx],
        )

    def sample(self, batch_size: int, rng: np.random.Generator) -> list[Transition]:
        return [self._transition(i) for i in self.sample_indices(batch_size, rng)]
