"""Ensemble of binary-action learners, one per environment action.

Each agent answers a yes/no question ("take my action?") with two Q-values,
``Q_i(s, 0)`` for no-action and ``Q_i(s, 1)`` for act. All agents see the
same state and reward; only the binary action they store differs: the agent
whose action was executed stores 1, every other agent stores 0.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from .exceptions import ConfigError, ContractError, ShapeError
from .qlearner import QLearner

__all__ = ["BinaryAgentEnsemble", "DECISION_RULES"]

DECISION_RULES = ("advantage", "act_value")


class BinaryAgentEnsemble:
    """K two-output QLearners plus the rule that turns their votes into one action.

    Parameters
    ----------
    n_inputs : int
        Shared state width.
    n_env_actions : int
        Environment action count K; agent ``i`` owns environment action ``i``.
    decision : {"advantage", "act_value"}
        ``advantage`` picks the largest ``Q_i(s,1) - Q_i(s,0)``; ``act_value``
        the largest ``Q_i(s,1)``. Ties go to the lowest index either way.
    seeds : sequence, optional
        One weight-init seed per agent.
    **learner_kwargs
        Forwarded to every :class:`QLearner` (algo, gamma, sync_period, ...).
        The epsilon settings define the single schedule shared by the ensemble.
    """

    def __init__(self, n_inputs, n_env_actions, decision="advantage", seeds=None, **learner_kwargs):
        if decision not in DECISION_RULES:
            raise ConfigError(f"decision must be one of {DECISION_RULES}, got {decision!r}")
        if n_env_actions < 1:
            raise ConfigError("need at least one environment action")
        if seeds is None:
            seeds = [None] * n_env_actions
        if len(seeds) != n_env_actions:
            raise ConfigError(f"expected {n_env_actions} seeds, got {len(seeds)}")
        self.decision = decision
        self.n_inputs = int(n_inputs)
        self.agents = [
            QLearner(n_inputs, 2, seed=seed, **learner_kwargs) for seed in seeds
        ]
        first = self.agents[0]
        self.epsilon = first.epsilon_start
        self.epsilon_min = first.epsilon_min
        self.epsilon_decay = first.epsilon_decay

    @property
    def n_agents(self) -> int:
        return len(self.agents)

    def agent_q_values(self, state) -> np.ndarray:
        """``(K, 2)`` array of every agent's (no-action, act) values."""
        return np.stack([agent.online.forward(state) for agent in self.agents])

    def scores(self, state) -> np.ndarray:
        q = self.agent_q_values(state)
        if self.decision == "advantage":
            return q[:, 1] - q[:, 0]
        return q[:, 1]

    def greedy_action(self, state) -> int:
        return int(np.argmax(self.scores(state)))

    def act(self, state, rng: np.random.Generator) -> int:
        state = np.asarray(state, dtype=np.float64)
        if state.shape != (self.n_inputs,):
            raise ShapeError(f"expected state of length {self.n_inputs}, got {state.shape}")
        if rng.random() < self.epsilon:
            return int(rng.integers(self.n_agents))
        return self.greedy_action(state)

    def record(self, state, env_action, reward, next_state, done) -> None:
        """Broadcast one environment transition into every agent's buffer."""
        if not 0 <= int(env_action) < self.n_agents:
            raise ContractError(f"env_action {env_action} outside [0, {self.n_agents})")
        for i, agent in enumerate(self.agents):
            agent.buffer.push(state, 1 if i == env_action else 0, reward, next_state, done)

    def train_step(self, batch_size, rngs):
        """Independent minibatch update for each agent; per-agent losses (None if cold).

        ``rngs`` is one generator per agent, or a single generator used by all
        of them in agent order.
        """
        if isinstance(rngs, np.random.Generator):
            rngs = [rngs] * self.n_agents
        elif not isinstance(rngs, Sequence) or len(rngs) != self.n_agents:
            raise ContractError(f"need {self.n_agents} generators")
        return [agent.train_step(batch_size, rng) for agent, rng in zip(self.agents, rngs)]

    def decay_epsilon(self) -> None:
        self.epsilon = max(self.epsilon_min, self.epsilon * self.epsilon_decay)
        for agent in self.agents:
            agent.epsilon = self.epsilon

