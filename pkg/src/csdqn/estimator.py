"""scikit-learn style wrapper around a training run.

``fit`` trains on the configured environment (the ``X``/``y`` arguments only
exist for API compatibility); ``predict`` maps a batch of states to greedy
actions, so a trained agent can sit at the end of a pipeline or be cloned
and grid-searched like any other estimator.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .binary_mas import BinaryAgentEnsemble
from .harness.config import TrainConfig
from .harness.training import run_training


class QLearningAgent(BaseEstimator):
    """Train a DQN/DDQN learner or a binary-action ensemble.

    Parameters mirror :class:`~csdqn.harness.config.TrainConfig`; ``None``
    picks the environment's default.

    Attributes
    ----------
    agent_ : QLearner or BinaryAgentEnsemble
        The trained agent.
    summary_ : RunSummary
    records_ : list of EpisodeRecord
    n_features_in_ : int
        State width of the environment.
    n_actions_ : int
    """

    def __init__(
        self,
        env="cartpole",
        algo="dqn",
        mode="single",
        random_state=0,
        max_episodes=None,
        gamma=None,
        batch_size=32,
        sync_period=None,
        epsilon_start=1.0,
        epsilon_min=0.01,
        epsilon_decay=0.995,
        learning_rate=1e-3,
        buffer_capacity=None,
        hidden_sizes=(64, 64),
        decision="advantage",
        maze_file=None,
    ):
        self.env = env
        self.algo = algo
        self.mode = mode
        self.random_state = random_state
        self.max_episodes = max_episodes
        self.gamma = gamma
        self.batch_size = batch_size
        self.sync_period = sync_period
        self.epsilon_start = epsilon_start
        self.epsilon_min = epsilon_min
        self.epsilon_decay = epsilon_decay
        self.learning_rate = learning_rate
        self.buffer_capacity = buffer_capacity
        self.hidden_sizes = hidden_sizes
        self.decision = decision
        self.maze_file = maze_file

    def to_config(self) -> TrainConfig:
        params = self.get_params()
        seed = params.pop("random_state")
        params["hidden_sizes"] = tuple(params["hidden_sizes"])
        return TrainConfig(seed=seed, **params).resolved()

    def fit(self, X=None, y=None):
        summary, records, agent = run_training(self.to_config(), return_agent=True)
        self.agent_ = agent
        self.summary_ = summary
        self.records_ = records
        if isinstance(agent, BinaryAgentEnsemble):
            self.n_features_in_ = agent.n_inputs
            self.n_actions_ = agent.n_agents
        else:
            self.n_features_in_ = agent.online.n_inputs
            self.n_actions_ = agent.n_actions
        return self

    def _check_states(self, X):
        check_is_fitted(self, "agent_")
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"X has {X.shape[1]} features, but {type(self).__name__} "
                f"was fitted with {self.n_features_in_}"
            )
        return X

    def decision_function(self, X):
        """Per-action scores: Q-values, or the ensemble's per-agent decision scores."""
        X = self._check_states(X)
        if isinstance(self.agent_, BinaryAgentEnsemble):
            return np.stack([self.agent_.scores(x) for x in X])
        return self.agent_.online.forward(X)

    def predict(self, X):
        """Greedy action per state (ties to the lowest index)."""
        return np.argmax(self.decision_function(X), axis=1)

    def score(self, X=None, y=None):
        """Final sliding-window statistic: mean reward (cart-pole) or win rate (maze)."""
        check_is_fitted(self, "summary_")
        stat = self.summary_.final_window_stat
        return float("nan") if stat is None else stat
