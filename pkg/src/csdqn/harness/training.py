"""Seeded training loop for the single-learner baseline and the binary ensemble."""

from __future__ import annotations

import logging
import time
import zlib
from dataclasses import dataclass

import numpy as np

from ..binary_mas import BinaryAgentEnsemble
from ..envs import Outcome, make_env
from ..exceptions import NumericError
from ..qlearner import QLearner
from .config import TrainConfig

log = logging.getLogger(__name__)

SOLVE_REWARD = 195.0


@dataclass
class EpisodeRecord:
    episode: int
    reward: float
    steps: int
    win: bool | None  # None outside the maze
    epsilon: float
    window_stat: float
    wall_ms: float | None = None

    @property
    def reward_or_steps(self):
        return self.steps if self.win is not None else self.reward


@dataclass
class RunSummary:
    solved: bool
    solve_episode: int | None
    total_episodes: int
    final_window_stat: float | None
    total_wins: int | None
    total_steps: int
    seed: int
    config: TrainConfig


def stream(seed: int, label: str) -> np.random.Generator:
    """Independent generator for one labelled consumer of randomness."""
    return np.random.default_rng(np.random.SeedSequence([seed, zlib.crc32(label.encode())]))


def _values(records, attr):
    return [getattr(r, attr) if isinstance(r, EpisodeRecord) else r for r in records]


def cartpole_window_mean(rewards, window=100):
    recent = rewards[-window:]
    return sum(recent) / len(recent) if recent else 0.0


def maze_window_rate(wins, window=32):
    recent = wins[-window:]
    return sum(1 for w in recent if w) / len(recent) if recent else 0.0


def check_solved_cartpole(records, window=100, threshold=SOLVE_REWARD):
    """First 1-based episode whose trailing ``window`` rewards average >= threshold."""
    rewards = _values(records, "reward")
    for e in range(window, len(rewards) + 1):
        if sum(rewards[e - window:e]) / window >= threshold:
            return e
    return None


def check_solved_maze(records, window=32):
    """First 1-based episode closing a run of ``window`` consecutive wins."""
    streak = 0
    for e, win in enumerate(_values(records, "win"), 1):
        streak = streak + 1 if win else 0
        if streak >= window:
            return e
    return None


def total_win_count(records, upto_episode=None):
    wins = _values(records, "win")
    if upto_episode is not None:
        wins = wins[:upto_episode]
    return sum(1 for w in wins if w)


def build_agent(cfg: TrainConfig, state_dim: int, action_count: int):
    kwargs = dict(
        hidden_sizes=tuple(cfg.hidden_sizes),
        algo=cfg.algo,
        gamma=cfg.gamma,
        sync_period=cfg.sync_period,
        epsilon_start=cfg.epsilon_start,
        epsilon_min=cfg.epsilon_min,
        epsilon_decay=cfg.epsilon_decay,
        learning_rate=cfg.learning_rate,
        buffer_capacity=cfg.buffer_capacity,
    )
    if cfg.mode == "single":
        return QLearner(state_dim, action_count, seed=stream(cfg.seed, "agent0/init"), **kwargs)
    seeds = [stream(cfg.seed, f"agent{i}/init") for i in range(action_count)]
    return BinaryAgentEnsemble(state_dim, action_count, decision=cfg.decision, seeds=seeds, **kwargs)


def agent_learners(agent):
    return agent.agents if isinstance(agent, BinaryAgentEnsemble) else [agent]


def run_training(config: TrainConfig, return_agent=False):
    """Train until solved or ``max_episodes``; returns ``(summary, records)``.

    With ``return_agent`` a third element, the trained learner or ensemble,
    is appended.
    """
    cfg = config.resolved()
    env = make_env(cfg.env, cfg.maze_file)
    spec = env.spec
    agent = build_agent(cfg, spec.state_dim, spec.action_count)
    is_maze = cfg.env == "maze"
    mas = cfg.mode == "binary-mas"

    env_rng = stream(cfg.seed, "env")
    explore_rng = stream(cfg.seed, "explore")
    n_learners = spec.action_count if mas else 1
    sample_rngs = [stream(cfg.seed, f"agent{i}/sample") for i in range(n_learners)]
    act = agent.act if mas else agent.select_action
    record = agent.record if mas else agent.buffer.push
    if mas:
        def train():
            agent.train_step(cfg.batch_size, sample_rngs)
    else:
        def train():
            agent.train_step(cfg.batch_size, sample_rngs[0])

    records: list[EpisodeRecord] = []
    rewards, wins = [], []
    solve_episode = None
    total_steps = 0
    for episode in range(1, cfg.max_episodes + 1):
        t0 = time.perf_counter()
        epsilon = agent.epsilon
        state = env.reset(env_rng)
        ep_reward = 0.0
        steps = 0
        try:
            while True:
                action = act(state, explore_rng)
                res = env.step(action)
                record(state, action, res.reward, res.state, res.terminal)
                train()
                ep_reward += res.reward
                steps += 1
                state = res.state
                if res.done:
                    break
        except NumericError as exc:
            raise NumericError(f"episode {episode}: {exc}") from exc
        total_steps += steps
        agent.decay_epsilon()

        rewards.append(ep_reward)
        if is_maze:
            wins.append(res.outcome is Outcome.WIN)
            stat = maze_window_rate(wins, cfg.solve_window)
        else:
            stat = cartpole_window_mean(rewards, cfg.solve_window)
        wall = (time.perf_counter() - t0) * 1000.0 if cfg.wall_clock else None
        records.append(
            EpisodeRecord(episode, ep_reward, steps, wins[-1] if is_maze else None, epsilon, stat, wall)
        )
        if episode % 50 == 0:
            log.info("episode %d steps=%d reward=%.2f stat=%.3f eps=%.3f", episode, steps, ep_reward, stat, epsilon)

        if is_maze:
            done_now = episode >= cfg.solve_window and stat == 1.0
        else:
            done_now = episode >= cfg.solve_window and stat >= SOLVE_REWARD
        if done_now:
            solve_episode = episode
            break

    summary = RunSummary(
        solved=solve_episode is not None,
        solve_episode=solve_episode,
        total_episodes=len(records),
        final_window_stat=records[-1].window_stat if records else None,
        total_wins=total_win_count(records) if is_maze else None,
        total_steps=total_steps,
        seed=cfg.seed,
        config=cfg,
    )
    if return_agent:
        return summary, records, agent
    return summary, records
