"""DQN / Double-DQN learners and binary-action agent ensembles in plain numpy."""

from .binary_mas import BinaryAgentEnsemble
from .exceptions import (
    BufferNotReady,
    ConfigError,
    ContractError,
    CsdqnError,
    MazeParseError,
    NumericError,
    ShapeError,
)
from .neuralnet import Adam, Gradients, Mlp, load_snapshot, save_snapshot
from .qlearner import QLearner
from .replay import ReplayBuffer, Transition

__version__ = "0.1.0"

__all__ = [
    "Adam",
    "BinaryAgentEnsemble",
    "BufferNotReady",
    "ConfigError",
    "ContractError",
    "CsdqnError",
    "Gradients",
    "MazeParseError",
    "Mlp",
    "NumericError",
    "QLearner",
    "ReplayBuffer",
    "ShapeError",
    "Transition",
    "load_snapshot",
    "save_snapshot",
]
