from ..exceptions import ConfigError
from .base import EnvSpec, Outcome, StepResult
from .cartpole import CartPole, cartpole_dynamics
from .maze import MazeGrid, load_maze, parse_maze


def make_env(name, maze_file=None):
    if name == "cartpole":
        return CartPole()
    if name == "maze":
        return load_maze(maze_file)
    raise ConfigError(f"unknown environment {name!r}")


__all__ = [
    "CartPole",
    "EnvSpec",
    "MazeGrid",
    "Outcome",
    "StepResult",
    "cartpole_dynamics",
    "load_maze",
    "make_env",
    "parse_maze",
]
