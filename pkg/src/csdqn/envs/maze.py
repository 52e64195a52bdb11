"""Grid maze: reach the target cell while paying for every move and mistake."""

from __future__ import annotations

from collections import deque
from importlib import resources

import numpy as np

from ..exceptions import ContractError, MazeParseError
from .base import EnvSpec, Outcome, StepResult

FREE, BLOCKED, TARGET = 0, 1, 2
_CHARS = {".": FREE, "#": BLOCKED, "T": TARGET}

# left, up, right, down as (d_row, d_col)
MOVES = ((0, -1), (-1, 0), (0, 1), (1, 0))

REWARD_OFF_GRID = -0.8
REWARD_BLOCKED = -0.75
REWARD_TARGET = 1.0
REWARD_REVISIT = -0.25
REWARD_MOVE = -0.04


class MazeGrid:
    """Static layout plus the running episode (position, visited cells, score).

    An episode is lost once the running reward drops below
    ``-0.5 * rows * cols``.
    """

    def __init__(self, cells):
        cells = np.asarray(cells, dtype=np.int8)
        if cells.ndim != 2 or cells.size == 0:
            raise ContractError("maze cells must form a non-empty 2-D grid")
        targets = np.argwhere(cells == TARGET)
        if len(targets) != 1:
            raise ContractError(f"maze needs exactly one target, found {len(targets)}")
        self.cells = cells
        self.rows, self.cols = cells.shape
        self.target = tuple(int(v) for v in targets[0])
        self.start_cells = [
            (int(r), int(c)) for r, c in np.argwhere(cells == FREE)
        ]
        if not self.start_cells:
            raise ContractError("maze has no free cell to start from")
        self.loss_threshold = -0.5 * self.rows * self.cols
        self.spec = EnvSpec("maze", self.rows * self.cols, 4)
        self._base = np.where(cells == BLOCKED, 0.0, 1.0).ravel()

        self.agent_pos = self.start_cells[0]
        self.start_pos = self.agent_pos
        self.visited = {self.agent_pos}
        self.cumulative_reward = 0.0
        self.done = True

    def reset(self, rng: np.random.Generator) -> np.ndarray:
        start = self.start_cells[int(rng.integers(len(self.start_cells)))]
        self.place(start)
        return self.encode()

    def place(self, pos, visited=None, cumulative_reward=0.0) -> None:
        """Start an episode at ``pos`` with an explicit visited set."""
        pos = (int(pos[0]), int(pos[1]))
        if not self.in_bounds(pos) or self.cells[pos] == BLOCKED:
            raise ContractError(f"cannot place agent on {pos}")
        self.agent_pos = pos
        self.start_pos = pos
        self.visited = {pos} if visited is None else set(visited)
        self.cumulative_reward = float(cumulative_reward)
        self.done = False

    def in_bounds(self, pos) -> bool:
        return 0 <= pos[0] < self.rows and 0 <= pos[1] < self.cols

    def encode(self) -> np.ndarray:
        state = self._base.copy()
        state[self.agent_pos[0] * self.cols + self.agent_pos[1]] = 0.5
        return state

    def step(self, action) -> StepResult:
        if self.done:
            raise ContractError("episode finished; call reset() first")
        if action not in (0, 1, 2, 3):
            raise ContractError(f"maze action must be in 0..3, got {action!r}")
        dr, dc = MOVES[action]
        cand = (self.agent_pos[0] + dr, self.agent_pos[1] + dc)
        outcome = Outcome.ONGOING
        if not self.in_bounds(cand):
            reward = REWARD_OFF_GRID
        elif self.cells[cand] == BLOCKED:
            reward = REWARD_BLOCKED
        else:
            if cand == self.target:
                reward = REWARD_TARGET
                outcome = Outcome.WIN
            elif cand in self.visited:
                reward = REWARD_REVISIT
            else:
                reward = REWARD_MOVE
            self.agent_pos = cand
            self.visited.add(cand)
        self.cumulative_reward += reward
        if outcome is Outcome.ONGOING and self.cumulative_reward < self.loss_threshold:
            outcome = Outcome.LOSE
        self.done = outcome is not Outcome.ONGOING
        return StepResult(self.encode(), reward, self.done, outcome)

    def to_text(self) -> str:
        inv = {v: k for k, v in _CHARS.items()}
        return "\n".join("".join(inv[int(v)] for v in row) for row in self.cells) + "\n"


def parse_maze(text: str) -> MazeGrid:
    """Build a maze from '#' (blocked), '.' (free) and exactly one 'T' (target)."""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    lines = [line.rstrip("\r") for line in lines]
    if not lines or not lines[0]:
        raise MazeParseError("empty maze", row=0)
    width = len(lines[0])
    rows = []
    targets = []
    for r, line in enumerate(lines):
        if len(line) != width:
            raise MazeParseError(f"ragged row: length {len(line)}, expected {width}", row=r)
        row = []
        for c, ch in enumerate(line):
            if ch not in _CHARS:
                raise MazeParseError(f"unknown character {ch!r}", row=r, col=c)
            if ch == "T":
                targets.append((r, c))
            row.append(_CHARS[ch])
        rows.append(row)
    if not targets:
        raise MazeParseError("no target cell 'T'")
    if len(targets) > 1:
        r, c = targets[1]
        raise MazeParseError(f"multiple targets, first at {targets[0]}", row=r, col=c)
    cells = np.array(rows, dtype=np.int8)
    if not reachable_from(cells, targets[0]) - {targets[0]}:
        r, c = targets[0]
        raise MazeParseError("target cannot be reached from any free cell", row=r, col=c)
    return MazeGrid(cells)


def reachable_from(cells, origin) -> set:
    """Non-blocked cells 4-connected to ``origin``, including it."""
    rows, cols = cells.shape
    seen = {tuple(origin)}
    queue = deque(seen)
    while queue:
        r, c = queue.popleft()
        for dr, dc in MOVES:
            nr, nc = r + dr, c + dc
            if 0 <= nr < rows and 0 <= nc < cols and cells[nr, nc] != BLOCKED and (nr, nc) not in seen:
                seen.add((nr, nc))
                queue.append((nr, nc))
    return seen


def load_maze(path=None) -> MazeGrid:
    """Parse a maze file; without a path, the bundled 8x8 layout."""
    if path is None:
        text = resources.files("csdqn.envs").joinpath("data/maze8x8.txt").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return parse_maze(text)
