"""Exception hierarchy shared by all csdqn modules."""


class CsdqnError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(CsdqnError, ValueError):
    """Invalid configuration value or combination."""


class ShapeError(CsdqnError, ValueError):
    """Array dimensions do not match what the callee expects."""


class ContractError(CsdqnError, ValueError):
    """A precondition of an operation was violated."""


class NumericError(CsdqnError, ArithmeticError):
    """A NaN or infinity showed up in parameters, gradients or losses."""


class BufferNotReady(CsdqnError):
    """Replay buffer holds fewer transitions than the requested batch."""


class MazeParseError(CsdqnError, ValueError):
    """Malformed maze text. ``row`` and ``col`` locate the problem (0-based)."""

    def __init__(self, message, row=None, col=None):
        where = ""
        if row is not None:
            where = f" (row {row}" + (f", col {col})" if col is not None else ")")
        super().__init__(message + where)
        self.row = row
        self.col = col
