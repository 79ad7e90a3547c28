"""Error types raised across the simulator.

They subclass the builtins so callers that only know ValueError/RuntimeError keep working.
"""


class ConfigError(ValueError):
    """Invalid, unknown or unsupported experiment configuration."""


class InvalidInputError(ValueError):
    """Malformed numerical input: bad shapes, non-finite entries, infeasible counts."""


class InvalidSelectionError(InvalidInputError):
    """Selection indices that are duplicated or out of range."""


class BudgetExceededError(RuntimeError):
    """Exhaustive search refused because the instance exceeds the evaluation budget."""


class ResultsIOError(RuntimeError):
    """Reading or writing a results file failed."""
