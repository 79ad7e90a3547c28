from .errors import (
    ConfigError,
    InvalidInputError,
    InvalidSelectionError,
    BudgetExceededError,
    ResultsIOError,
)
from .telemetry import tracer, Status, StatusCode, configure_telemetry

__all__ = [
    'ConfigError',
    'InvalidInputError',
    'InvalidSelectionError',
    'BudgetExceededError',
    'ResultsIOError',
    'tracer',
    'Status',
    'StatusCode',
    'configure_telemetry',
]
