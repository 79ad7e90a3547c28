"""Tracing for the optimizer loop, the oracle and the experiment harness.

Spans go through the global provider, which stays a no-op until configure_telemetry installs one.
"""

from opentelemetry import trace
from opentelemetry.trace import Status, StatusCode
from .configurator import configure_telemetry

# One named tracer shared by every module; spans are grouped under the simulator's scope.
tracer = trace.get_tracer("fris_lab")

__all__ = ['tracer', 'Status', 'StatusCode', 'configure_telemetry']
