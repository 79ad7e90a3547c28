"""
Telemetry configuration module for the FRIS simulator.

This module configures OpenTelemetry tracing for the optimizer loop, the
exhaustive-search oracle and the experiment harness. Tracing is opt-in from
the command line; without an exporter the global tracer stays a no-op.
"""

import logging
from typing import Optional
from opentelemetry import trace
from opentelemetry.sdk.trace import TracerProvider
from opentelemetry.sdk.trace.export import BatchSpanProcessor, ConsoleSpanExporter
from opentelemetry.exporter.otlp.proto.http.trace_exporter import OTLPSpanExporter
from opentelemetry.sdk.resources import Resource
from opentelemetry.semconv.resource import ResourceAttributes

logger = logging.getLogger(__name__)


def configure_telemetry(
    console: bool = False,
    otlp_endpoint: Optional[str] = None,
    service_name: str = "fris-lab",
) -> Optional[TracerProvider]:
    """Configure OpenTelemetry tracing.

    Args:
        console: Print finished spans to stdout.
        otlp_endpoint: Export spans over OTLP/HTTP to this endpoint.
        service_name: Value of the service.name resource attribute.

    Returns:
        The installed provider, or None when tracing stays disabled.
    """
    if not console and not otlp_endpoint:
        logger.debug("Tracing disabled, no exporter requested")
        return None

    resource = Resource.create({ResourceAttributes.SERVICE_NAME: service_name})
    provider = TracerProvider(resource=resource)

    if console:
        provider.add_span_processor(BatchSpanProcessor(ConsoleSpanExporter()))
        logger.info("🔌 Console span exporter enabled")

    if otlp_endpoint:
        provider.add_span_processor(BatchSpanProcessor(OTLPSpanExporter(endpoint=otlp_endpoint)))
        logger.info("✅ Configured OTLP exporter with endpoint: %s", otlp_endpoint)

    trace.set_tracer_provider(provider)
    logger.info("✅ OpenTelemetry configuration complete")
    return provider
