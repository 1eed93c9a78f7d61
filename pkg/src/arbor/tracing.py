# src/arbor/tracing.py

import sys

from opentelemetry import trace
from opentelemetry.sdk.trace import TracerProvider
from opentelemetry.sdk.trace.export import (
    SimpleSpanProcessor,
    ConsoleSpanExporter,
)

from arbor.config import get_settings


def configure_tracing(service_name: str = "arbor") -> None:
    """
    Configure OpenTelemetry tracing.

    Spans are always recorded; they are only exported (to stderr) when
    ``ARBOR_TRACE_EXPORT=console``.
    """
    # If there's already a provider, don't reconfigure
    if isinstance(trace.get_tracer_provider(), TracerProvider):
        return

    from opentelemetry.sdk.resources import Resource

    provider = TracerProvider(resource=Resource.create({"service.name": service_name}))
    if get_settings().trace_export == "console":
        # SimpleSpanProcessor exports synchronously; no worker thread outlives the CLI run.
        provider.add_span_processor(SimpleSpanProcessor(ConsoleSpanExporter(out=sys.stderr)))

    trace.set_tracer_provider(provider)
