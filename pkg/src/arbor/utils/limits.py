# src/arbor/utils/limits.py

import logging

from arbor.errors import ResourceLimitError
from arbor.metrics import resource_limit_total

logger = logging.getLogger(__name__)


def enforce_limit(resource: str, requested: int, limit: int) -> None:
    """Raise ResourceLimitError when ``requested`` exceeds ``limit``."""
    if requested > limit:
        resource_limit_total.labels(resource=resource).inc()
        logger.warning("Refusing %s=%s (limit %s)", resource, requested, limit)
        raise ResourceLimitError(resource, requested, limit)
