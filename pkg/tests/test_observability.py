# tests/test_observability.py
import io
import logging

import pytest
from prometheus_client import REGISTRY

from arbor.config import override_settings
from arbor.errors import ResourceLimitError
from arbor.logging_config import configure_logging
from arbor.utils.limits import enforce_limit


@pytest.fixture
def restore_root_logger():
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)


def test_log_lines_carry_trace_placeholders(restore_root_logger):
    override_settings(log_level="info")
    stream = io.StringIO()
    configure_logging(stream)
    logging.getLogger("arbor.test").info("hello")
    line = stream.getvalue()
    assert "[INFO] arbor.test [trace=- span=-] - hello" in line


def test_refused_limits_are_counted():
    before = REGISTRY.get_sample_value("arbor_resource_limit_total", {"resource": "cells"}) or 0
    with pytest.raises(ResourceLimitError):
        enforce_limit("cells", 11, 10)
    assert REGISTRY.get_sample_value("arbor_resource_limit_total", {"resource": "cells"}) == before + 1
