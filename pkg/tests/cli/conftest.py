import logging

import pytest


@pytest.fixture(autouse=True)
def restore_package_logger():
    """The CLI group installs a handler on the package logger; undo it per test."""
    logger = logging.getLogger("meshwalk")
    level, handlers = logger.level, list(logger.handlers)
    yield
    logger.setLevel(level)
    logger.handlers[:] = handlers
