"""Shared pytest fixtures."""

import pytest

from src import config


@pytest.fixture(autouse=True)
def restore_checks():
    """CLI runs and serial benches flip the global checks flag; put it back."""
    previous = config.CHECKS_ENABLED
    yield
    config.CHECKS_ENABLED = previous
