"""Shared fixtures for the weyltube test suite."""

import numpy as np
import pytest

from weyltube.config.settings import get_settings


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running enumeration or sampling test")


@pytest.fixture(autouse=True)
def _fresh_settings(monkeypatch):
    """Each test sees settings built from its own environment."""
    monkeypatch.delenv("WEYLTUBE_THREADS", raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def random_second_form(rng):
    """Symmetric second fundamental form of shape ``(n, n, m)`` with ``n = 3``, ``m = 2``."""
    h = rng.normal(size=(3, 3, 2))
    return (h + h.transpose(1, 0, 2)) / 2
