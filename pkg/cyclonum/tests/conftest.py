"""Pytest configuration and shared fixtures."""

import random

import pytest
from hypothesis import settings as hypothesis_settings

from cyclonum.config import settings
from cyclonum.cyclotomy import make_config

hypothesis_settings.register_profile("cyclonum", deadline=None, max_examples=200)
hypothesis_settings.load_profile("cyclonum")


@pytest.fixture
def rng():
    """Seeded random source for counted sweeps."""
    return random.Random(settings.RANDOM_SEED)


@pytest.fixture
def f5_config():
    """q = 5, e = 2, k = 2."""
    return make_config(5, 1, 2)


@pytest.fixture
def f7_config():
    """q = 7, e = 2, k = 3."""
    return make_config(7, 1, 2)


@pytest.fixture
def f13_config():
    """q = 13, e = 2, k = 6."""
    return make_config(13, 1, 2)


@pytest.fixture
def config_1301():
    """p = 1301 = 100 * 13 + 1."""
    return make_config(1301, 1, 100)


@pytest.fixture
def config_841():
    """q = 29^2, e = 168, k = 5."""
    return make_config(29, 2, 168)


@pytest.fixture
def cache_path(tmp_path):
    """Path for a throwaway results cache."""
    return tmp_path / "results.jsonl"
