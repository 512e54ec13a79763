"""Shared fixtures for the quartic-iso test suite."""

import random
from pathlib import Path

import pytest

FIXTURES_DIR = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES_DIR


@pytest.fixture
def rng() -> random.Random:
    """Seeded so property checks are reproducible"""
    return random.Random(20240611)
