"""Test configuration and fixtures for the flatcurve project."""

import shutil
import tempfile
from pathlib import Path

import pytest
import structlog

from libs.builders import bouw_moller, regular_ngon, square_torus
from libs.geodesics import enumerate_saddle_connections


@pytest.fixture
def temp_dir() -> Path:
    """Create a temporary directory for tests."""
    temp_dir = tempfile.mkdtemp()
    yield Path(temp_dir)
    shutil.rmtree(temp_dir)


@pytest.fixture(autouse=True)
def reset_structlog():
    """Drop any logging configuration a CLI run installed."""
    yield
    structlog.reset_defaults()


@pytest.fixture(scope="session")
def torus():
    """Unit square torus."""
    return square_torus()


@pytest.fixture(scope="session")
def decagon():
    """Regular decagon with opposite sides glued."""
    return regular_ngon(10)


@pytest.fixture(scope="session")
def octagon():
    """Regular octagon with opposite sides glued."""
    return regular_ngon(8)


@pytest.fixture(scope="session")
def bm_4_8():
    """Normalized Bouw-Moller surface S_{4,8}."""
    return bouw_moller(4, 8)


@pytest.fixture(scope="session")
def torus_connections(torus):
    """Torus saddle connections up to length 3."""
    return enumerate_saddle_connections(torus, 3.0)


@pytest.fixture(scope="session")
def decagon_connections(decagon):
    """Decagon saddle connections up to length 3."""
    return enumerate_saddle_connections(decagon, 3.0)
