import pytest
from hypothesis import settings

from varbesov.grid import Grid, default_grid
from varbesov.littlewood_paley import build_resolution

settings.register_profile("repro", derandomize=True, deadline=None)
settings.load_profile("repro")


@pytest.fixture(scope="session")
def desk_grid():
    return default_grid(1)


@pytest.fixture(scope="session")
def small_grid():
    # enough resolution for levels <= 7 and grid-aligned unit intervals
    return Grid(1, 1024, 16.0)


@pytest.fixture(scope="session")
def desk_rou(desk_grid):
    return build_resolution(desk_grid, 8)


@pytest.fixture(scope="session")
def small_rou(small_grid):
    return build_resolution(small_grid, 7)


def pytest_addoption(parser):
    parser.addoption(
        "--skip-slow", action="store_true", default=False,
        help="skip the long-running acceptance sweeps",
    )


def pytest_collection_modifyitems(config, items):
    if not config.getoption("--skip-slow"):
        return
    marker = pytest.mark.skip(reason="--skip-slow given")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(marker)


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running acceptance sweep")
