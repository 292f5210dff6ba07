import json

import pytest

from app.models.params import SystemParams

FIGURE_POOL = 10_000


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run the full figure reproductions")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


def figure_params(k1: int, a11: float, a12: float, a22: float) -> SystemParams:
    return SystemParams.build((0.5, 0.5), (k1, k1 + 5), FIGURE_POOL, ((a11, a12), (a12, a22)))


@pytest.fixture
def figure1_params():
    def make(k1: int = 20, alpha12: float = 0.2) -> SystemParams:
        return figure_params(k1, 0.3, alpha12, 0.3)
    return make


@pytest.fixture
def write_config(tmp_path):
    """Write a JSON network config and return its path as a string."""
    def write(name: str = "config.json", **fields) -> str:
        path = tmp_path / name
        path.write_text(json.dumps(fields), encoding="utf-8")
        return str(path)
    return write


@pytest.fixture
def figure1_config(write_config):
    def make(alpha12: float = 0.2, k1: int = 20) -> str:
        return write_config(
            f"figure1_{alpha12}.json",
            r=2, mu=[0.5, 0.5], P=FIGURE_POOL, K1=k1, offsets=[0, 5],
            alpha=[0.3, alpha12, alpha12, 0.3], n=500, trials=400, seed=0,
        )
    return make
