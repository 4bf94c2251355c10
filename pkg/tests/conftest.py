import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from climgov.config import SimulationConfig  # noqa: E402

ROOT = Path(__file__).resolve().parents[1]


def make_config(**sections):
    """Default scenario with per-section overrides given as dicts."""
    data = SimulationConfig().model_dump()
    for name, override in sections.items():
        if isinstance(override, dict) and isinstance(data.get(name), dict):
            data[name].update(override)
        else:
            data[name] = override
    return SimulationConfig.model_validate(data)


@pytest.fixture
def small_config():
    return make_config(population={"size": 300}, network={"target_mean_degree": 8.0})


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def default_scenario():
    return ROOT / "scenarios" / "default.yaml"
