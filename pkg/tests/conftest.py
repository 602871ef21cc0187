from __future__ import annotations

import pathlib
import sys
from datetime import date

import pytest

from semnav import WeightConfig, load_model

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent))

FIXTURES = pathlib.Path(__file__).resolve().parents[1] / "fixtures"
TODAY = date(2026, 1, 15)  # fixture scan dates are all stale relative to this


@pytest.fixture(scope="session")
def fixtures_dir() -> pathlib.Path:
    return FIXTURES


@pytest.fixture(scope="session")
def twocorridor_path() -> pathlib.Path:
    return FIXTURES / "twocorridor.json"


@pytest.fixture(scope="session")
def twocorridor(twocorridor_path):
    return load_model(str(twocorridor_path))


@pytest.fixture(scope="session")
def config() -> WeightConfig:
    return WeightConfig()


@pytest.fixture(scope="session")
def today() -> date:
    return TODAY
