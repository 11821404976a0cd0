import os
import sys
from pathlib import Path

import pytest

# --- CORE TRUTH: run against the source checkout ---
SRC_DIR = Path(__file__).resolve().parents[1] / "src"
sys.path.insert(0, str(SRC_DIR))

os.environ["PYTHONPATH"] = f"{SRC_DIR}:{os.environ.get('PYTHONPATH', '')}"

from billiards.core.billiard import Trajectory  # noqa: E402
from billiards.core.family import approximants, build_polygon, family_params, gamma  # noqa: E402
from billiards.core.qfield import SQRT2  # noqa: E402

SEED = 0


@pytest.fixture(autouse=True)
def billiards_env(monkeypatch):
    """Clean and consistent environment for every test."""
    for key in list(os.environ):
        if key.startswith("BILLIARDS_"):
            monkeypatch.delenv(key, raising=False)


@pytest.fixture(scope="session")
def alpha():
    return SQRT2


@pytest.fixture(scope="session")
def params():
    return family_params(2, 0, 2, 2)


@pytest.fixture(scope="session")
def table(params):
    return build_polygon(params)


@pytest.fixture(scope="session")
def family(params):
    return approximants(params, 200)


@pytest.fixture(scope="session")
def gammas(table, family):
    """Lazily traced gamma_n, shared across the session."""
    cache = {}

    def get(n: int) -> Trajectory:
        if n not in cache:
            cache[n] = gamma(table, family[n])
        return cache[n]

    return get
