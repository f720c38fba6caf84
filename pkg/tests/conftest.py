import os
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
DATA = ROOT / "src" / "thetadesign" / "data"


@pytest.fixture(scope="session", autouse=True)
def _cache_dir(tmp_path_factory):
    # keep derived entries and GDD caches out of the user's home directory
    path = tmp_path_factory.mktemp("theta_cache")
    old = os.environ.get("THETA_CACHE_DIR")
    os.environ["THETA_CACHE_DIR"] = str(path)
    yield path
    if old is None:
        os.environ.pop("THETA_CACHE_DIR", None)
    else:
        os.environ["THETA_CACHE_DIR"] = old


@pytest.fixture
def data_dir() -> Path:
    return DATA
