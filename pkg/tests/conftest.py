import logging
import sys
from pathlib import Path

import numpy as np
import pytest

# Ensure src/ is importable during tests (cross-platform)
src = Path(__file__).resolve().parents[1] / "src"
if str(src) not in sys.path:
    sys.path.insert(0, str(src))

from addlab.core.config import OracleConfig  # noqa: E402

ENV_KEYS = (
    "ADDLAB_CONFIG_PATH",
    "ADDLAB_RESTARTS",
    "ADDLAB_MAX_ITERS",
    "ADDLAB_TOL",
    "ADDLAB_SEED",
    "ADDLAB_WORKERS",
    "ADDLAB_LOG_LEVEL",
    "ADDLAB_LOG_JSON",
    "ADDLAB_OUTPUT_DIR",
)


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    """Keep the caller's ADDLAB_* variables out of every test."""
    for key in ENV_KEYS:
        monkeypatch.delenv(key, raising=False)
    yield
    # the CLI installs a non-propagating "addlab" logger; undo it so caplog sees records again
    root = logging.getLogger("addlab")
    root.handlers.clear()
    root.propagate = True
    root.setLevel(logging.NOTSET)


@pytest.fixture
def fast_oracle() -> OracleConfig:
    return OracleConfig(restarts=8, max_iterations=200, tolerance=1e-12, seed=7)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)
