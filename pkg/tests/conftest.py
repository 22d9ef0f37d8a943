import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from shepherdkb import builtin
from shepherdkb.missions import MissionService, load_defaults
from shepherdkb.reasoner import classify


@pytest.fixture(scope="session")
def shipped():
    return builtin.load_builtin()


@pytest.fixture(scope="session")
def shipped_model(shipped):
    return classify(shipped)


@pytest.fixture(scope="session")
def defaults():
    return load_defaults()


@pytest.fixture
def service(tmp_path):
    return MissionService(store_dir=str(tmp_path / "missions"))
