import pytest

from crewsim.config import load_config_dir, shipped_config_dir


@pytest.fixture(scope="session")
def configs():
    return load_config_dir(shipped_config_dir())
