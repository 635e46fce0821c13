import pytest

from bertini.gf import field_create
from config.settings import ENV_OVERRIDES, get_limits


@pytest.fixture(autouse=True)
def fresh_limits(monkeypatch):
    """Every test sees limits.yaml without environment overrides."""
    for env_name in ENV_OVERRIDES.values():
        monkeypatch.delenv(env_name, raising=False)
    get_limits.cache_clear()
    yield
    get_limits.cache_clear()


@pytest.fixture
def F2():
    return field_create(2, 1)


@pytest.fixture
def F3():
    return field_create(3, 1)


@pytest.fixture
def F4():
    return field_create(2, 2)
