import pytest

from scatterlab.core.config import Settings, get_settings


@pytest.fixture(autouse=True)
def clear_settings_cache():
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def settings() -> Settings:
    return Settings()


@pytest.fixture
def coarse_settings() -> Settings:
    """Malla mas gruesa para integraciones largas en los tests."""
    return Settings(inner_step=2e-3, outer_step=2e-2, inner_region=10.0, node_index=4)
