import pytest
from services.rootsys import RootSystemId
from services.registry import RootSystemRegistry


@pytest.fixture(scope='session')
def registry() -> RootSystemRegistry:
    return RootSystemRegistry()


@pytest.fixture(scope='session')
def system(registry):
    """system('E6') or system('A3', 7) returns the shared root system"""
    def get(name: str, gram_scale=1):
        return registry.get(RootSystemId.parse(name), gram_scale)
    return get
