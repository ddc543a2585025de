import pytest
from hypothesis import HealthCheck, settings

from bkkernel.chartab import dixon_table
from bkkernel.group import ClassTable, StandardGroupSpec

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

_TABLES = {}


def tables(n, q):
    """Shared (ClassTable, CharacterTable) for GL_n(F_q)."""
    key = (n, q)
    if key not in _TABLES:
        t = ClassTable(StandardGroupSpec.gl(n, q))
        _TABLES[key] = (t, dixon_table(t))
    return _TABLES[key]


@pytest.fixture(scope="session")
def gl2_3():
    return tables(2, 3)


@pytest.fixture(scope="session")
def gl2_5():
    return tables(2, 5)


@pytest.fixture(scope="session")
def gl1_3():
    return tables(1, 3)
