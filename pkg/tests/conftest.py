import pytest

from heritagecrime.funnel import bundled_records


@pytest.fixture(scope="session")
def bundled():
    return bundled_records()
