import random

import pytest

from resrings.suites import standard_resolution


@pytest.fixture(scope="session")
def std_res():
    """Cached standard-configuration resolutions, keyed by n."""
    return standard_resolution


@pytest.fixture
def rng():
    return random.Random(20260810)
