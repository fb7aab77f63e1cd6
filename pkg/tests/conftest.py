import math

import pytest
from hypothesis import settings

settings.register_profile("suite", deadline=None, max_examples=20)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def disk_closed_form():
    """q=1, n=2, beta=1, R=1 reference values."""
    return {
        "psi0": 0.75,
        "psiR": 0.5,
        "E": -5.0 * math.pi / 16.0,
        "lambda1": 8.0 / (5.0 * math.pi),
    }
