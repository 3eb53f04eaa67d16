import math

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("walks", max_examples=40, deadline=None)
settings.load_profile("walks")

SQ = 1 / math.sqrt(2)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    from tests.test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[number].line())
