import numpy as np
import pytest

from symindex import Angle, PathSpec, RotationBlock


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def rot(p, q=1, mult=1):
    return PathSpec((RotationBlock(Angle.exact(p, q), mult=mult),))


def spec(*blocks):
    return PathSpec(tuple(blocks))


def pytest_terminal_summary(terminalreporter):
    from tests import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
