import math

import pytest

ALPHAS = (1.1, 1.25, 1.5, 1.75, 2.0)
BS = tuple(range(2, 9))

ACCEPTANCE_LINES: list[str] = []


def gamma_ratio(*num, den=()):
    """Product of Gamma(x) over ``num`` divided by the product over ``den``."""
    out = 1.0
    for x in num:
        out *= math.gamma(x)
    for x in den:
        out /= math.gamma(x)
    return out


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    import numpy as np

    return np.random.default_rng(20161018)
