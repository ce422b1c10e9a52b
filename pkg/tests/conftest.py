import math

import numpy as np
import pytest

from sc_negativity.states import BipartiteDims, pure_density


@pytest.fixture
def bell_density():
    s = 1 / math.sqrt(2)
    return pure_density([s, 0, 0, s], BipartiteDims(2, 2))


@pytest.fixture
def maximally_mixed():
    from sc_negativity.states import validate_density

    return validate_density(np.eye(4) / 4, BipartiteDims(2, 2))


def random_hermitian(rng, n):
    x = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return x + x.conj().T


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
