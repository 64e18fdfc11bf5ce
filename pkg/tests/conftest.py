import numpy as np
import pytest

from stathorizon.lattice_lpp import WeightField


@pytest.fixture
def tiny_field():
    # weights[row, col]: (0,0)=1, (1,0)=2, (0,1)=3, (1,1)=4 as (col, row)
    return WeightField(0, (0, 0), 2, 2, np.array([[1.0, 2.0], [3.0, 4.0]]))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
