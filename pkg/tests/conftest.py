import sys
import numpy as np
import pytest

from cointkit.data import derive, load_france
from cointkit.series import AnnualSeries


@pytest.fixture(scope="session")
def france():
    return derive(load_france())


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def series(values, start=2000, name="s", units="rate"):
    return AnnualSeries(name, start, np.asarray(values, dtype=float), units)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k])
