import numpy as np
import pytest

from optosqueeze.config import load_config
from optosqueeze.system import DerivedCouplings


@pytest.fixture
def toy():
    """Natural-unit couplings used throughout: omega_m = 1, C_D = 0.3, C_S = 0.4."""
    return DerivedCouplings(omega_m=1.0, C_D=0.3, C_S=0.4)


@pytest.fixture
def chi2():
    """omega_m = 1, C_S = 1.5, so chi = 2 exactly."""
    return DerivedCouplings(omega_m=1.0, C_D=1.0, C_S=1.5)


@pytest.fixture(scope="session")
def fig2_config():
    return load_config("fig2.cfg")


@pytest.fixture(scope="session")
def toy_config():
    return load_config("toy.cfg")


@pytest.fixture
def tol():
    return 1e-12



_ACCEPTANCE = pytest.StashKey()


@pytest.fixture
def acceptance(request):
    """Record one verdict line per acceptance criterion for the terminal summary."""
    lines = request.config.stash.setdefault(_ACCEPTANCE, {})

    def record(label, passed, detail):
        lines[label] = f"criterion {label}: {'PASS' if passed else 'FAIL'}  {detail}"
        print(lines[label])

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, {})
    if lines:
        terminalreporter.section("acceptance criteria")
        for label in sorted(lines):
            terminalreporter.write_line(lines[label])
