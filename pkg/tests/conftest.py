import pytest

from fbgap.catenoid import make_catenoid
from fbgap.profile import solve_profile


@pytest.fixture(scope="session")
def profiles():
    return {c: solve_profile(c) for c in (0.2, 0.5, 0.8)}


@pytest.fixture(scope="session")
def catenoids():
    out = {("hyperbolic", a): make_catenoid("hyperbolic", a) for a in (0.75, 1.0, 2.0)}
    out.update({("spherical", a): make_catenoid("spherical", a) for a in (-0.4, -0.25, -0.1)})
    out[("euclidean", 1.0)] = make_catenoid("euclidean", 1.0)
    return out


ACCEPTANCE_LINES = []


@pytest.fixture
def record_criterion():
    def record(number, title, ok, detail):
        ACCEPTANCE_LINES.append((number, f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {title} ({detail})"))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
