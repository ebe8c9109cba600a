import mpmath
import pytest
from hypothesis import HealthCheck, settings

from ellsym2.elliptic import CurveContext

settings.register_profile(
    "default", deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture
def square():
    return CurveContext.square()


@pytest.fixture(autouse=True)
def hp():
    """Run every test body at 45 digits so comparisons are not limited by mpmath's default."""
    with mpmath.workdps(45):
        yield


def close(a, b, tol):
    return abs(mpmath.mpmathify(a) - mpmath.mpmathify(b)) <= tol


ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[ACCEPTANCE] = []


@pytest.fixture
def record(request):
    """Record one pass/fail line for an acceptance criterion (printed in the terminal summary)."""
    def _record(number: int, ok: bool, detail: str) -> None:
        line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        print(line)
        request.config.stash[ACCEPTANCE].append((number, line))
    return _record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE, [])
    if lines:
        terminalreporter.write_sep("=", "acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
