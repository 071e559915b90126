import time
from contextlib import contextmanager

import pytest

_LINES = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_LINES] = []


@pytest.fixture
def criterion(request):
    """Context manager that records one PASS/FAIL line for an acceptance criterion."""
    lines = request.config.stash[_LINES]

    @contextmanager
    def record(number, title):
        t0 = time.perf_counter()
        try:
            yield
        except BaseException as exc:
            msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
            lines.append(f"criterion {number}: FAIL  {title}  [{msg}]")
            raise
        lines.append(f"criterion {number}: PASS  {title}  ({time.perf_counter() - t0:.3f}s)")

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash[_LINES]
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: s.split(":")[0]):
            terminalreporter.write_line(line)
