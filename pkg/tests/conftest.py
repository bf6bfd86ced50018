import time
from contextlib import contextmanager

import pytest

_RESULTS = []


@pytest.fixture
def criterion():
    """Time a block, check its budget and record one PASS/FAIL line for the summary."""

    @contextmanager
    def run(number, title, budget):
        t0 = time.perf_counter()
        info = {}
        try:
            yield info
            elapsed = time.perf_counter() - t0
            assert elapsed < budget, f"took {elapsed:.1f}s, budget {budget}s"
        except BaseException as e:
            elapsed = time.perf_counter() - t0
            _RESULTS.append((number, f"FAIL  {number:>2}. {title} ({elapsed:.1f}s): {str(e).splitlines()[0] if str(e) else type(e).__name__}"))
            print(_RESULTS[-1][1])
            raise
        extra = f"; {info['detail']}" if "detail" in info else ""
        _RESULTS.append((number, f"PASS  {number:>2}. {title} ({elapsed:.1f}s){extra}"))
        print(_RESULTS[-1][1])
    return run


def pytest_terminal_summary(terminalreporter):
    if _RESULTS:
        terminalreporter.write_sep("=", "acceptance criteria")
        for _, line in sorted(_RESULTS):
            terminalreporter.write_line(line)
