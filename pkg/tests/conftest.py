import time
from contextlib import contextmanager

import pytest

from leadsel.graph import broom_graph, build_graph, path_graph

ACCEPTANCE_LINES: list[str] = []


@contextmanager
def criterion(number: int, title: str, limit_s: float):
    """Time a criterion body, enforce its runtime limit and record one summary line."""
    start = time.perf_counter()
    status, detail = "FAIL", ""
    try:
        yield
        elapsed = time.perf_counter() - start
        if elapsed >= limit_s:
            detail = f"runtime {elapsed:.2f}s >= {limit_s}s"
            raise AssertionError(detail)
        status, detail = "PASS", f"{elapsed:.2f}s (limit {limit_s}s)"
    except BaseException as exc:
        detail = detail or f"{type(exc).__name__}: {exc}"[:200]
        raise
    finally:
        ACCEPTANCE_LINES.append(f"[{status}] criterion {number:>2}: {title} -- {detail}")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def broom():
    return broom_graph()


@pytest.fixture
def path3():
    return path_graph(3)


@pytest.fixture
def triangle():
    return build_graph(3, [(0, 1), (1, 2), (0, 2)])
