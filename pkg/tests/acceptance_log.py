"""Collects one verdict line per acceptance criterion for the terminal summary."""

import contextlib
import time

LINES: list[str] = []


@contextlib.contextmanager
def criterion(number: int, title: str, budget: float):
    start = time.perf_counter()
    try:
        yield
    except BaseException as exc:
        took = time.perf_counter() - start
        LINES.append(f"criterion {number}: FAIL  {title} ({took:.2f}s) -- {type(exc).__name__}: {str(exc)[:120]}")
        raise
    took = time.perf_counter() - start
    if took >= budget:
        LINES.append(f"criterion {number}: FAIL  {title} ({took:.2f}s, budget {budget:.0f}s)")
        raise AssertionError(f"criterion {number} took {took:.1f}s, budget {budget}s")
    LINES.append(f"criterion {number}: PASS  {title} ({took:.2f}s)")
