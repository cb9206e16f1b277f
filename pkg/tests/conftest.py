import numpy as np
import pytest

from xistrong import Graph
from xistrong._util import make_rng

_criteria: dict[int, list[tuple[str, str, str]]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        reason = ""
        if report.skipped and isinstance(report.longrepr, tuple):
            reason = report.longrepr[2]
        status = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[report.outcome]
        _criteria.setdefault(marker.args[0], []).append((status, item.name, reason))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for num in sorted(_criteria):
        results = _criteria[num]
        statuses = {s for s, _, _ in results}
        overall = "FAIL" if "FAIL" in statuses else ("SKIP" if statuses == {"SKIP"} else "PASS")
        reasons = sorted({r.removeprefix("Skipped: ") for _, _, r in results if r})
        counts = ", ".join(f"{sum(s == k for s, _, _ in results)} {k.lower()}" for k in ("PASS", "FAIL", "SKIP") if k in statuses)
        tail = f" ({'; '.join(reasons)})" if reasons else ""
        tr.write_line(f"criterion {num:>2}: {overall}  [{counts}]{tail}")


def graph_of(n, edges):
    edges = list(edges)
    src = [u for u, _ in edges]
    dst = [v for _, v in edges]
    return Graph.from_edges(n, src, dst)


@pytest.fixture
def star():
    """K_{1,4} with centre 0."""
    return graph_of(5, [(0, i) for i in range(1, 5)])


@pytest.fixture
def triangle():
    return graph_of(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def cycle4():
    return graph_of(4, [(0, 1), (1, 2), (2, 3), (3, 0)])


@pytest.fixture
def rng():
    return make_rng(12345)


def random_graph(rng: np.random.Generator, n: int, p: float) -> Graph:
    m = rng.binomial(n * (n - 1) // 2, p) if n > 1 else 0
    src = rng.integers(0, max(n, 1), size=m)
    dst = rng.integers(0, max(n, 1), size=m)
    return Graph.from_edges(n, src, dst)
