import itertools

import pytest

from spermat.graphs import CACHE_ENV, enumerate_classes
from spermat.matrix import PiMatrix

# Example pair matrices for n=3 (pi1 and pi2 disjoint; pi3 shares 4 entries
# with pi1 and 2 with pi2).
PI1 = [[(1, 2), (3, 1), (2, 3)], [(2, 1), (3, 3), (1, 2)], [(3, 3), (1, 2), (2, 1)]]
PI2 = [[(1, 3), (3, 2), (2, 1)], [(3, 1), (1, 1), (2, 2)], [(3, 2), (1, 3), (2, 3)]]
PI3 = [[(1, 2), (3, 3), (2, 1)], [(2, 1), (3, 2), (1, 2)], [(3, 3), (1, 1), (2, 3)]]


@pytest.fixture
def pi1():
    return PiMatrix(PI1)


@pytest.fixture
def pi2():
    return PiMatrix(PI2)


@pytest.fixture
def pi3():
    return PiMatrix(PI3)


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path_factory, monkeypatch):
    # one shared cache per session keeps the CLI tests fast but out of the repo
    monkeypatch.setenv(CACHE_ENV, str(tmp_path_factory.getbasetemp() / "spermat-cache"))


@pytest.fixture(scope="session")
def tables():
    return {n: enumerate_classes(n) for n in (1, 2, 3, 4)}


def brute_sigma(n):
    """All n^2 x n^2 S-permutation grids, by filtering permutation matrices."""
    m = n * n
    out = []
    for perm in itertools.permutations(range(m)):
        blocks = {(r // n, c // n) for r, c in enumerate(perm)}
        if len(blocks) == m:
            out.append(tuple(tuple(int(perm[r] == c) for c in range(m)) for r in range(m)))
    return out


# per-criterion reporting for tests/test_acceptance.py

_criteria = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion label")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    label = marker.args[0]
    callspec = getattr(item, "callspec", None)
    if callspec is not None:
        label += f" [{callspec.id}]"
    _criteria.append((label, call.excinfo is None))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok in _criteria:
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {label}")
