from __future__ import annotations

import time

import pytest
from hypothesis import settings

from kcert.picard import A1, A2, TWO_A1, build_config

# exact arithmetic on growing fractions makes per-example time uneven
settings.register_profile("kcert", max_examples=50, deadline=None)
settings.load_profile("kcert")


@pytest.fixture(scope="session")
def a1():
    return build_config(A1)


@pytest.fixture(scope="session")
def two_a1():
    return build_config(TWO_A1)


@pytest.fixture(scope="session")
def a2():
    return build_config(A2)


@pytest.fixture(scope="session")
def paper_certificate():
    from kcert.fano35 import certificate

    return certificate("paper")


@pytest.fixture(scope="session")
def isolated_certificate():
    from kcert.fano35 import certificate

    return certificate("isolated")


# -- acceptance reporting -----------------------------------------------------

_ACCEPTANCE = pytest.StashKey[dict]()
_STARTED = pytest.StashKey[float]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = {}
    config.stash[_STARTED] = time.perf_counter()
    config.addinivalue_line("markers", "run_last: run after every other test")


def pytest_collection_modifyitems(config, items):
    items.sort(key=lambda item: item.get_closest_marker("run_last") is not None)


@pytest.fixture
def acceptance(request):
    """Record one pass/fail line per acceptance criterion."""
    log = request.config.stash[_ACCEPTANCE]

    def record(number: int, ok: bool, detail: str) -> bool:
        log[number] = (ok, detail)
        print(f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}")
        return ok

    return record


@pytest.fixture
def session_elapsed(request):
    return lambda: time.perf_counter() - request.config.stash[_STARTED]


def pytest_terminal_summary(terminalreporter, config):
    log = config.stash.get(_ACCEPTANCE, {})
    if not log:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(log):
        ok, detail = log[number]
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'} - {detail}")
