import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "default",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
    derandomize=True,
)
settings.load_profile("default")

_PROPERTY_OUTCOMES: dict = {}
_CRITERIA: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "property: part of the property suites")
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")
    config._property_outcomes = _PROPERTY_OUTCOMES


def pytest_collection_modifyitems(config, items):
    # the property-suite criterion reads the outcomes of the other tests, so it runs last
    last = [it for it in items if it.get_closest_marker("criterion") and it.get_closest_marker("criterion").args[0] == 10]
    for it in last:
        items.remove(it)
        items.append(it)


def pytest_runtest_logreport(report):
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        keywords = report.keywords
        if "property" in keywords:
            prev = _PROPERTY_OUTCOMES.get(report.nodeid, "passed")
            _PROPERTY_OUTCOMES[report.nodeid] = report.outcome if prev == "passed" else prev
        for key, value in keywords.items():
            if key.startswith("criterion_"):
                n = int(key.split("_")[1])
                if _CRITERIA.get(n, "passed") == "passed":
                    _CRITERIA[n] = report.outcome


@pytest.fixture(autouse=True)
def _criterion_keyword(request):
    mark = request.node.get_closest_marker("criterion")
    if mark is not None:
        request.node.keywords[f"criterion_{mark.args[0]}"] = True
    yield


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        status = "PASS" if _CRITERIA[n] == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {n:2d}: {status}")
