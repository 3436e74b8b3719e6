from pathlib import Path

import pytest

from cycrep.algebra import AtomStructure, catalog
from cycrep.verify import load_coloring

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def z29_coloring():
    return load_coloring(FIXTURES / "63_65_z29.json")


@pytest.fixture
def z46_coloring():
    return load_coloring(FIXTURES / "57_65_z46.json")


@pytest.fixture
def ra63():
    return catalog("63_65")


@pytest.fixture
def ra57():
    return catalog("57_65")


@pytest.fixture
def ra33():
    return catalog("33_65")


@pytest.fixture
def single_flexible():
    return AtomStructure.from_strings("single", "a", [])


# --- acceptance reporting ----------------------------------------------------

_CRITERIA: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marker = dict(report.user_properties).get("criterion")
    if marker:
        number, title = marker
        _CRITERIA[number] = (title, "PASS" if report.passed else "FAIL")


@pytest.fixture(autouse=True)
def _record_criterion(request):
    m = request.node.get_closest_marker("criterion")
    if m:
        request.node.user_properties.append(("criterion", tuple(m.args)))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, status = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number}: {status}  {title}")
