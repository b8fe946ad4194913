import pytest

from bmattack.generators import reference_bbs, reference_kaliski

_CRITERIA: dict[str, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def bbs():
    return reference_bbs()


@pytest.fixture(scope="session")
def kaliski():
    return reference_kaliski()


@pytest.fixture
def criterion(request):
    """Record an acceptance criterion outcome for the terminal summary."""
    name = request.node.get_closest_marker("criterion").args[0]
    _CRITERIA[name] = (False, "did not complete")

    def done(detail: str):
        _CRITERIA[name] = (True, detail)

    return done


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name): acceptance criterion label")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_CRITERIA, key=lambda s: int(s.split()[0])):
        ok, detail = _CRITERIA[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
