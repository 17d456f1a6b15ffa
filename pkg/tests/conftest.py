import pytest

from barriercast import generate_scene, preset

ACCEPTANCE_RESULTS = {}


@pytest.fixture(scope="session")
def disk_scene():
    return generate_scene(preset("disk"))


@pytest.fixture(scope="session")
def rect_scene():
    return generate_scene(preset("rect"))


@pytest.fixture(scope="session")
def hand_scene():
    return generate_scene(preset("hand-v1"))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS):
        ok, line = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {key:>2}. {line}")
