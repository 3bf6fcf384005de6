from hypothesis import HealthCheck, settings
import pytest

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

_criteria: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def criterion():
    """record(number, ok, detail) for the acceptance summary; returns ok."""
    def record(number: int, ok: bool, detail: str) -> bool:
        _criteria[number] = (bool(ok), detail)
        return bool(ok)
    return record


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in range(1, 11):
        ok, detail = _criteria.get(number, (False, "not reached"))
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
