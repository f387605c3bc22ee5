import pytest

ACCEPTANCE: dict[int, tuple[str, str, str]] = {}


class Recorder:
    """Context manager that files one PASS/FAIL line per acceptance criterion."""

    def __init__(self, number: int, title: str):
        self.number, self.title, self.detail = number, title, ""

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        status = "PASS" if exc_type is None else "FAIL"
        detail = self.detail
        if exc is not None and not detail:
            detail = str(exc).splitlines()[0] if str(exc) else exc_type.__name__
        ACCEPTANCE[self.number] = (status, self.title, detail)
        print(f"\ncriterion {self.number:2d}: {status}  {self.title}  [{detail}]")
        return False


@pytest.fixture
def criterion():
    return Recorder


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        status, title, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {status}  {title}  [{detail}]")
