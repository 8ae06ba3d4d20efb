import pytest

CRITERIA: dict[int, tuple[bool, str]] = {}
N_CRITERIA = 12


@pytest.fixture
def criterion():
    def record(n: int, ok: bool, detail: str = "") -> None:
        CRITERIA[n] = (bool(ok), detail)
        print(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
    return record


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in range(1, N_CRITERIA + 1):
        ok, detail = CRITERIA.get(n, (False, "not run or raised before reporting"))
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
