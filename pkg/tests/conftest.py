import pytest

# criterion number -> (title, passed, detail); filled by test_acceptance.py
ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}


@pytest.fixture
def criterion():
    def record(number: int, title: str, failures: list[str]):
        ACCEPTANCE[number] = (title, not failures, "; ".join(failures[:5]))
        line = f"criterion {number} {'PASS' if not failures else 'FAIL'}: {title}"
        print(line + (f" ({ACCEPTANCE[number][2]})" if failures else ""))
        assert not failures, "\n".join(failures)

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[number]
        line = f"criterion {number} {'PASS' if ok else 'FAIL'}: {title}"
        if not ok:
            line += f" ({detail})"
        terminalreporter.write_line(line)
