"""Shared acceptance bookkeeping: one PASS/FAIL line per criterion, echoed in
the terminal summary."""

CRITERION_LINES: list[str] = []


def record_criterion(name: str, ok: bool, detail: str) -> str:
    line = f"{name} {'PASS' if ok else 'FAIL'}: {detail}"
    CRITERION_LINES.append(line)
    print(line)
    return line


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not CRITERION_LINES:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for line in CRITERION_LINES:
        terminalreporter.write_line(line)
