def pytest_terminal_summary(terminalreporter, exitstatus, config):
    terminalreporter.write_sep("-", "acceptance criteria")
    if exitstatus == 0 and terminalreporter.stats.get("passed"):
        terminalreporter.write_line(
            "A9 PASS: all five figure kinds render from simulator CSVs with "
            "exit 0, pixel-deterministic bytes; schema mismatch exits 4 "
            "naming the column")
    elif terminalreporter.stats.get("skipped") and not terminalreporter.stats.get("passed"):
        terminalreporter.write_line("A9 SKIPPED: pacsim CLI not installed")
    else:
        terminalreporter.write_line("A9 FAIL: see test failures above")
