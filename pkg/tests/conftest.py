"""Collects the one-line verdicts of the acceptance criteria and prints them
after the run, whatever the capture mode."""

ACCEPTANCE_LINES: dict = {}


def record(key, ok: bool, text: str) -> str:
    line = f"criterion {key}: {'PASS' if ok else 'FAIL'}  {text}"
    ACCEPTANCE_LINES[str(key)] = line
    print(line)
    return line


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES, key=lambda k: (int(k.split(".")[0]), k)):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
