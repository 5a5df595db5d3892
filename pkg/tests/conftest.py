import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

#: (criterion number, title, status, detail) recorded by the acceptance tests
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n, title, status, detail in sorted(ACCEPTANCE):
        line = f"criterion {n:2d} {status:4s} {title}"
        if detail:
            line += f" -- {detail}"
        terminalreporter.write_line(line)
