import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

# (criterion number, description, passed, seconds, limit) filled by test_acceptance
ACCEPTANCE: list[tuple[int, str, bool, float, float]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num, desc, ok, secs, limit in sorted(ACCEPTANCE):
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {num:2d}: {desc} ({secs:.2f}s, limit {limit:g}s)")
