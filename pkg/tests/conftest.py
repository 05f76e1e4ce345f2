import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from acceptance_log import RESULTS  # noqa: E402


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        ok, seconds, limit, detail = RESULTS[number]
        tail = f" ({detail})" if detail else ""
        terminalreporter.write_line(
            f"criterion {number}: {'PASS' if ok else 'FAIL'} {seconds:.2f}s / {limit:g}s{tail}"
        )
