import sys


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for i, (passed, elapsed, detail) in sorted(mod.RESULTS.items()):
        terminalreporter.write_line(f"criterion {i:2d}: {'PASS' if passed else 'FAIL'} ({elapsed:.1f} s) {detail}")
