import sys


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    notes = dict(acceptance.NOTES)
    for criterion, ok, detail in sorted(acceptance.RESULTS, key=lambda r: r[0]):
        terminalreporter.write_line(f"criterion {criterion}: {'PASS' if ok else 'FAIL'} - {detail}")
        if criterion in notes:
            terminalreporter.write_line(f"    note: {notes[criterion]}")
