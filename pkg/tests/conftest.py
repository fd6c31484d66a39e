import re

_acceptance = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: package exit criteria")


def pytest_runtest_logreport(report):
    if "test_acceptance.py::" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _acceptance[report.nodeid] = (report.outcome, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, (outcome, duration) in _acceptance.items():
        name = nodeid.split("::")[-1]
        m = re.match(r"test_criterion_(\d+)_(.*)", name)
        label = f"criterion {m.group(1)}: {m.group(2).replace('_', ' ')}" if m else name
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{verdict}  {label}  ({duration:.3f} s)")
