import os
import sys

from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


# one summary line per acceptance criterion, whatever the capture mode
_acceptance: dict = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_c" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.failed):
        _acceptance[report.nodeid] = report


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    import acceptance_log

    tr = terminalreporter
    tr.section("acceptance criteria")
    for nodeid in sorted(_acceptance):
        name = nodeid.split("::")[-1]
        num = int(name[len("test_c") :].split("_")[0])
        title, detail = acceptance_log.RESULTS.get(num, (name, ""))
        status = "PASS" if _acceptance[nodeid].passed else "FAIL"
        tr.write_line(f"C{num:<2} {status}  {title}: {detail}")
