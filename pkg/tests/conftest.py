def pytest_report_teststatus(report, config):
    """Show one PASS/FAIL line per acceptance criterion in the terminal report."""
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return None
    from test_acceptance import CRITERIA

    label = CRITERIA.get(report.nodeid.split("::")[-1])
    if label is None:
        return None
    if report.passed:
        return "passed", ".", f"PASS {label}"
    if report.failed:
        return "failed", "F", f"FAIL {label}"
    return None
