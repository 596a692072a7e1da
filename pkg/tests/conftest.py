def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Echo the acceptance pass/fail lines after the run, outside capture."""
    try:
        import test_acceptance
    except ImportError:
        return
    if getattr(test_acceptance, "RESULTS", None):
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
