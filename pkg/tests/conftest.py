import time

RESULTS = []
START = time.time()


def pytest_collection_modifyitems(session, config, items):
    # acceptance runs last so the final criterion can time the whole suite
    items.sort(key=lambda it: it.nodeid.startswith("tests/test_acceptance.py")
               or "test_acceptance.py" in it.nodeid)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in RESULTS:
        terminalreporter.write_line(line)
    terminalreporter.write_line(f"suite wall time {time.time() - START:.1f}s")
