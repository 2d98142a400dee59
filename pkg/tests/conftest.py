import generators


def pytest_terminal_summary(terminalreporter):
    if generators.ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in generators.ACCEPTANCE:
            terminalreporter.write_line(line)
