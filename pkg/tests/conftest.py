from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]),
)
settings.register_profile("thorough", settings(max_examples=400, deadline=None))
settings.load_profile("default")


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
