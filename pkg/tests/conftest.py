import pathlib

import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

DATA = pathlib.Path(__file__).parent / "data"

# filled in by test_acceptance; printed once at the end of the session
ACCEPTANCE = {}


@pytest.fixture
def data_dir():
    return DATA


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        verdict, seconds, limit, note = ACCEPTANCE[key]
        terminalreporter.write_line(
            f"criterion {key:>2}: {verdict:4} {seconds:7.2f}s (limit {limit}s)  {note}")
