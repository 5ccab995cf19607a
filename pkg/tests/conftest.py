import os

import pytest


@pytest.fixture(scope="session", autouse=True)
def _cache_dir(tmp_path_factory):
    # keep irreducible tables out of the working tree; one build per session
    if "FFM_CACHE" not in os.environ:
        os.environ["FFM_CACHE"] = str(tmp_path_factory.mktemp("ffm_cache"))
    yield


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
