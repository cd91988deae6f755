import os

import pytest


@pytest.fixture(scope="session", autouse=True)
def _isolated_cache(tmp_path_factory):
    d = tmp_path_factory.mktemp("coeff-cache")
    old = os.environ.get("SYLVESTER_CACHE_DIR")
    os.environ["SYLVESTER_CACHE_DIR"] = str(d)
    yield d
    if old is None:
        os.environ.pop("SYLVESTER_CACHE_DIR", None)
    else:
        os.environ["SYLVESTER_CACHE_DIR"] = old


ADMISSIBLE = [2, 5, 11, 23, 29]


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
