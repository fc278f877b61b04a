import pytest

from qpack.redq import TABLE_CACHE_ENV, clear_table_memo


@pytest.fixture(autouse=True)
def _fresh_table_memo(monkeypatch):
    monkeypatch.delenv(TABLE_CACHE_ENV, raising=False)
    yield
    clear_table_memo()


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS, format_result

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n, ok, detail in sorted(RESULTS):
            terminalreporter.write_line(format_result(n, ok, detail))
