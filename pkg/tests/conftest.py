import pytest

from refclass import corpus
from refclass.closure import compute_closures
from refclass.parser import parse_kb


@pytest.fixture(scope="session")
def load():
    cache = {}

    def _load(name):
        if name not in cache:
            kb = parse_kb(corpus.get(name).text())
            cache[name] = (kb, compute_closures(kb))
        return cache[name]

    return _load


def pytest_terminal_summary(terminalreporter):
    from tests import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(test_acceptance.RESULTS, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
