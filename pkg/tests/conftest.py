import sys
from functools import lru_cache

import pytest

from operadix import catalogue as cat
from operadix.completion import buchberger


@lru_cache(maxsize=None)
def entry(name):
    return cat.builtin(name)


@lru_cache(maxsize=None)
def groebner(name):
    sp = entry(name).shuffle()
    return buchberger(sp.relations, sp.ordering)


def gens_of(name):
    return {g.name: g for g in entry(name).shuffle_generators()}


BUILTINS = tuple(cat.names())


@pytest.fixture(params=BUILTINS)
def builtin_name(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
