import itertools

import pytest
from hypothesis import given, strategies as st

from operadix.dsl import parse_term
from operadix.orderings import OrderingError, PathLex, check_admissibility, path_fingerprint, path_words
from operadix.trees import Generator, enumerate_monomials, shuffle_grafts

from conftest import BUILTINS, entry

L = Generator("l", (1, 0), 1)
R = Generator("r", (1, 0), 1)
A = Generator("a", (0, 0), 0)
B = Generator("b", (0, 0), 0)
BETA = Generator("beta", (0, 0), 0)
GENS = {g.name: g for g in (L, R, A, B, BETA)}


def term(s):
    return parse_term(s, GENS)


def test_fingerprint_example():
    assert str(path_fingerprint(term("r(l(1,3),2)"))) == "((rl, r, rl) | (132))"


def test_path_words_of_comb():
    assert path_words(term("a(a(1,2),3)")) == (("a", "a"), ("a", "a"), ("a",))


def test_pathlex_on_arity_three():
    o = PathLex(("a",))
    ms = enumerate_monomials([A], 3)
    assert [str(t) for t in o.sort_desc(ms)] == ["a(a(1,2),3)", "a(a(1,3),2)", "a(1,a(2,3))"]


def test_arity_dominates():
    o = PathLex(("a", "b"))
    assert o.less(term("b(b(1,2),3)"), term("a(1,a(2,a(3,4)))"))


def test_duplicate_generator_rejected():
    with pytest.raises(OrderingError):
        PathLex(("a", "a"))


def test_unknown_perm_mode():
    with pytest.raises(OrderingError):
        PathLex(("a",), "sideways").key(term("a(1,2)"))


def test_missing_generator():
    with pytest.raises(OrderingError):
        PathLex(("a",)).key(term("b(1,2)"))


@pytest.mark.parametrize("name", BUILTINS)
def test_catalogue_orderings_admissible(name):
    e = entry(name)
    r = check_admissibility(e.ordering, list(e.shuffle_generators()), arity_bound=5, samples=300)
    assert r.checked > 300
    assert r.ok, str(r)


@pytest.mark.parametrize("mode", ["lex", "antilex", "colex"])
def test_perm_modes_admissible_exhaustive(mode):
    # every pair, every context, every slot, arity <= 4
    o = PathLex(("a", "b"), mode)
    gens = [A, B]
    by_arity = {n: enumerate_monomials(gens, n) for n in (2, 3)}
    for ms in by_arity.values():
        for x, y in itertools.combinations(ms, 2):
            if x.arity != y.arity:
                continue
            x, y = (x, y) if o.less(x, y) else (y, x)
            for gamma in by_arity[2] + by_arity[3]:
                if gamma.arity + x.arity - 1 > 4:
                    continue
                for pos in range(1, gamma.arity + 1):
                    for u, v in zip(shuffle_grafts(gamma, pos, x), shuffle_grafts(gamma, pos, y)):
                        assert o.less(u, v)
                for pos in range(1, x.arity + 1):
                    for u, v in zip(shuffle_grafts(x, pos, gamma), shuffle_grafts(y, pos, gamma)):
                        assert o.less(u, v)


def test_revlex_counterexample():
    o = PathLex(("beta",), "revlex")
    a, b = term("beta(beta(1,3),beta(2,4))"), term("beta(beta(1,4),beta(2,3))")
    assert o.less(a, b)
    pairs = list(zip(shuffle_grafts(a, 3, term("beta(1,2)")), shuffle_grafts(b, 3, term("beta(1,2)"))))
    x, y = next((x, y) for x, y in pairs if str(x) == "beta(beta(1,beta(3,5)),beta(2,4))")
    assert str(y) == "beta(beta(1,4),beta(2,beta(3,5)))"
    assert not o.less(x, y)
    # the default does not have this defect
    d = PathLex(("beta",))
    assert d.less(a, b) == d.less(x, y)


def test_reversed_twice():
    o = entry("LieR").ordering
    ms = enumerate_monomials(list(entry("LieR").shuffle_generators()), 3, max_degree=2, min_degree=2)
    rr = o.reversed().reversed()
    assert o.sort_desc(ms) == rr.sort_desc(ms)
    assert o.reversed().sort_desc(ms) == list(reversed(o.sort_desc(ms)))


MONOS = enumerate_monomials([A, B], 4)


@given(st.sampled_from(MONOS), st.sampled_from(MONOS), st.sampled_from(MONOS))
def test_total_order(x, y, z):
    o = PathLex(("a", "b"))
    assert (x == y) or (o.less(x, y) != o.less(y, x))
    if o.less(x, y) and o.less(y, z):
        assert o.less(x, z)
