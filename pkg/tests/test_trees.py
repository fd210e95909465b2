import pytest
from hypothesis import assume, given, settings, strategies as st

from operadix.trees import (
    ColourMismatch,
    Generator,
    InvalidShuffle,
    Leaf,
    ResourceLimit,
    TreeError,
    Vertex,
    check_tree,
    colour_mixing_monomials,
    corolla,
    divides,
    enumerate_monomials,
    find_divisors,
    graft,
    is_valid,
    shuffle_grafts,
    small_common_multiples,
    substitute,
    subtree_monomial,
)

from conftest import entry

ALPHA = Generator("alpha", (0, 0), 0)
A = Generator("a", (0, 0), 0)
B = Generator("b", (0, 0), 0)
U = Generator("u", (0,), 0)
POOL = {n: enumerate_monomials([A, B], n) for n in range(1, 4)}
POOL6 = {n: enumerate_monomials([A, U], n, max_degree=3) for n in range(1, 4)}


def strs(ts):
    return sorted(map(str, ts))


def test_three_monomials_of_one_binary_generator():
    assert strs(enumerate_monomials([ALPHA], 3)) == ["alpha(1,alpha(2,3))", "alpha(alpha(1,2),3)", "alpha(alpha(1,3),2)"]


def test_arity_one_is_identity():
    assert enumerate_monomials([ALPHA], 1, output=0) == [Leaf(1, 0)]


def test_icom_corollas_with_output_I():
    gens = list(entry("ICom").shuffle_generators())
    ms = enumerate_monomials(gens, 2, output=1, max_degree=1)
    assert strs(ms) == ["l(1,2)", "r(1,2)"]


def test_counts_of_free_binary_operad():
    # shuffle trees with one binary generator: (2n-3)!!
    assert [len(enumerate_monomials([ALPHA], n)) for n in range(1, 6)] == [1, 1, 3, 15, 105]


def test_enumeration_is_sorted_and_valid():
    ms = enumerate_monomials([A, B], 4)
    assert [str(t) for t in ms] == sorted(str(t) for t in ms)
    assert len(set(ms)) == len(ms)
    assert all(is_valid(t) for t in ms)


def test_cap_raises_resource_limit():
    with pytest.raises(ResourceLimit):
        enumerate_monomials([A, B], 5, cap=10)


def test_graft_colour_mismatch():
    gens = {g.name: g for g in entry("ICom").shuffle_generators()}
    with pytest.raises(ColourMismatch):
        graft(corolla(gens["alpha"]), 1, corolla(gens["r"]))


def test_shuffle_grafts_count():
    # grafting a binary corolla into leaf 1 of a binary corolla: 2 shuffles
    assert strs(shuffle_grafts(corolla(ALPHA), 1, corolla(ALPHA))) == ["alpha(alpha(1,2),3)", "alpha(alpha(1,3),2)"]
    assert strs(shuffle_grafts(corolla(ALPHA), 2, corolla(ALPHA))) == ["alpha(1,alpha(2,3))"]


def test_invalid_trees_rejected():
    with pytest.raises(TreeError):
        check_tree(Vertex(ALPHA, [Leaf(1, 0), Leaf(1, 0)]))
    with pytest.raises(InvalidShuffle):
        check_tree(Vertex(ALPHA, [Leaf(2, 0), Leaf(1, 0)]))


def test_colour_mixing_icom():
    gens = list(entry("ICom").shuffle_generators())
    B = strs(colour_mixing_monomials(gens))
    assert "alpha(r(1,2),3)" in B
    # r : (I,A) -> I, so alpha's output only fits r's second slot
    assert "r(alpha(1,2),3)" in B
    assert "r(1,alpha(2,3))" not in B
    assert colour_mixing_monomials([ALPHA]) == []


trees = st.integers(1, 3).flatmap(lambda n: st.sampled_from(POOL[n]))
mixed = st.integers(1, 3).flatmap(lambda n: st.sampled_from(POOL6[n]))


def _graft_or_skip(*args):
    try:
        return graft(*args)
    except InvalidShuffle:
        assume(False)


@given(trees, trees, trees, st.data())
def test_sequential_composition(lam, mu, nu, data):
    t = data.draw(st.integers(1, lam.arity))
    r = data.draw(st.integers(1, mu.arity))
    left = _graft_or_skip(_graft_or_skip(lam, t, mu), t - 1 + r, nu)
    right = _graft_or_skip(lam, t, _graft_or_skip(mu, r, nu))
    assert left == right


@given(trees, trees, trees, st.data())
def test_parallel_composition(lam, mu, nu, data):
    assume(lam.arity >= 2)
    r = data.draw(st.integers(1, lam.arity - 1))
    s = data.draw(st.integers(r + 1, lam.arity))
    m = mu.arity
    one = _graft_or_skip(_graft_or_skip(lam, s, nu), r, mu)
    two = _graft_or_skip(_graft_or_skip(lam, r, mu), s + m - 1, nu)
    assert one == two


@given(mixed, st.data())
def test_identity_axiom(lam, data):
    k = data.draw(st.integers(1, lam.arity))
    assert graft(lam, k, Leaf(1, 0)) == lam
    assert graft(Leaf(1, 0), 1, lam) == lam


@given(trees, trees, st.data())
def test_shuffle_grafts_are_valid_and_distinct(f, g, data):
    k = data.draw(st.integers(1, f.arity))
    out = shuffle_grafts(f, k, g)
    assert len(set(out)) == len(out)
    assert all(is_valid(t) for t in out)
    assert all(t.arity == f.arity + g.arity - 1 for t in out)


HOSTS = enumerate_monomials([A, B], 5)
PATTERNS = [t for n in (2, 3) for t in POOL[n]]


@settings(max_examples=60)
@given(st.sampled_from(HOSTS), st.sampled_from(PATTERNS))
def test_divisor_substitute_roundtrip(host, pattern):
    for e in find_divisors(host, pattern):
        assert substitute(e, subtree_monomial(e)) == host
        assert subtree_monomial(e) == pattern
    assert divides(pattern, host) == bool(find_divisors(host, pattern))


@settings(max_examples=40)
@given(st.sampled_from(PATTERNS), st.sampled_from(PATTERNS))
def test_scm_symmetry(a, b):
    ab = {g for g, _, _ in small_common_multiples(a, b)}
    ba = {g for g, _, _ in small_common_multiples(b, a)}
    assert ab == ba
    for gamma, ea, eb in small_common_multiples(a, b):
        assert divides(a, gamma) and divides(b, gamma)
        assert ea.host_vertices & eb.host_vertices
        assert gamma.degree <= a.degree + b.degree - 1


def test_scm_count_for_com_left_comb():
    t = enumerate_monomials([ALPHA], 3)[1]  # alpha(alpha(1,2),3)
    gammas = {str(g) for g, _, _ in small_common_multiples(t, t)}
    assert gammas and all(g.count("alpha") == 3 for g in gammas)
