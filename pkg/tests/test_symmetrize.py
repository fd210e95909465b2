import itertools
from collections import defaultdict
from math import comb

import pytest

from operadix.linalg import rank
from operadix.polynomials import format_poly
from operadix.symmetrize import (
    ANTISYMMETRIC,
    PresentationError,
    SymGenerator,
    _scalar_key,
    apply_permutation,
    arity_of,
    expand_generators,
    expand_relations,
    orbit,
)
from operadix.trees import enumerate_monomials, leaf_colours

from conftest import BUILTINS, entry, groebner

ICOM = entry("ICom").symmetric


def icmult2():
    return next(r for r in ICOM.relations if r.label == "ICMult2")


def test_icom_generators():
    gens, prov = expand_generators(ICOM)
    assert [g.name for g in gens] == ["alpha", "i", "r", "l"]
    assert prov["l"].source == "r" and prov["l"].slots == (1, 0)
    assert gens[3].inputs == (0, 1)


def test_antisymmetric_not_doubled():
    gens, _ = expand_generators(entry("MLie").symmetric)
    assert sum(g.name == "beta" for g in gens) == 1
    sp = entry("MLie").symmetric
    rel = type(sp.relations[0])("t", ((1, ("beta", (2, 1))),))
    assert format_poly(apply_permutation(rel, (1, 2), sp)) == "-beta(1,2)"


def test_symmetry_needs_equal_colours():
    with pytest.raises(PresentationError):
        SymGenerator("x", (0, 1), 0, ANTISYMMETRIC)


# the worked example: r(r(1,3),2) - r(1,alpha(2,3)) under each permutation
# (a tuple lists the images of 1, 2, 3)
PERMUTED = {
    (1, 2, 3): "-r(1,alpha(2,3)) + r(r(1,3),2)",
    (2, 1, 3): "l(1,r(2,3)) - l(alpha(1,3),2)",
    (1, 3, 2): "-r(1,alpha(2,3)) + r(r(1,2),3)",
    (3, 2, 1): "-l(alpha(1,2),3) + r(l(1,3),2)",
    (2, 3, 1): "-l(alpha(1,3),2) + r(l(1,2),3)",
    (3, 1, 2): "l(1,l(2,3)) - l(alpha(1,2),3)",
}


@pytest.mark.parametrize("perm", list(PERMUTED))
def test_worked_example(perm):
    assert format_poly(apply_permutation(icmult2(), perm, ICOM)) == PERMUTED[perm]


def test_icom_com_orbit_leading_terms():
    order = entry("ICom").ordering
    rels = [r for r in ICOM.relations if r.label.startswith("ICCom")]
    lts = set()
    from operadix.symmetrize import relation_basis

    polys = [(r.label, p) for r in rels for p in orbit(r, ICOM)]
    for _, p in relation_basis(polys, order):
        lts.add(str(p.lt(order)))
    assert lts == {"alpha(alpha(1,2),3)", "alpha(alpha(1,3),2)"}


def test_lier_orbits_match_appendix():
    e = entry("LieR")
    ex = expand_relations(e.symmetric)
    assert len(e.symmetric.relations) == 7
    fixtures = e.fixture_relations()
    assert len(fixtures) == 30
    keys = {_scalar_key(p) for _, p in ex}
    fkeys = {_scalar_key(p) for p in fixtures.values()}
    # three appendix relations repeat others up to sign
    assert len(fkeys) == 27
    assert fkeys <= keys
    by_sig = defaultdict(lambda: ([], []))
    for _, p in ex:
        by_sig[p.sig][0].append(p)
    for p in fixtures.values():
        by_sig[p.sig][1].append(p)
    for a, b in by_sig.values():
        ms = sorted({t for p in a + b for t in p.terms}, key=str)
        mat = lambda ps: [[p.coefficient(t) for t in ms] for p in ps]
        assert rank(mat(a)) == rank(mat(b)) == rank(mat(a + b))


def test_invariant_relation_has_small_orbit():
    com = next(r for r in ICOM.relations if r.label == "ICCom1")
    assert len(orbit(com, ICOM)) == 3


@pytest.mark.parametrize("name", ["ICom", "LieR", "MLie"])
def test_orbit_closure(name):
    sp = entry(name).symmetric
    for rel in sp.relations:
        n = arity_of(rel)
        members = orbit(rel, sp)
        keys = {_scalar_key(p) for p in members}
        for p in members:
            assert p.sig is not None
        # acting again on the relation text by composite permutations stays inside
        for sigma in itertools.permutations(range(1, n + 1)):
            p = apply_permutation(rel, sigma, sp)
            assert not p or _scalar_key(p) in keys


@pytest.mark.parametrize("name", BUILTINS)
def test_expanded_relations_reduce_to_zero(name):
    e = entry(name)
    if e.doc.shuffle:
        pytest.skip("given in shuffle form")
    red = groebner(name).reducer()
    for label, p in expand_relations(e.symmetric):
        assert not red.normal_form(p)[0], label


@pytest.mark.parametrize("name", ["ICom", "LieR"])
def test_colourings_multinomial(name):
    gens = list(entry(name).shuffle_generators())
    ncol = len(entry(name).doc.colours)
    for n in (2, 3):
        seen = defaultdict(set)
        for out in range(ncol):
            for t in enumerate_monomials(gens, n, output=out, max_degree=n - 1):
                cols = tuple(leaf_colours(t)[k] for k in range(1, n + 1))
                seen[tuple(cols.count(c) for c in range(ncol))].add(cols)
        for w, cs in seen.items():
            expected = 1
            left = n
            for m in w:
                expected *= comb(left, m)
                left -= m
            assert len(cs) == expected, (w, cs)
