from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from operadix import catalogue as cat
from operadix.series import (
    SeriesError,
    TruncatedEGF,
    _add,
    _const,
    _exp,
    _log,
    _mul,
    combine_components,
    compare,
    compose_series,
    eval_closed_form,
    eval_expr,
    exponent_vectors,
    identity_series,
    series_from_dimensions,
)

from conftest import entry

N = 4
EXPS = [e for e in exponent_vectors(2, N, 1)]
coeffs = st.dictionaries(st.sampled_from(EXPS), st.fractions(-3, 3, max_denominator=4), max_size=5)


def egf(*comps):
    return TruncatedEGF(len(comps), N, list(comps))


def test_exp_of_variable():
    s = eval_expr("exp(t1)", 1, 5)
    assert all(s[(k,)] == Fraction(1, factorial(k)) for k in range(6))


def test_geometric():
    s = eval_expr("1/(1-t1-t2)", 2, 3)
    assert s[(1, 1)] == 2 and s[(2, 1)] == 3 and s[(0, 3)] == 1


def test_lie_series():
    s = eval_closed_form(["-log(1-t1)"], 1, 6)
    assert [s.dimension(0, (n,)) for n in range(1, 7)] == [factorial(n - 1) for n in range(1, 7)]


@pytest.mark.parametrize(
    "text",
    ["exp(", "t3", "t1 < 2", "t1**-1", "log(t1)", "1/t1", "f(t1)", "t1**t2"],
)
def test_bad_expressions(text):
    with pytest.raises(SeriesError):
        eval_expr(text, 2, 3)


def test_wrong_component_count():
    with pytest.raises(SeriesError):
        eval_closed_form(["t1"], 2, 3)


def test_inner_constant_rejected():
    one = egf({(0, 0): 1, (1, 0): 1}, {(0, 1): 1})
    with pytest.raises(SeriesError):
        compose_series(identity_series(2, N), one)


def test_missing_dimension():
    with pytest.raises(SeriesError):
        series_from_dimensions({}, 1, 2)


def test_dimension_roundtrip():
    table = {(e, c): (e[0] + 2 * e[1] + c) for e in EXPS for c in (0, 1)}
    s = series_from_dimensions(table, 2, N)
    assert all(s.dimension(c, e) == table[(e, c)] for e, c in table)


@given(coeffs)
def test_exp_log_inverse(a):
    d = 2
    assert _log(_exp(a, d, N), d, N) == {k: v for k, v in a.items() if v}
    one_plus = _add(_const(d), a)
    assert _exp(_log(one_plus, d, N), d, N) == {k: v for k, v in one_plus.items() if v}


@given(coeffs, coeffs)
def test_exp_is_a_morphism(a, b):
    d = 2
    assert _exp(_add(a, b), d, N) == _mul(_exp(a, d, N), _exp(b, d, N), N)


@given(coeffs, coeffs)
def test_identity_composition(a, b):
    F = egf(a, b)
    I = identity_series(2, N)
    assert compose_series(F, I) == F
    assert compose_series(I, F) == F


@settings(max_examples=30, deadline=None)
@given(coeffs, coeffs, coeffs, coeffs, coeffs, coeffs)
def test_composition_associative(a, b, c, d, e, f):
    F, G, H = egf(a, b), egf(c, d), egf(e, f)
    assert compose_series(compose_series(F, G), H) == compose_series(F, compose_series(G, H))


def test_truncate_and_compare():
    a = eval_closed_form(["exp(t1)-1"], 1, 5)
    b = eval_closed_form(["t1 + t1^2/2"], 1, 5)
    assert compare(a.truncate(2), b.truncate(2)) == []
    assert compare(a, b)[0][:2] == (0, (3,))


# closed forms of the catalogue against normal-form counts
@pytest.mark.parametrize("name", ["ICom", "AffHS", "DCom", "LieR"])
def test_closed_forms_match(name):
    e = entry(name)
    s = cat.entry_series(e, 5)
    assert compare(s, eval_closed_form(e.expected_series(), len(e.doc.colours), 5)) == []


def test_mlie_closed_form_discrepancy():
    e = entry("MLie")
    s = cat.entry_series(e, 5)
    diff = compare(s, eval_closed_form(e.expected_series(), 2, 5))
    # the stated M component has a spurious linear term in t2
    assert diff == [(0, (0, 1), 0, 1)]


def test_lp_closed_form_unevaluable():
    e = entry("LP")
    with pytest.raises(SeriesError):
        eval_closed_form(e.expected_series(), 2, 5)


@pytest.mark.parametrize("name", ["LP", "LieR", "DCom", "AffHS", "MLie"])
def test_decompositions(name):
    desc, fn = cat.decomposition(name)
    assert desc
    assert compare(cat.entry_series(entry(name), 5), fn(5)) == []


def test_combine_components():
    a = eval_closed_form(["t1", "t2"], 2, 3)
    b = eval_closed_form(["t1*t2", "t2^2"], 2, 3)
    c = combine_components([(a, 1), (b, 0)])
    assert c.components == [a.components[1], b.components[0]]
