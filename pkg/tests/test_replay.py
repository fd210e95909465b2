from dataclasses import replace

import pytest

from operadix import catalogue as cat
from operadix.dsl import DSLError, parse_poly, parse_presentation
from operadix.replay import RuleBook, pair_reductions, render_reductions, replay

from conftest import BUILTINS, entry

STORED = [(n, k) for n in BUILTINS for k in range(len(entry(n).traces))]


def test_trace_inventory():
    counts = {n: len(entry(n).traces) for n in BUILTINS}
    assert counts == {"ICom": 0, "AffHS": 0, "MLie": 1, "LP": 1, "DCom": 1, "LieR": 11, "DerCom": 5}


@pytest.mark.parametrize("name, k", STORED)
def test_stored_traces_replay(name, k):
    e = entry(name)
    r = replay(e.traces[k], e)
    assert r.ok, [s for s in r.steps if not s.ok]
    assert r.rules == [rule for rule, _ in e.traces[k].steps]


def test_lr_b_traces():
    e = entry("LieR")
    first, second = e.traces[0], e.traces[1]
    assert first.pair == second.pair == ("LR-B1", "LR-B2")
    a, b = replay(first, e), replay(second, e)
    assert a.ok and a.header_ok
    # the second printed reduction starts from a polynomial that is not an
    # S-polynomial of the pair it names
    assert b.ok and b.header_ok is False
    assert b.rules == ["LR-A3", "LR-A5", "Mor1", "Leib2"]


def test_tampered_step_fails():
    e = entry("DCom")
    t = e.traces[0]
    rule, p = t.steps[1]
    bad = parse_poly("alpha(e(1,4),alpha(2,3))", None)
    steps = list(t.steps)
    steps[1] = (rule, bad)
    r = replay(replace(t, steps=steps), e)
    assert not r.ok
    assert not r.steps[1].ok


def test_unknown_rule():
    e = entry("DCom")
    t = e.traces[0]
    steps = [("Nope", p) for _, p in t.steps]
    r = replay(replace(t, steps=steps), e)
    assert not r.ok and "unknown rule" in r.steps[0].detail


def test_trace_not_ending_in_zero():
    e = entry("DCom")
    t = e.traces[0]
    r = replay(replace(t, steps=t.steps[:-1]), e)
    assert all(s.ok for s in r.steps) and not r.ends_in_zero and not r.ok


def test_rulebook_families():
    book = RuleBook(entry("MLie"))
    assert len(book("MLieJ")) >= 1
    with pytest.raises(DSLError):
        book("missing")


@pytest.mark.parametrize("name, left, right", [("MLie", "MLieJ", "MLieM"), ("LieR", "LR-B1", "LR-B2"), ("DCom", "DComAs", "DComLeib")])
def test_generated_traces_replay(name, left, right):
    e = entry(name)
    reds = pair_reductions(e, left, right)
    assert reds
    text = render_reductions(e, reds, e.display)
    doc = parse_presentation(cat.read_resource(cat.FILES[name]) + text + "\n")
    fresh = doc.traces[len(entry(name).doc.traces) :]
    assert len(fresh) == len(reds)
    for t in fresh:
        r = replay(t, e)
        assert r.ok and r.header_ok


def test_pair_reductions_unknown_label():
    with pytest.raises(DSLError):
        pair_reductions(entry("LieR"), "LR-B1", "Nope")


def test_generated_trace_is_deterministic():
    e = entry("LieR")
    a = render_reductions(e, pair_reductions(e, "Com1", "Com2"))
    b = render_reductions(e, pair_reductions(e, "Com1", "Com2"))
    assert a == b and a.startswith("trace Com1,Com2 @ ")
