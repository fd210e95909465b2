"""Replaying printed reductions and producing reduction traces.

A printed step ``P ={L}=> P'`` is accepted when P - P' is a linear
combination of substitutions of relation L (any orbit member when L names
a symmetric relation) into contexts visible in the step: every embedding of
a term of L into a monomial of P or P'.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .dsl import DSLError, TraceAST, format_term, poly_from_ast, tree_from_node
from .linalg import solve_in_span
from .polynomials import Poly, Reducer, apply_embedding, format_poly, s_polynomial
from .symmetrize import _scalar_key, expand_relations
from .trees import find_divisors, small_common_multiples


@dataclass
class StepCheck:
    rule: str
    ok: bool
    detail: str = ""


@dataclass
class ReplayResult:
    pair: tuple[str, str]
    steps: list = field(default_factory=list)
    start_matches: bool | None = None
    ends_in_zero: bool = False

    @property
    def ok(self):
        """Every printed step is justified and the last line is 0."""
        return self.ends_in_zero and all(s.ok for s in self.steps)

    @property
    def header_ok(self):
        """The first line is an S-polynomial of the named pair over the named
        common multiple (None when no multiple is printed)."""
        return self.start_matches

    @property
    def rules(self):
        return [s.rule for s in self.steps]


class RuleBook:
    """Resolves rule labels of an entry: fixture labels, shuffle basis
    labels, orbit labels ``X.k`` and symmetric family names ``X``."""

    def __init__(self, entry):
        self.entry = entry
        self.gens = {g.name: g for g in entry.shuffle_generators()}
        self.table: dict[str, list[Poly]] = {}
        for lab, p in entry.fixture_relations().items():
            self.table.setdefault(lab, []).append(p)
        if not entry.doc.shuffle:
            for lab, p in expand_relations(entry.symmetric):
                self.table.setdefault(lab, []).append(p)
                self.table.setdefault(lab.rsplit(".", 1)[0], []).append(p)
        for lab, p in entry.shuffle().relations:
            self.table.setdefault(lab, []).append(p)

    def __call__(self, label) -> list[Poly]:
        try:
            return _dedup(self.table[label])
        except KeyError:
            raise DSLError(f"unknown rule {label!r}") from None


def _dedup(polys):
    seen, out = set(), []
    for p in polys:
        k = _scalar_key(p)
        if k not in seen:
            seen.add(k)
            out.append(p)
    return out


def step_in_span(before: Poly, after: Poly, rules) -> bool:
    diff = before.axpy(-1, after)
    if not diff:
        return True
    hosts = set(before.terms) | set(after.terms)
    vectors = []
    for g in rules:
        for host in hosts:
            for pattern in g.terms:
                if pattern.degree > host.degree or pattern.arity > host.arity:
                    continue
                for e in find_divisors(host, pattern):
                    vectors.append(apply_embedding(e, g).terms)
    if not vectors:
        return False
    index = {}
    for v in vectors + [diff.terms]:
        for t in v:
            index.setdefault(t, len(index))
    rows = [{index[t]: c for t, c in v.items()} for v in vectors]
    return solve_in_span(rows, {index[t]: c for t, c in diff.terms.items()}) is not None


def replay(trace: TraceAST, entry, book: RuleBook | None = None) -> ReplayResult:
    book = book or RuleBook(entry)
    order = entry.ordering
    polys = [poly_from_ast(trace.start, book.gens)] + [poly_from_ast(p, book.gens) for _, p in trace.steps]
    res = ReplayResult(trace.pair)
    for (rule, _), before, after in zip(trace.steps, polys, polys[1:]):
        try:
            rules = book(rule)
        except DSLError as e:
            res.steps.append(StepCheck(rule, False, str(e)))
            continue
        ok = step_in_span(before, after, rules)
        res.steps.append(StepCheck(rule, ok, "" if ok else "difference is not a combination of this rule"))
    res.ends_in_zero = not polys[-1]
    if trace.scm is not None:
        scm = tree_from_node(trace.scm, book.gens)
        res.start_matches = matches_s_polynomial(polys[0], scm, book(trace.pair[0]), book(trace.pair[1]), order)
    return res


def matches_s_polynomial(start: Poly, gamma, left, right, order) -> bool:
    """Whether start is a nonzero multiple of an S-polynomial over gamma of
    some member of ``left`` and some member of ``right``."""
    key = _scalar_key(start) if start else None
    for f in left:
        for g in right:
            for a, b in ((f, g), (g, f)):
                for scm in small_common_multiples(a.lt(order), b.lt(order)):
                    if scm[0] != gamma:
                        continue
                    s = s_polynomial(a, b, scm, order)
                    if s and key is not None and _scalar_key(s) == key:
                        return True
    return False


def _members(rules, label):
    exact = [(lab, p) for lab, p in rules if lab == label]
    return exact or [(lab, p) for lab, p in rules if lab.rsplit(".", 1)[0] == label]


def pair_reductions(entry, left: str, right: str, basis=None):
    """Every S-polynomial between basis elements labelled ``left`` and
    ``right`` (a family name selects all its orbit members), with its
    reduction: list of (left label, right label, gamma, spoly, Trace)."""
    sp = entry.shuffle()
    order = sp.ordering
    rules = basis if basis is not None else sp.relations
    fs, gs = _members(rules, left), _members(rules, right)
    for lab, found in ((left, fs), (right, gs)):
        if not found:
            raise DSLError(f"no relation labelled {lab!r} in the shuffle basis")
    reducer = Reducer(rules, order)
    out = []
    done = set()
    for lf, f in fs:
        for lg, g in gs:
            if (lg, lf) in done:
                continue
            done.add((lf, lg))
            f1, g1 = f.monic(order), g.monic(order)
            for scm in small_common_multiples(f1.lt(order), g1.lt(order)):
                s = s_polynomial(f1, g1, scm, order)
                _, tr = reducer.normal_form(s, trace=True)
                out.append((lf, lg, scm[0], s, tr))
    return out


def render_reductions(entry, reductions, display=None) -> str:
    """DSL ``trace`` blocks, one per common multiple; the output parses back
    with :func:`parse_presentation` and replays with :func:`replay`."""
    order = entry.ordering
    fmt = (lambda t: format_term(t, display)) if display else str
    blocks = []
    for lf, lg, gamma, s, tr in reductions:
        lines = [f"trace {lf},{lg} @ {fmt(gamma)} {{", f"  {format_poly(s, order, fmt)}"]
        for step in tr.steps:
            lines.append(f"  ={{{step.rule}}}=> {format_poly(step.result, order, fmt)}")
        lines.append("}")
        blocks.append("\n".join(lines))
    return "\n".join(blocks)
