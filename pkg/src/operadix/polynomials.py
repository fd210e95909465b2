"""Linear combinations of tree monomials with rational coefficients.

Polynomials are homogeneous: every monomial shares arity, input colouring
and output colour.  Reductions always use the earliest embedding (in host
preorder) of a divisor, so traces are reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .orderings import Ordering
from .trees import (
    Embedding,
    Tree,
    at as subtree_at,
    embedding_at,
    find_divisors,
    signature,
    small_common_multiples,
    substitute,
    vertex_paths,
)


class PolynomialError(ValueError):
    pass


class Poly:
    __slots__ = ("terms", "sig")

    def __init__(self, terms: Mapping[Tree, Fraction] | Iterable[tuple[Tree, object]] = (), sig=None):
        acc: dict[Tree, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for t, c in items:
            c = Fraction(c)
            if not c:
                continue
            if sig is None:
                sig = signature(t)
            elif signature(t) != sig:
                raise PolynomialError(f"{t} does not have signature {sig}")
            v = acc.get(t, 0) + c
            if v:
                acc[t] = v
            else:
                acc.pop(t, None)
        self.terms = acc
        self.sig = sig

    @classmethod
    def monomial(cls, t: Tree, c=1) -> "Poly":
        return cls({t: c})

    @classmethod
    def _raw(cls, terms, sig):
        p = cls.__new__(cls)
        p.terms = terms
        p.sig = sig
        return p

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def _check(self, other):
        if self.sig is not None and other.sig is not None and self.sig != other.sig and self and other:
            raise PolynomialError(f"signature mismatch {self.sig} vs {other.sig}")

    def __add__(self, other):
        return self.axpy(1, other)

    def __sub__(self, other):
        return self.axpy(-1, other)

    def __neg__(self):
        return self.scale(-1)

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def scale(self, c) -> "Poly":
        c = Fraction(c)
        if not c:
            return Poly._raw({}, self.sig)
        return Poly._raw({t: v * c for t, v in self.terms.items()}, self.sig)

    def axpy(self, c, other: "Poly") -> "Poly":
        """self + c * other."""
        self._check(other)
        c = Fraction(c)
        out = dict(self.terms)
        if c:
            for t, v in other.terms.items():
                w = out.get(t, 0) + c * v
                if w:
                    out[t] = w
                else:
                    del out[t]
        return Poly._raw(out, self.sig if self.sig is not None else other.sig)

    def coefficient(self, t: Tree) -> Fraction:
        return self.terms.get(t, Fraction(0))

    def monomials(self):
        return list(self.terms)

    def leading(self, order: Ordering) -> tuple[Tree, Fraction]:
        if not self.terms:
            raise PolynomialError("the zero polynomial has no leading term")
        t = order.max(self.terms)
        return t, self.terms[t]

    def lt(self, order: Ordering) -> Tree:
        return self.leading(order)[0]

    def monic(self, order: Ordering) -> "Poly":
        _, c = self.leading(order)
        return self.scale(1 / c)

    def sorted_terms(self, order: Ordering):
        return [(t, self.terms[t]) for t in order.sort_desc(self.terms)]

    @property
    def degree(self):
        degs = {t.degree for t in self.terms}
        return max(degs) if degs else 0

    def __repr__(self):
        return f"Poly({format_poly(self) if self.terms else '0'})"


def _coeff_text(c: Fraction) -> str:
    a = abs(c)
    if a == 1:
        return ""
    return f"{a.numerator}" if a.denominator == 1 else f"{a.numerator}/{a.denominator}"


def format_poly(f: Poly, order: Ordering | None = None, fmt=str) -> str:
    """Terms descending under ``order`` (or by text when None), signs folded
    into the separators, unit coefficients omitted."""
    if not f.terms:
        return "0"
    items = f.sorted_terms(order) if order is not None else sorted(f.terms.items(), key=lambda kv: str(kv[0]))
    parts = []
    for k, (t, c) in enumerate(items):
        body = fmt(t)
        ct = _coeff_text(c)
        if ct:
            body = f"{ct}*{body}"
        if k == 0:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts)


def apply_embedding(e: Embedding, g: Poly) -> Poly:
    """m_{host, pattern}(g): substitute every term of g into the host."""
    return Poly._raw({substitute(e, t): c for t, c in g.terms.items()}, signature(e.host))


@dataclass(frozen=True)
class Step:
    rule: str
    monomial: Tree
    embedding: Embedding
    factor: Fraction
    result: Poly


@dataclass
class Trace:
    start: Poly
    steps: list = field(default_factory=list)

    @property
    def result(self):
        return self.steps[-1].result if self.steps else self.start

    @property
    def rules(self):
        return [s.rule for s in self.steps]

    def render(self, order: Ordering, fmt=str) -> str:
        """One line per step: ``<poly>  ={<rule>}=>  <poly>``."""
        lines = []
        prev = self.start
        for s in self.steps:
            lines.append(f"{format_poly(prev, order, fmt)}  ={{{s.rule}}}=>  {format_poly(s.result, order, fmt)}")
            prev = s.result
        return "\n".join(lines)


def reduce_once(f: Poly, g: Poly, order: Ordering, at: Tree | None = None) -> Poly:
    """Cancel the monomial ``at`` (default lt(f)) of f using g."""
    target = at if at is not None else f.lt(order)
    lg, cg = g.leading(order)
    embs = find_divisors(target, lg)
    if not embs:
        raise PolynomialError(f"{lg} does not divide {target}")
    e = embs[0]
    return f.axpy(-f.coefficient(target) / cg, apply_embedding(e, g))


class Reducer:
    """A fixed list of (label, polynomial) rules with an index on leading
    terms for fast divisor lookup."""

    def __init__(self, rules: Sequence[tuple[str, Poly]], order: Ordering):
        self.order = order
        self.rules = []
        self.by_root: dict[str, list] = {}
        for label, g in rules:
            if not g:
                continue
            lt, c = g.leading(order)
            entry = (label, g, lt, c)
            self.rules.append(entry)
            self.by_root.setdefault(lt.gen.name, []).append(entry)
        self.names = set(self.by_root)

    def find(self, t: Tree):
        """First rule whose leading term divides t, with its embedding."""
        return next(self._candidates(t), None)

    def _candidates(self, t: Tree):
        # vertices in preorder, rules in list order at each vertex
        for path in vertex_paths(t):
            name = subtree_at(t, path).gen.name
            for label, g, lt, c in self.by_root.get(name, ()):
                if lt.degree > t.degree:
                    continue
                emb = embedding_at(t, lt, path)
                if emb is not None:
                    yield label, g, lt, c, emb

    def is_reducible(self, t: Tree) -> bool:
        return self.find(t) is not None

    def normal_form(self, f: Poly, trace: bool = False):
        """Fully reduce f; returns (remainder, Trace or None)."""
        tr = Trace(f) if trace else None
        order = self.order
        while f.terms:
            target = None
            for t in order.sort_desc(f.terms):
                hit = self.find(t)
                if hit is not None:
                    target = (t, hit)
                    break
            if target is None:
                break
            t, (label, g, lt, c, emb) = target
            factor = f.terms[t] / c
            f = f.axpy(-factor, apply_embedding(emb, g))
            if tr is not None:
                tr.steps.append(Step(label, t, emb, factor, f))
        return f, tr


def normal_form(f: Poly, basis, order: Ordering, trace: bool = False):
    """Reduce every monomial of f modulo ``basis`` (a list of polys or of
    (label, poly) pairs)."""
    rules = [(b if isinstance(b, tuple) else (str(i), b)) for i, b in enumerate(basis)]
    return Reducer(rules, order).normal_form(f, trace=trace)


def s_polynomial(f: Poly, g: Poly, scm, order: Ordering) -> Poly:
    """s_gamma(f, g) = m(f)/c_f - m(g)/c_g over the common multiple gamma."""
    gamma, ef, eg = scm
    lf, cf = f.leading(order)
    lg, cg = g.leading(order)
    if ef.pattern != lf or eg.pattern != lg or ef.host != gamma or eg.host != gamma:
        raise PolynomialError("embedding does not match the leading terms")
    return apply_embedding(ef, f).scale(1 / cf).axpy(-1 / cg, apply_embedding(eg, g))


def s_polynomials(f: Poly, g: Poly, order: Ordering):
    """All (scm, S-polynomial) pairs for f and g."""
    lf, lg = f.lt(order), g.lt(order)
    return [(scm, s_polynomial(f, g, scm, order)) for scm in small_common_multiples(lf, lg)]
