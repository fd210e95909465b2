"""Buchberger completion, certification and dimension counting."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .linalg import Eliminator
from .orderings import Ordering
from .polynomials import Poly, Reducer, apply_embedding, s_polynomial
from .trees import (
    Generator,
    Leaf,
    Tree,
    Vertex,
    _degree_bound,
    _set_partitions,
    colour_mixing_monomials,
    divides,
    embedding_at,
    enumerate_monomials,
    find_divisors,
    relabel,
    small_common_multiples,
)


class CompletionError(RuntimeError):
    pass


@dataclass
class PairOutcome:
    left: str
    right: str
    gamma: Tree
    result: str  # "0" or the label of the new element
    rules: list[str]

    def __str__(self):
        return f"{self.left} x {self.right} @ {self.gamma}: {self.result} [{' '.join(self.rules)}]"


@dataclass
class CompletionReport:
    pairs_processed: int = 0
    scms_examined: int = 0
    new_elements_added: int = 0
    max_degree_reached: int = 0
    fallback_uses: int = 0
    truncated: bool = False
    log: list[PairOutcome] = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return self.new_elements_added == 0 and not self.truncated

    def summary_lines(self):
        return [
            f"pairs processed: {self.pairs_processed}",
            f"scms examined: {self.scms_examined}",
            f"new elements: {self.new_elements_added}",
            f"max degree reached: {self.max_degree_reached}",
            f"fallback uses: {self.fallback_uses}",
            f"truncated: {'yes' if self.truncated else 'no'}",
        ]

    def render(self, verbose=False):
        lines = self.summary_lines()
        if verbose:
            lines += [str(o) for o in self.log]
        return "\n".join(lines)


@dataclass
class GroebnerBasis:
    elements: list[tuple[str, Poly]]
    ordering: Ordering
    report: CompletionReport

    def reducer(self) -> Reducer:
        return Reducer(self.elements, self.ordering)

    @property
    def leading_terms(self):
        return [p.lt(self.ordering) for _, p in self.elements]


def _uses_fallback(p: Poly, order: Ordering) -> bool:
    """Whether the leading term of p was decided by the fallback."""
    if len(p) < 2:
        return False
    ts = order.sort_desc(p.terms)
    return order.compare(ts[0], ts[1])[1]


def _monic_basis(relations, order):
    out = []
    for label, p in relations:
        if p:
            out.append((label, p.monic(order)))
    return out


def buchberger(
    relations: Sequence[tuple[str, Poly]],
    order: Ordering,
    max_degree: int = 3,
    interreduce: bool = True,
    jobs: int = 1,
) -> GroebnerBasis:
    """Degree-truncated Buchberger completion.

    Pairs are processed by ascending (gamma degree, gamma text); every
    S-polynomial is fully reduced against the current basis, and a nonzero
    remainder becomes a new monic element.

    With ``jobs > 1`` the S-polynomials of a degree stratum are reduced in
    worker processes against a snapshot of the basis.  A snapshot result is
    used only while the basis is unchanged, so the output does not depend
    on ``jobs``.
    """
    basis = _monic_basis(relations, order)
    report = CompletionReport()
    for _, p in basis:
        if _uses_fallback(p, order):
            report.fallback_uses += 1
    if any(p.degree > max_degree for _, p in basis):
        raise CompletionError("max degree is below the degree of a relation")
    report.max_degree_reached = max((p.degree for _, p in basis), default=0)

    def pairs_for(j):
        out = []
        lj = basis[j][1].lt(order)
        for i in range(j + 1):
            li = basis[i][1].lt(order)
            for scm in small_common_multiples(li, lj):
                report.scms_examined += 1
                if scm[0].degree > max_degree:
                    report.truncated = True
                    continue
                out.append((scm[0].degree, str(scm[0]), i, j, scm))
        return out

    queue = []
    for j in range(len(basis)):
        queue.extend(pairs_for(j))
    queue.sort(key=lambda x: x[:4])
    reducer = Reducer(basis, order)
    new_count = 0
    cache: dict = {}
    snapshot = -1
    while queue:
        if jobs > 1 and snapshot != len(basis):
            snapshot = len(basis)
            cache = _parallel_stratum(queue, basis, order, jobs)
        _, _, i, j, scm = queue.pop(0)
        (li_label, f), (lj_label, g) = basis[i], basis[j]
        key = (i, j, scm[0], scm[1].host_vertices, scm[2].host_vertices)
        if key in cache and snapshot == len(basis):
            r, tr = cache.pop(key)
        else:
            s = s_polynomial(f, g, scm, order)
            r, tr = reducer.normal_form(s, trace=True)
        report.pairs_processed += 1
        report.max_degree_reached = max(report.max_degree_reached, scm[0].degree)
        if not r:
            report.log.append(PairOutcome(li_label, lj_label, scm[0], "0", tr.rules))
            continue
        new_count += 1
        label = f"new{new_count}"
        r = r.monic(order)
        if _uses_fallback(r, order):
            report.fallback_uses += 1
        basis.append((label, r))
        report.new_elements_added += 1
        report.log.append(PairOutcome(li_label, lj_label, scm[0], label, tr.rules))
        reducer = Reducer(basis, order)
        queue.extend(pairs_for(len(basis) - 1))
        queue.sort(key=lambda x: x[:4])
    if interreduce:
        basis = interreduce_basis(basis, order)
    return GroebnerBasis(basis, order, report)


_WORKER: dict = {}


def _init_worker(basis, order):
    _WORKER["basis"] = basis
    _WORKER["order"] = order
    _WORKER["reducer"] = Reducer(basis, order)


def _reduce_pair(item):
    i, j, scm = item
    basis, order = _WORKER["basis"], _WORKER["order"]
    s = s_polynomial(basis[i][1], basis[j][1], scm, order)
    return _WORKER["reducer"].normal_form(s, trace=True)


def _parallel_stratum(queue, basis, order, jobs):
    from concurrent.futures import ProcessPoolExecutor

    deg = queue[0][0]
    items = [(i, j, scm) for d, _, i, j, scm in queue if d == deg]
    if len(items) < 2:
        return {}
    with ProcessPoolExecutor(jobs, initializer=_init_worker, initargs=(basis, order)) as ex:
        results = list(ex.map(_reduce_pair, items, chunksize=max(1, len(items) // (4 * jobs))))
    return {(i, j, scm[0], scm[1].host_vertices, scm[2].host_vertices): r for (i, j, scm), r in zip(items, results)}


def interreduce_basis(basis, order):
    """Drop elements whose leading term is divisible by another's and reduce
    the tails of the rest."""
    items = list(basis)
    lts = [p.lt(order) for _, p in items]
    keep = []
    for k, (label, p) in enumerate(items):
        lt = lts[k]
        redundant = False
        for j, other in enumerate(lts):
            if j == k:
                continue
            if find_divisors(lt, other) and (other != lt or j < k):
                redundant = True
                break
        if not redundant:
            keep.append((label, p))
    out = []
    for k, (label, p) in enumerate(keep):
        others = keep[:k] + keep[k + 1:]
        p = p.monic(order)
        lt = p.lt(order)
        tail, _ = Reducer(others, order).normal_form(p.axpy(-1, Poly.monomial(lt)))
        out.append((label, Poly.monomial(lt).axpy(1, tail)))
    return out


def is_quadratic_groebner(relations, order: Ordering) -> CompletionReport:
    for label, p in relations:
        if p and p.degree != 2:
            raise CompletionError(f"relation {label} is not quadratic")
        if p and any(t.degree != 2 for t in p.terms):
            raise CompletionError(f"relation {label} is not homogeneous of degree 2")
    return buchberger(relations, order, max_degree=3, interreduce=False).report


# --- normal monomials -----------------------------------------------------------


class NormalEnumerator:
    """Generate tree monomials divisible by no leading term.

    A tree is normal iff its children are normal and no leading term embeds
    at its root, so trees are assembled bottom-up with a root-only check.
    Children on a block of labels are order-preserving relabellings of
    normal trees on 1..k, which makes memoisation by colour pattern exact.
    """

    def __init__(self, gens: Sequence[Generator], leading_terms: Sequence[Tree], max_degree: int | None = None):
        self.gens = list(gens)
        self.lts_by_root: dict[str, list[Tree]] = {}
        for t in leading_terms:
            if isinstance(t, Vertex):
                self.lts_by_root.setdefault(t.gen.name, []).append(t)
        self.max_degree = max_degree
        self.memo: dict = {}

    def _root_reducible(self, t: Vertex) -> bool:
        for lt in self.lts_by_root.get(t.gen.name, ()):
            if lt.degree <= t.degree and embedding_at(t, lt, ()) is not None:
                return True
        return False

    def trees(self, colours: tuple[int, ...], output: int, budget: int) -> list[Tree]:
        """Normal trees on labels 1..len(colours) whose leaf k has colour
        colours[k-1], with at most ``budget`` vertices."""
        key = (colours, output, budget)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        n = len(colours)
        out = []
        if n == 1 and colours[0] == output:
            out.append(Leaf(1, output))
        if budget > 0:
            for g in self.gens:
                if g.output != output or g.arity > n:
                    continue
                for blocks in _set_partitions(range(1, n + 1), g.arity):
                    opts = []
                    ok = True
                    for blk, col in zip(blocks, g.inputs):
                        sub_cols = tuple(colours[l - 1] for l in blk)
                        opts.append((blk, sub_cols, col))
                    if ok:
                        self._assemble(g, opts, budget - 1, out)
        self.memo[key] = out
        return out

    def _assemble(self, g, opts, budget, out):
        def rec(i, remaining, acc):
            if i == len(opts):
                t = Vertex(g, acc)
                if not self._root_reducible(t):
                    out.append(t)
                return
            blk, sub_cols, col = opts[i]
            for c in self.trees(sub_cols, col, remaining):
                mapping = {j + 1: lab for j, lab in enumerate(blk)}
                rec(i + 1, remaining - c.degree, acc + [relabel(c, mapping)])

        rec(0, budget, [])


def _budget(gens, arity, max_degree):
    return _degree_bound(gens, arity) if max_degree is None else max_degree


def normal_monomials(gb_or_lts, gens, arity: int, colouring, output: int, max_degree=None, order=None) -> list[Tree]:
    lts = _lts(gb_or_lts, order)
    en = NormalEnumerator(gens, lts)
    trees = en.trees(tuple(colouring), output, _budget(gens, arity, max_degree))
    return sorted(trees, key=str)


def _lts(gb_or_lts, order=None):
    if isinstance(gb_or_lts, GroebnerBasis):
        return gb_or_lts.leading_terms
    items = list(gb_or_lts)
    if items and isinstance(items[0], tuple):
        return [p.lt(order) for _, p in items]
    if items and isinstance(items[0], Poly):
        return [p.lt(order) for p in items]
    return items


def weight_vectors(ncolours: int, max_total: int, min_total: int = 1):
    for total in range(min_total, max_total + 1):
        for w in itertools.product(range(total + 1), repeat=ncolours):
            if sum(w) == total:
                yield w


def standard(weights) -> tuple[int, ...]:
    return tuple(c for c, w in enumerate(weights) for _ in range(w))


def dimension_table(gb_or_lts, gens, ncolours: int, max_total_arity: int, max_degree=None, order=None):
    """{(weights, output colour): number of normal monomials}."""
    lts = _lts(gb_or_lts, order)
    en = NormalEnumerator(gens, lts)
    table = {}
    for w in weight_vectors(ncolours, max_total_arity):
        cols = standard(w)
        for c in range(ncolours):
            table[(w, c)] = len(en.trees(cols, c, _budget(gens, len(cols), max_degree)))
    return table


# --- rank oracle ----------------------------------------------------------------


def ideal_rank(relations: Sequence[Poly], gens, colouring, output, order: Ordering, max_degree=None):
    """(number of monomials, rank of the ideal slice) for one signature.

    The slice is spanned by every relation substituted into every context,
    i.e. m_{gamma, lt(g)}(g) over all monomials gamma and all embeddings of
    lt(g) into gamma."""
    arity = len(colouring)
    monos = enumerate_monomials(gens, arity, output=output, colouring=colouring, max_degree=max_degree)
    index = {t: k for k, t in enumerate(order.sort_desc(monos))}
    el = Eliminator()
    rels = [(g, g.lt(order)) for g in relations if g]
    for gamma in monos:
        for g, lt in rels:
            if lt.degree > gamma.degree:
                continue
            for e in find_divisors(gamma, lt):
                vec = apply_embedding(e, g)
                el.add({index[t]: c for t, c in vec.terms.items()})
    return len(monos), el.rank


def oracle_dimension(relations, gens, colouring, output, order, max_degree=None) -> int:
    n, r = ideal_rank(relations, gens, colouring, output, order, max_degree)
    return n - r


# --- colour-mixing check ----------------------------------------------------------


@dataclass
class MixingReport:
    mixing_monomials: int = 0
    scms_examined: int = 0
    failures: list = field(default_factory=list)  # (basis label, gamma, remainder)

    @property
    def ok(self):
        return not self.failures


def colour_mixing_check(basis, gens, order: Ordering, max_arity: int = 4) -> MixingReport:
    """Every SCM, in the colour-blind free operad, of a colour-mixing monomial
    and a basis element gives an S-polynomial whose terms are all divisible
    by colour-mixing monomials, i.e. it reduces to 0 using B alone."""
    B = colour_mixing_monomials(gens)
    rep = MixingReport(len(B))
    for label, g in basis:
        g = g.monic(order)
        lt = g.lt(order)
        for b in B:
            scms = small_common_multiples(b, lt, check_colours=False)
            scms += [(gam, eb, eg) for gam, eg, eb in small_common_multiples(lt, b, check_colours=False)]
            seen = set()
            for gamma, eb, eg in scms:
                if gamma.arity > max_arity:
                    continue
                key = (gamma, eb.host_vertices, eg.host_vertices)
                if key in seen:
                    continue
                seen.add(key)
                rep.scms_examined += 1
                # m(b) is the monomial gamma itself, so s = m(g) - gamma
                s = apply_embedding(eg, g).axpy(-1, Poly({gamma: 1}))
                left = {t: c for t, c in s.terms.items() if not any(divides(m, t) for m in B)}
                if left:
                    rep.failures.append((label, gamma, Poly(left)))
    return rep
