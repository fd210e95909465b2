"""Quadratic (Koszul) duality for shuffle presentations.

Two pairings on quadratic monomials are available.  ``plus`` pairs every
monomial with its dual with coefficient +1.  ``signed`` (the default)
uses the sign carried by the operadic suspension, which is what turns
Com into Lie.  Leading terms of the annihilator under the reversed
ordering are the complement of the original leading terms whichever
pairing is used, so dimension counts do not depend on this choice.

The engine is ungraded.  When generators of different arities are present
the true dual has generators in odd degree and its compositions carry
Koszul signs, which are not modelled here.
"""
from __future__ import annotations

from dataclasses import dataclass

from .linalg import Eliminator, nullspace
from .orderings import Ordering
from .polynomials import Poly
from .symmetrize import Provenance, ShufflePresentation
from .trees import Generator, Leaf, Tree, Vertex, corolla, shuffle_grafts, signature


class KoszulError(ValueError):
    pass


def dual_name(name: str) -> str:
    return name + "!"


def reverse_ordering(order: Ordering) -> Ordering:
    return order.reversed()


def quadratic_monomials(gens) -> dict:
    """Degree-2 shuffle monomials grouped by signature."""
    out: dict = {}
    for g in gens:
        for h in gens:
            for pos in range(1, g.arity + 1):
                if g.inputs[pos - 1] != h.output:
                    continue
                for t in shuffle_grafts(corolla(g), pos, corolla(h)):
                    out.setdefault(signature(t), set()).add(t)
    return {sig: sorted(ts, key=str) for sig, ts in out.items()}


def rename_tree(t: Tree, gens: dict) -> Tree:
    if isinstance(t, Leaf):
        return t
    return Vertex(gens[t.gen.name], [rename_tree(c, gens) for c in t.children])


def rename_poly(p: Poly, gens: dict) -> Poly:
    return Poly({rename_tree(t, gens): c for t, c in p.terms.items()})


def monomial_dual(leading_terms, gens) -> set:
    """Complement of the given quadratic monomials, over the dual alphabet."""
    dual = {g.name: Generator(dual_name(g.name), g.inputs, g.output) for g in gens}
    lts = set(leading_terms)
    out = set()
    for ts in quadratic_monomials(gens).values():
        for t in ts:
            if t not in lts:
                out.add(rename_tree(t, dual))
    return out


def undual(trees, gens) -> set:
    """Inverse renaming of monomial_dual, for the involution check."""
    back = {dual_name(g.name): g for g in gens}
    return {rename_tree(t, back) for t in trees}


@dataclass
class QuadraticPresentation:
    presentation: ShufflePresentation

    def __post_init__(self):
        for label, p in self.presentation.relations:
            if any(t.degree != 2 for t in p.terms):
                raise KoszulError(f"relation {label} is not quadratic")
        for sig, rows in self._by_signature().items():
            el = Eliminator()
            for r in rows:
                if not el.add(r):
                    raise KoszulError(f"relations of signature {sig} are linearly dependent")

    @property
    def generators(self):
        return self.presentation.generators

    def _by_signature(self):
        monos = quadratic_monomials(self.generators)
        out = {}
        for _, p in self.presentation.relations:
            sig = p.sig
            index = {t: k for k, t in enumerate(monos.get(sig, ()))}
            out.setdefault(sig, []).append({index[t]: c for t, c in p.terms.items()})
        return out


def relation_ranks(sp: ShufflePresentation) -> dict:
    """signature -> (rank of relations, number of quadratic monomials)."""
    monos = quadratic_monomials(sp.generators)
    ranks = {sig: Eliminator() for sig in monos}
    for _, p in sp.relations:
        index = {t: k for k, t in enumerate(monos[p.sig])}
        ranks[p.sig].add({index[t]: c for t, c in p.terms.items()})
    return {sig: (ranks[sig].rank, len(monos[sig])) for sig in monos}


PLUS = "plus"
SIGNED = "signed"


def _perm_sign(labels) -> int:
    s = 1
    labels = list(labels)
    for i in range(len(labels)):
        for j in range(i + 1, len(labels)):
            if labels[i] > labels[j]:
                s = -s
    return s


def pairing_sign(t: Tree, pairing: str = PLUS) -> int:
    """<t, t> for a quadratic monomial t = outer o_{i,sigma} inner.

    ``signed`` uses sgn(sigma) * (-1)^((i-1)(m-1) + (n-1)), with n the outer
    and m the inner arity.
    """
    if pairing == PLUS:
        return 1
    if pairing != SIGNED:
        raise KoszulError(f"unknown pairing {pairing!r}")
    for i, c in enumerate(t.children, start=1):
        if isinstance(c, Vertex):
            return _perm_sign(t.labels) * (-1) ** ((i - 1) * (c.gen.arity - 1) + t.gen.arity - 1)
    raise KoszulError(f"{t} is not quadratic")


def quadratic_dual(sp: ShufflePresentation, order: Ordering | None = None, pairing: str = SIGNED) -> ShufflePresentation:
    """Annihilator of the relation span, signature by signature, over the
    dual generators, with the reversed (renamed) ordering."""
    order = order or sp.ordering
    monos = quadratic_monomials(sp.generators)
    dual = {g.name: Generator(dual_name(g.name), g.inputs, g.output) for g in sp.generators}
    rows: dict = {sig: [] for sig in monos}
    for _, p in sp.relations:
        if p.sig not in rows:
            raise KoszulError(f"relation of signature {p.sig} is not quadratic")
        index = {t: k for k, t in enumerate(monos[p.sig])}
        rows[p.sig].append({index[t]: c * pairing_sign(t, pairing) for t, c in p.terms.items()})
    rels = []
    for sig in sorted(monos, key=str):
        basis = monos[sig]
        for k, vec in enumerate(nullspace(rows[sig], len(basis)), start=1):
            poly = Poly({rename_tree(basis[j], dual): c for j, c in enumerate(vec) if c})
            rels.append(poly)
    dorder = None
    if order is not None:
        dorder = reverse_ordering(order).renamed({g: dual_name(g) for g in order.generators})
    labelled = [(f"R!{k}", p) for k, p in enumerate(rels, start=1)]
    if dorder is not None:
        from .symmetrize import relation_basis

        labelled = relation_basis(labelled, dorder)
        labelled = [(f"R!{k}", p) for k, (_, p) in enumerate(labelled, start=1)]
    gens = list(dual.values())
    prov = {g.name: Provenance(g.name, g.name[:-1], tuple(range(g.arity))) for g in gens}
    return ShufflePresentation(sp.name + "!", sp.palette, gens, prov, labelled, dorder)

