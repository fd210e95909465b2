"""From symmetric coloured presentations to shuffle presentations.

Symmetric terms are written with arbitrary leaf labels in any planar order.
Planarisation rebuilds a term so that at every vertex the child subtrees
appear by increasing minimal leaf; a binary vertex whose children must be
swapped is replaced by its mirror generator (free generators), kept
(symmetric generators) or negated (antisymmetric generators).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .colours import Palette
from .linalg import row_echelon
from .orderings import Ordering
from .polynomials import Poly
from .trees import Generator, Leaf, Tree, TreeError, Vertex, check_tree, signature

FREE = "free"
SYMMETRIC = "symmetric"
ANTISYMMETRIC = "antisymmetric"


class PresentationError(ValueError):
    pass


@dataclass(frozen=True)
class SymGenerator:
    name: str
    inputs: tuple[int, ...]
    output: int
    symmetry: str = FREE
    mirror: str | None = None

    def __post_init__(self):
        if self.symmetry not in (FREE, SYMMETRIC, ANTISYMMETRIC):
            raise PresentationError(f"unknown symmetry {self.symmetry!r}")
        if self.symmetry != FREE:
            if len(self.inputs) != 2:
                raise PresentationError(f"{self.name}: only binary generators may be (anti)symmetric")
            if self.inputs[0] != self.inputs[1]:
                raise PresentationError(f"{self.name}: (anti)symmetric generator needs equal slot colours")
        if len(self.inputs) > 2:
            raise PresentationError(f"{self.name}: generators of arity > 2 are not supported")

    @property
    def arity(self):
        return len(self.inputs)

    @property
    def mirror_name(self) -> str | None:
        if self.arity != 2 or self.symmetry != FREE:
            return None
        return self.mirror or f"{self.name}_op"


# symmetric term: an int leaf label or (generator name, tuple of subterms)
STerm = object


@dataclass(frozen=True)
class SymRelation:
    label: str
    terms: tuple[tuple[Fraction, STerm], ...]


@dataclass
class SymmetricPresentation:
    name: str
    palette: Palette
    generators: list[SymGenerator]
    relations: list[SymRelation]
    ordering: Ordering | None = None
    series: dict = field(default_factory=dict)

    def generator(self, name) -> SymGenerator:
        for g in self.generators:
            if g.name == name:
                return g
        raise PresentationError(f"unknown generator {name!r}")


@dataclass(frozen=True)
class Provenance:
    """Shuffle generator ``name`` equals ``source`` with slots permuted by
    ``slots`` (l(x, y) = r(y, x) has slots (1, 0))."""

    name: str
    source: str
    slots: tuple[int, ...]


@dataclass
class ShufflePresentation:
    name: str
    palette: Palette
    generators: list[Generator]
    provenance: dict[str, Provenance]
    relations: list[tuple[str, Poly]]
    ordering: Ordering | None = None

    def generator(self, name) -> Generator:
        for g in self.generators:
            if g.name == name:
                return g
        raise PresentationError(f"unknown shuffle generator {name!r}")

    @property
    def gens_by_name(self):
        return {g.name: g for g in self.generators}


def expand_generators(sp: SymmetricPresentation):
    gens: list[Generator] = []
    prov: dict[str, Provenance] = {}
    names = set()
    for g in sp.generators:
        gens.append(Generator(g.name, g.inputs, g.output))
        prov[g.name] = Provenance(g.name, g.name, tuple(range(g.arity)))
        names.add(g.name)
        m = g.mirror_name
        if m is not None:
            if m in names or any(m == h.name for h in sp.generators):
                raise PresentationError(f"mirror name {m!r} clashes with another generator")
            gens.append(Generator(m, tuple(reversed(g.inputs)), g.output))
            prov[m] = Provenance(m, g.name, (1, 0))
            names.add(m)
    return gens, prov


def term_labels(term) -> list[int]:
    if isinstance(term, int):
        return [term]
    return [l for c in term[1] for l in term_labels(c)]


def relabel_term(term, sigma):
    if isinstance(term, int):
        return sigma[term]
    return (term[0], tuple(relabel_term(c, sigma) for c in term[1]))


def planarize(term, sp: SymmetricPresentation, colour: int | None = None) -> tuple[int, Tree]:
    """(sign, shuffle tree) for a symmetric term."""
    if isinstance(term, int):
        if colour is None:
            raise PresentationError("a bare leaf needs a colour")
        return 1, Leaf(term, colour)
    name, kids = term
    g = sp.generator(name)
    if len(kids) != g.arity:
        raise PresentationError(f"{name} expects {g.arity} arguments, got {len(kids)}")
    sign = 1
    built = []
    for k, col in zip(kids, g.inputs):
        s, t = planarize(k, sp, col)
        if isinstance(t, Vertex) and t.gen.output != col:
            raise PresentationError(f"{t.gen.name} outputs the wrong colour for slot of {name}")
        sign *= s
        built.append(t)
    gen = Generator(g.name, g.inputs, g.output)
    if g.arity == 2 and built[0].min_label > built[1].min_label:
        built.reverse()
        if g.symmetry == ANTISYMMETRIC:
            sign = -sign
        elif g.symmetry == FREE:
            gen = Generator(g.mirror_name, tuple(reversed(g.inputs)), g.output)
    return sign, Vertex(gen, built)


def term_to_poly(terms, sp: SymmetricPresentation) -> Poly:
    acc = []
    for c, term in terms:
        s, t = planarize(term, sp)
        try:
            check_tree(t)
        except TreeError as e:
            raise PresentationError(str(e)) from None
        acc.append((t, Fraction(c) * s))
    return Poly(acc)


def arity_of(rel: SymRelation) -> int:
    return len(term_labels(rel.terms[0][1]))


def apply_permutation(rel: SymRelation, sigma: Sequence[int], sp: SymmetricPresentation) -> Poly:
    """Act by ``sigma`` (sigma[k-1] is the image of label k) and planarise."""
    mapping = {k + 1: v for k, v in enumerate(sigma)}
    return term_to_poly([(c, relabel_term(t, mapping)) for c, t in rel.terms], sp)


def _scalar_key(p: Poly):
    first = min(p.terms, key=str)
    c = p.terms[first]
    return frozenset((t, v / c) for t, v in p.terms.items())


def orbit(rel: SymRelation, sp: SymmetricPresentation) -> list[Poly]:
    """Orbit of one relation under the symmetric group, deduplicated up to
    nonzero scalars, in the order the permutations are enumerated."""
    n = arity_of(rel)
    seen = set()
    out = []
    for perm in itertools.permutations(range(1, n + 1)):
        p = apply_permutation(rel, perm, sp)
        if not p:
            continue
        k = _scalar_key(p)
        if k in seen:
            continue
        seen.add(k)
        out.append(p)
    return out


def expand_relations(sp: SymmetricPresentation) -> list[tuple[str, Poly]]:
    """All orbit members, labelled ``<label>.<k>``."""
    out = []
    for rel in sp.relations:
        for k, p in enumerate(orbit(rel, sp), start=1):
            out.append((f"{rel.label}.{k}", p))
    return out


def relation_basis(polys: Sequence[tuple[str, Poly]], order: Ordering) -> list[tuple[str, Poly]]:
    """Inter-reduced monic basis of the span, per signature.  Each basis
    element keeps the label of the first input polynomial that raised the
    rank at its pivot."""
    by_sig: dict = {}
    for label, p in polys:
        if p:
            by_sig.setdefault(p.sig, []).append((label, p))
    out = []
    for sig in sorted(by_sig, key=str):
        items = by_sig[sig]
        monos = order.sort_desc({t for _, p in items for t in p.terms})
        rows = [[p.coefficient(t) for t in monos] for _, p in items]
        ech, pivots, origin = row_echelon(rows, track=True)
        for row, piv, src in zip(ech, pivots, origin):
            poly = Poly({monos[j]: row[j] for j in range(len(monos)) if row[j]}, sig)
            out.append((items[src][0], poly))
    return out


def shuffle_presentation(sp: SymmetricPresentation, order: Ordering | None = None, basis: bool = True) -> ShufflePresentation:
    gens, prov = expand_generators(sp)
    order = order or sp.ordering
    rels = expand_relations(sp)
    if basis and order is not None:
        rels = relation_basis(rels, order)
    return ShufflePresentation(sp.name, sp.palette, gens, prov, rels, order)
