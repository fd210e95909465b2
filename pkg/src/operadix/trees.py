"""Tree monomials of free coloured shuffle operads.

A tree monomial is either a :class:`Leaf` (the identity of a colour when it
stands alone) or a :class:`Vertex` decorated by a :class:`Generator` whose
children are listed in slot order.  Trees are immutable and hashable; two
trees are equal iff their canonical serialisations agree.

Vertices are addressed by *paths*: tuples of 0-based slot indices from the
root.  Sorting paths gives the preorder, which is the canonical vertex order
used for deterministic tie-breaking.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .colours import Colouring, Palette


class TreeError(ValueError):
    pass


class ColourMismatch(TreeError):
    pass


class InvalidShuffle(TreeError):
    pass


class ResourceLimit(RuntimeError):
    pass


DEFAULT_MAX_MONOMIALS = 200_000


def monomial_cap() -> int:
    return int(os.environ.get("OPERADIX_MAX_MONOMIALS", DEFAULT_MAX_MONOMIALS))


@dataclass(frozen=True)
class Generator:
    name: str
    inputs: tuple[int, ...]
    output: int

    def __post_init__(self):
        if not self.inputs:
            raise TreeError(f"generator {self.name} must have arity >= 1")

    @property
    def arity(self) -> int:
        return len(self.inputs)

    def __repr__(self):
        return f"Generator({self.name!r}, {self.inputs}, {self.output})"


class Tree:
    __slots__ = ("_key", "_hash", "_leaves", "_degree")

    # subclasses fill the slots in __init__

    def __eq__(self, other):
        return isinstance(other, Tree) and self._key == other._key

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        # only used for deterministic sorting; not an admissible ordering
        return str(self) < str(other)

    @property
    def key(self):
        return self._key

    @property
    def arity(self) -> int:
        return len(self._leaves)

    @property
    def degree(self) -> int:
        """Operation degree: number of vertices."""
        return self._degree

    @property
    def labels(self) -> tuple[int, ...]:
        """Leaf labels in planar (left to right) order."""
        return self._leaves

    @property
    def min_label(self) -> int:
        return min(self._leaves)

    def __repr__(self):
        return f"<{self}>"


class Leaf(Tree):
    __slots__ = ("label", "colour")

    def __init__(self, label: int, colour: int):
        self.label = label
        self.colour = colour
        self._key = ("#", label, colour)
        self._hash = hash(self._key)
        self._leaves = (label,)
        self._degree = 0

    @property
    def output(self) -> int:
        return self.colour

    def __str__(self):
        return str(self.label)


class Vertex(Tree):
    __slots__ = ("gen", "children")

    def __init__(self, gen: Generator, children: Sequence[Tree]):
        children = tuple(children)
        if len(children) != gen.arity:
            raise TreeError(f"{gen.name} expects {gen.arity} children, got {len(children)}")
        self.gen = gen
        self.children = children
        # leaf keys ignore colour below a vertex: the slot determines it
        self._key = (gen.name,) + tuple(
            c.label if isinstance(c, Leaf) else c._key for c in children
        )
        self._hash = hash(self._key)
        self._leaves = tuple(l for c in children for l in c._leaves)
        self._degree = 1 + sum(c._degree for c in children)

    @property
    def output(self) -> int:
        return self.gen.output

    def __str__(self):
        return f"{self.gen.name}({','.join(map(str, self.children))})"


def identity(colour: int) -> Leaf:
    return Leaf(1, colour)


def corolla(gen: Generator) -> Vertex:
    return Vertex(gen, [Leaf(k + 1, c) for k, c in enumerate(gen.inputs)])


def leaf_colours(tree: Tree) -> dict[int, int]:
    """Map leaf label -> colour (colour read off the parent slot)."""
    out: dict[int, int] = {}

    def walk(t, colour):
        if isinstance(t, Leaf):
            out[t.label] = colour
        else:
            for c, col in zip(t.children, t.gen.inputs):
                walk(c, col)

    walk(tree, tree.output)
    return out


def input_colouring(tree: Tree) -> tuple[int, ...]:
    cols = leaf_colours(tree)
    return tuple(cols[k] for k in range(1, tree.arity + 1))


def signature(tree: Tree) -> tuple[int, tuple[int, ...], int]:
    """(arity, input colouring, output colour)."""
    return tree.arity, input_colouring(tree), tree.output


def colour_degree(tree: Tree, ncolours: int) -> tuple[int, ...]:
    vec = [0] * ncolours
    for c in input_colouring(tree):
        vec[c] += 1
    vec[tree.output] -= 1
    return tuple(vec)


def check_tree(tree: Tree, colours: bool = True) -> None:
    """Raise TreeError unless labels are bijective, colours match and the
    shuffle condition holds at every vertex."""
    labels = sorted(tree.labels)
    if labels != list(range(1, len(labels) + 1)):
        raise TreeError(f"leaf labels of {tree} are not a bijection onto 1..n")

    def walk(t):
        if isinstance(t, Leaf):
            return
        mins = [c.min_label for c in t.children]
        if any(a >= b for a, b in zip(mins, mins[1:])):
            raise InvalidShuffle(f"shuffle condition fails at {t}")
        for c, col in zip(t.children, t.gen.inputs):
            if colours and isinstance(c, Vertex) and c.gen.output != col:
                raise ColourMismatch(f"{c.gen.name} outputs into a slot of another colour in {t}")
            walk(c)

    walk(tree)


def is_valid(tree: Tree, colours: bool = True) -> bool:
    try:
        check_tree(tree, colours)
    except TreeError:
        return False
    return True


def relabel(tree: Tree, mapping) -> Tree:
    """Apply ``label -> mapping[label]`` to every leaf (no re-planarisation)."""
    if isinstance(tree, Leaf):
        return Leaf(mapping[tree.label], tree.colour)
    return Vertex(tree.gen, [relabel(c, mapping) for c in tree.children])


def standardize(tree: Tree) -> Tree:
    """Relabel leaves order-preservingly onto 1..n."""
    order = {l: i + 1 for i, l in enumerate(sorted(tree.labels))}
    return relabel(tree, order)


# --- vertices and paths ---------------------------------------------------


def vertex_paths(tree: Tree) -> list[tuple[int, ...]]:
    """Paths of all vertices in preorder."""
    out = []

    def walk(t, path):
        if isinstance(t, Vertex):
            out.append(path)
            for i, c in enumerate(t.children):
                walk(c, path + (i,))

    walk(tree, ())
    return out


def at(tree: Tree, path: tuple[int, ...]) -> Tree:
    for i in path:
        tree = tree.children[i]
    return tree


def replace_at(tree: Tree, path: tuple[int, ...], new: Tree) -> Tree:
    if not path:
        return new
    i = path[0]
    kids = list(tree.children)
    kids[i] = replace_at(kids[i], path[1:], new)
    return Vertex(tree.gen, kids)


# --- grafting ---------------------------------------------------------------


def graft(
    first: Tree,
    position: int,
    second: Tree,
    shuffle: dict[int, int] | Sequence[int] | None = None,
    check_colours: bool = True,
) -> Tree:
    """Partial shuffle composition ``first ∘_{position, shuffle} second``.

    ``second`` is grafted on the leaf labelled ``position``; leaves are first
    numbered as for the nonsymmetric composition and then ``shuffle`` (a map
    on the labels ``position .. n+m-1``, or a full permutation sequence of
    the new labels) is applied.
    """
    n, m = first.arity, second.arity
    if not 1 <= position <= n:
        raise TreeError(f"no leaf {position} in {first}")
    site_colour = leaf_colours(first)[position]
    if check_colours and second.output != site_colour:
        raise ColourMismatch(
            f"cannot graft output colour {second.output} onto leaf {position} of colour {site_colour}"
        )
    shift_first = {k: (k if k < position else k + m - 1) for k in range(1, n + 1)}
    shift_second = {j: position + j - 1 for j in range(1, m + 1)}
    if shuffle is None:
        perm = {}
    elif isinstance(shuffle, dict):
        perm = dict(shuffle)
    else:
        perm = {k + 1: v for k, v in enumerate(shuffle)}
    total = n + m - 1

    def sigma(k):
        return perm.get(k, k)

    if sorted(sigma(k) for k in range(1, total + 1)) != list(range(1, total + 1)):
        raise InvalidShuffle(f"{shuffle} is not a permutation of 1..{total}")
    if any(sigma(k) != k for k in range(1, position)):
        raise InvalidShuffle("shuffle must fix labels left of the grafting site")
    inner = relabel(second, {j: sigma(shift_second[j]) for j in shift_second})

    def build(t):
        if isinstance(t, Leaf):
            if t.label == position:
                return inner
            return Leaf(sigma(shift_first[t.label]), t.colour)
        return Vertex(t.gen, [build(c) for c in t.children])

    if isinstance(first, Leaf):
        result = inner
    else:
        result = build(first)
    check_tree(result, colours=check_colours)
    return result


def shuffle_grafts(first: Tree, position: int, second: Tree, check_colours: bool = True) -> list[Tree]:
    """All shuffle compositions of ``second`` into leaf ``position`` of ``first``."""
    n, m = first.arity, second.arity
    total = n + m - 1
    right = list(range(position + 1, total + 1))
    out = []
    for rest in itertools.combinations(right, m - 1):
        chosen = [position, *rest]
        others = [k for k in range(position, total + 1) if k not in chosen]
        perm = {}
        for j, lab in enumerate(chosen):
            perm[position + j] = lab
        for j, lab in enumerate(others):
            perm[position + m + j] = lab
        try:
            out.append(graft(first, position, second, perm, check_colours=check_colours))
        except InvalidShuffle:
            continue
    return out


# --- divisibility -----------------------------------------------------------


@dataclass(frozen=True)
class Embedding:
    """An occurrence of ``pattern`` inside ``host``.

    ``root`` is the host path of the pattern root, ``vertex_map`` maps pattern
    vertex paths to host vertex paths and ``inputs`` lists, for each pattern
    leaf label j, the host subtree hanging at that input.
    """

    host: Tree
    pattern: Tree
    root: tuple[int, ...]
    vertex_map: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    inputs: tuple[Tree, ...] = field(compare=False)

    @property
    def host_vertices(self) -> frozenset:
        return frozenset(h for _, h in self.vertex_map)


def _match_shape(pattern: Tree, host: Tree, ppath, hpath, vmap, hanging):
    """Match the vertex structure of pattern against host; collect the host
    subtrees sitting at pattern leaves (in planar order)."""
    if isinstance(pattern, Leaf):
        hanging.append(host)
        return True
    if not isinstance(host, Vertex) or host.gen.name != pattern.gen.name:
        return False
    vmap.append((ppath, hpath))
    for i, (pc, hc) in enumerate(zip(pattern.children, host.children)):
        if not _match_shape(pc, hc, ppath + (i,), hpath + (i,), vmap, hanging):
            return False
    return True


def embedding_at(host: Tree, pattern: Tree, path) -> Embedding | None:
    if isinstance(pattern, Leaf):
        return None
    vmap, hanging = [], []
    if not _match_shape(pattern, at(host, path), (), path, vmap, hanging):
        return None
    # pattern leaves in planar order carry labels pattern.labels; the
    # hanging subtree at pattern leaf j must be the j-th by minimal label
    mins = [h.min_label for h in hanging]
    rank = {v: i + 1 for i, v in enumerate(sorted(mins))}
    if tuple(rank[v] for v in mins) != pattern.labels:
        return None
    inputs = [None] * len(hanging)
    for lab, h in zip(pattern.labels, hanging):
        inputs[lab - 1] = h
    return Embedding(host, pattern, path, tuple(vmap), tuple(inputs))


def find_divisors(host: Tree, pattern: Tree) -> list[Embedding]:
    """All embeddings of ``pattern`` in ``host`` ordered by root preorder."""
    if isinstance(pattern, Leaf):
        return []
    out = []
    for path in vertex_paths(host):
        e = embedding_at(host, pattern, path)
        if e is not None:
            out.append(e)
    return out


def divides(pattern: Tree, host: Tree) -> bool:
    if isinstance(pattern, Leaf) or pattern.degree > host.degree:
        return False
    return any(embedding_at(host, pattern, p) is not None for p in vertex_paths(host))


def subtree_monomial(e: Embedding) -> Tree:
    """The divisor read off the host with smallest-descendant relabelling."""
    sub = at(e.host, e.root)
    covered = {p for p, _ in e.vertex_map}
    mins = sorted(h.min_label for h in e.inputs)
    rank = {v: i + 1 for i, v in enumerate(mins)}

    def build(t, ppath):
        if ppath not in covered:
            return Leaf(rank[t.min_label], t.output if isinstance(t, Vertex) else t.colour)
        return Vertex(t.gen, [build(c, ppath + (i,)) for i, c in enumerate(t.children)])

    return build(sub, ())


def substitute(e: Embedding, replacement: Tree) -> Tree:
    """Replace the image of ``e.pattern`` inside the host by ``replacement``."""
    if replacement.arity != e.pattern.arity or replacement.output != e.pattern.output:
        raise TreeError(f"{replacement} does not have the signature of {e.pattern}")
    if input_colouring(replacement) != input_colouring(e.pattern):
        raise TreeError(f"{replacement} does not have the input colouring of {e.pattern}")

    def build(t):
        if isinstance(t, Leaf):
            return e.inputs[t.label - 1]
        return Vertex(t.gen, [build(c) for c in t.children])

    new_sub = e.inputs[0] if isinstance(replacement, Leaf) else build(replacement)
    return replace_at(e.host, e.root, new_sub)


# --- small common multiples -------------------------------------------------


def _overlay(a: Tree, b: Tree):
    """Union of the vertex structures of ``a`` and ``b`` with roots identified.

    Returns an unlabelled skeleton (leaves carry placeholder labels) together
    with the set of skeleton paths covered by ``a`` and by ``b``, or None when
    the two disagree on a shared vertex.
    """
    counter = itertools.count(1)
    a_paths, b_paths = set(), set()

    def walk(x, y, path):
        # x, y: subtrees of a and b (or None when that tree has ended)
        xv = isinstance(x, Vertex)
        yv = isinstance(y, Vertex)
        if not xv and not yv:
            colour = x.colour if x is not None else y.colour
            return Leaf(next(counter), colour)
        if xv and yv and x.gen.name != y.gen.name:
            raise _Clash
        gen = x.gen if xv else y.gen
        if xv:
            a_paths.add(path)
        if yv:
            b_paths.add(path)
        kids = []
        for i in range(gen.arity):
            cx = x.children[i] if xv else None
            cy = y.children[i] if yv else None
            kids.append(walk(cx, cy, path + (i,)))
        return Vertex(gen, kids)

    try:
        skel = walk(a, b, ())
    except _Clash:
        return None
    return skel, frozenset(a_paths), frozenset(b_paths)


class _Clash(Exception):
    pass


def _labellings(skel: Tree):
    """All shuffle labellings of a skeleton's leaves (planar positions)."""
    n = skel.arity
    for perm in itertools.permutations(range(1, n + 1)):
        mapping = {i + 1: perm[i] for i in range(n)}
        t = relabel(skel, mapping)
        if is_valid(t, colours=False):
            yield t


def _embedding_with_paths(host: Tree, pattern: Tree, root, paths) -> Embedding | None:
    e = embedding_at(host, pattern, root)
    if e is None or e.host_vertices != paths:
        return None
    return e


def small_common_multiples(a: Tree, b: Tree, check_colours: bool = True):
    """Small common multiples of ``a`` and ``b``.

    Returns a list of ``(gamma, embedding of a, embedding of b)``: gamma is a
    union of one copy of each sharing at least one vertex.  The trivial
    overlap of a tree with itself is omitted.
    """
    if isinstance(a, Leaf) or isinstance(b, Leaf):
        return []
    found = {}
    for outer, inner, swap in ((a, b, False), (b, a, True)):
        for path in vertex_paths(outer):
            sub = at(outer, path)
            ov = _overlay(sub, inner)
            if ov is None:
                continue
            skel_sub, _, inner_paths = ov
            skel = _unlabel(replace_at(outer, path, skel_sub))
            outer_paths = frozenset(vertex_paths(outer))
            inner_paths = frozenset(path + p for p in inner_paths)
            if check_colours and not _colours_ok(skel):
                continue
            for gamma in _labellings(skel):
                eo = _embedding_with_paths(gamma, outer, (), outer_paths)
                if eo is None:
                    continue
                ei = _embedding_with_paths(gamma, inner, path, inner_paths)
                if ei is None:
                    continue
                ea, eb = (ei, eo) if swap else (eo, ei)
                if a == b and ea.host_vertices == eb.host_vertices:
                    continue
                k = (gamma, ea.host_vertices, eb.host_vertices)
                found.setdefault(k, (gamma, ea, eb))
    return sorted(found.values(), key=lambda t: (t[0].degree, str(t[0]), sorted(t[1].host_vertices), sorted(t[2].host_vertices)))


def _unlabel(t: Tree) -> Tree:
    """Copy of t with planar leaf positions as labels (placeholders)."""
    counter = itertools.count(1)

    def walk(x):
        if isinstance(x, Leaf):
            return Leaf(next(counter), x.colour)
        return Vertex(x.gen, [walk(c) for c in x.children])

    return walk(t)


def _colours_ok(t: Tree) -> bool:
    if isinstance(t, Leaf):
        return True
    for c, col in zip(t.children, t.gen.inputs):
        if isinstance(c, Vertex) and (c.gen.output != col or not _colours_ok(c)):
            return False
    return True


# --- enumeration --------------------------------------------------------------


def _set_partitions(items: Sequence[int], k: int):
    """Set partitions of items into exactly k blocks, blocks sorted by min."""
    items = list(items)
    if k == 0:
        if not items:
            yield []
        return
    if len(items) < k:
        return
    first, rest = items[0], items[1:]
    # first is the global minimum, so its block always comes first
    for p in _set_partitions(rest, k - 1):
        yield [[first]] + p
    for p in _set_partitions(rest, k):
        for i in range(len(p)):
            blocks = [list(b) for b in p]
            blocks[i] = [first] + blocks[i]
            blocks.sort(key=min)
            yield blocks


class _Enumerator:
    def __init__(self, gens: Sequence[Generator], max_degree: int | None, cap: int):
        self.gens = list(gens)
        self.max_degree = max_degree
        self.cap = cap
        self.count = 0
        self.memo: dict = {}

    def trees(self, size: int, colour: int, budget: int):
        """Shuffle trees on labels 1..size with given output colour and at
        most ``budget`` vertices."""
        key = (size, colour, budget)
        if key in self.memo:
            return self.memo[key]
        out = []
        if size == 1:
            out.append(Leaf(1, colour))
        if budget > 0:
            for g in self.gens:
                if g.output != colour or g.arity > size:
                    continue
                for blocks in _set_partitions(range(1, size + 1), g.arity):
                    self._assemble(g, list(zip(blocks, g.inputs)), budget - 1, out)
        self.memo[key] = out
        self.count += len(out)
        if self.count > self.cap:
            raise ResourceLimit(f"more than {self.cap} monomials enumerated")
        return out

    def _assemble(self, g, choices, budget, out):
        # children share the remaining vertex budget

        def rec(i, remaining, acc):
            if i == len(choices):
                out.append(Vertex(g, acc))
                return
            blk, col = choices[i]
            for t in self.trees(len(blk), col, remaining):
                used = t.degree
                mapping = {j + 1: lab for j, lab in enumerate(blk)}
                rec(i + 1, remaining - used, acc + [relabel(t, mapping)])

        rec(0, budget, [])


def _degree_bound(gens: Sequence[Generator], arity: int) -> int:
    unary = [g for g in gens if g.arity == 1]
    # longest chain in the unary colour graph; a cycle needs an explicit bound
    edges = {}
    for g in unary:
        edges.setdefault(g.inputs[0], set()).add(g.output)
    longest = {}

    def depth(c, stack):
        if c in stack:
            raise ResourceLimit("unary generators form a cycle; pass max_degree")
        if c in longest:
            return longest[c]
        best = 0
        for d in edges.get(c, ()):
            best = max(best, 1 + depth(d, stack | {c}))
        longest[c] = best
        return best

    chain = max((depth(c, frozenset()) for c in list(edges)), default=0)
    return (arity - 1) + (2 * arity - 1) * chain


def enumerate_monomials(
    gens: Sequence[Generator],
    arity: int,
    output: int | None = None,
    colouring: Sequence[int] | None = None,
    max_degree: int | None = None,
    min_degree: int = 0,
    cap: int | None = None,
    colours: Iterable[int] | None = None,
) -> list[Tree]:
    """All shuffle monomials of the given arity matching the filters, sorted
    by canonical serialisation."""
    if arity < 1:
        raise TreeError("arity must be >= 1")
    cap = monomial_cap() if cap is None else cap
    budget = _degree_bound(gens, arity) if max_degree is None else max_degree
    if colours is None:
        colours = sorted({g.output for g in gens} | {c for g in gens for c in g.inputs})
        if output is not None:
            colours = sorted(set(colours) | {output})
    targets = [output] if output is not None else list(colours)
    en = _Enumerator(gens, max_degree, cap)
    out = []
    for col in targets:
        for t in en.trees(arity, col, budget):
            if t.degree < min_degree:
                continue
            if colouring is not None and input_colouring(t) != tuple(colouring):
                continue
            out.append(t)
    out.sort(key=str)
    return out


def colour_mixing_monomials(gens: Sequence[Generator]) -> list[Tree]:
    """Quadratic monomials ``a ∘_l b`` (all shuffles) that violate colour
    matching, built in the colour-blind free shuffle operad."""
    out = set()
    for a in gens:
        for b in gens:
            for l, col in enumerate(a.inputs, start=1):
                if b.output == col:
                    continue
                for t in shuffle_grafts(corolla(a), l, corolla(b), check_colours=False):
                    out.add(t)
    return sorted(out, key=str)
