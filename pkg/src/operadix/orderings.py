"""Admissible orderings of shuffle tree monomials.

Every ordering here is realised by a sort key: ``a < b`` iff ``key(a) <
key(b)``.  Two families are provided:

* :class:`PathLex` compares arity, then the vector of root-to-leaf words
  (degree-lexicographic, leaf 1 first), then the leaf permutation in
  the opposite of lexicographic order;
* :class:`TieredQM` rewrites each root-to-leaf word in a quantum-monomial
  normal form (heaviest tier first, one factor of ``q`` per lighter letter
  moved past a heavier one) and compares tier degrees, tier subwords and the
  ``q``-exponent with configurable polarities.  Ties are broken by a PathLex
  fallback, and :meth:`TieredQM.compare` reports when that happened.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from .trees import (
    ColourMismatch,
    InvalidShuffle,
    Leaf,
    Tree,
    enumerate_monomials,
    leaf_colours,
    shuffle_grafts,
    signature,
)


class OrderingError(ValueError):
    pass


@dataclass(frozen=True)
class PathFingerprint:
    words: tuple[tuple[str, ...], ...]
    permutation: tuple[int, ...]

    def __str__(self):
        ws = ", ".join("".join(w) for w in self.words)
        return f"(({ws}) | ({''.join(map(str, self.permutation))}))"


def path_words(tree: Tree) -> tuple[tuple[str, ...], ...]:
    """Root-to-leaf generator words, indexed by leaf label."""
    words: dict[int, tuple[str, ...]] = {}

    def walk(t, prefix):
        if isinstance(t, Leaf):
            words[t.label] = prefix
        else:
            p = prefix + (t.gen.name,)
            for c in t.children:
                walk(c, p)

    walk(tree, ())
    return tuple(words[k] for k in range(1, tree.arity + 1))


def path_fingerprint(tree: Tree) -> PathFingerprint:
    return PathFingerprint(path_words(tree), tree.labels)


class Ordering:
    """Base class: subclasses implement :meth:`key`."""

    def key(self, tree: Tree):
        raise NotImplementedError

    def compare(self, a: Tree, b: Tree) -> tuple[int, bool]:
        """(-1 | 0 | 1, fallback_used)."""
        ka, kb = self.key(a), self.key(b)
        return (ka > kb) - (ka < kb), False

    def less(self, a: Tree, b: Tree) -> bool:
        return self.key(a) < self.key(b)

    def max(self, trees):
        return max(trees, key=self.key)

    def sort_desc(self, trees):
        return sorted(trees, key=self.key, reverse=True)

    def reversed(self) -> "Ordering":
        return Reversed(self)

    @property
    def generators(self) -> set[str]:
        raise NotImplementedError


class _Rev:
    """Wrapper inverting the comparison of a key."""

    __slots__ = ("k",)

    def __init__(self, k):
        self.k = k

    def __lt__(self, other):
        return other.k < self.k

    def __gt__(self, other):
        return other.k > self.k

    def __eq__(self, other):
        return self.k == other.k

    def __le__(self, other):
        return other.k <= self.k

    def __ge__(self, other):
        return other.k >= self.k

    def __hash__(self):
        return hash(self.k)


@dataclass(frozen=True)
class Reversed(Ordering):
    """The opposite ordering (used for Koszul duals).  Arity still comes
    first, so only monomials of equal arity are compared in reverse."""

    base: Ordering

    def key(self, tree):
        return (tree.arity, _Rev(self.base.key(tree)))

    def compare(self, a, b):
        c, fb = self.base.compare(a, b)
        if a.arity != b.arity:
            return (1 if a.arity > b.arity else -1), False
        return -c, fb

    def reversed(self):
        return self.base

    @property
    def generators(self):
        return self.base.generators

    def renamed(self, mapping):
        return Reversed(self.base.renamed(mapping))


def _perm_key(perm: Sequence[int], mode: str):
    if mode == "revlex":
        # compare from the last position, larger is smaller (not admissible)
        return tuple(-x for x in reversed(perm))
    if mode == "lex":
        return tuple(perm)
    if mode == "antilex":
        # the opposite of lexicographic order: the default
        return tuple(-x for x in perm)
    if mode == "colex":
        return tuple(reversed(perm))
    raise OrderingError(f"unknown permutation mode {mode!r}")


@dataclass(frozen=True)
class PathLex(Ordering):
    """Path-lexicographic ordering; ``order`` lists generators ascending."""

    order: tuple[str, ...]
    perm_mode: str = "antilex"

    def __post_init__(self):
        if len(set(self.order)) != len(self.order):
            raise OrderingError("duplicate generator in path-lexicographic order")
        object.__setattr__(self, "_rank", {g: i for i, g in enumerate(self.order)})

    @property
    def generators(self):
        return set(self.order)

    def word_key(self, word):
        try:
            return (len(word), tuple(self._rank[g] for g in word))
        except KeyError as e:
            raise OrderingError(f"generator {e.args[0]} missing from ordering") from None

    def key(self, tree):
        return _cached_key(self, tree)

    def _key(self, tree):
        words = path_words(tree)
        return (tree.arity, tuple(self.word_key(w) for w in words), _perm_key(tree.labels, self.perm_mode))

    def renamed(self, mapping):
        return PathLex(tuple(mapping[g] for g in self.order), self.perm_mode)


@lru_cache(maxsize=1 << 18)
def _cached_key(ordering, tree):
    return ordering._key(tree)


GREATER = "greater"  # larger value makes the monomial greater
SMALLER = "smaller"  # larger value makes the monomial smaller


def _sign(polarity: str) -> int:
    if polarity == GREATER:
        return 1
    if polarity == SMALLER:
        return -1
    raise OrderingError(f"unknown polarity {polarity!r}")


@dataclass(frozen=True)
class Tier:
    """A group of generators treated as one letter type.

    ``lex`` lists the tier's generators in ascending lexicographic order,
    ``degree`` says how the tier degree counts and ``lex_mode`` how the
    tier subword is compared once degrees agree (``greater``: usual lex,
    ``smaller``: inverted, ``none``: skipped).  ``weights`` optionally gives
    a per-generator weight used instead of the plain letter count.
    """

    name: str
    lex: tuple[str, ...]
    degree: str = GREATER
    lex_mode: str = GREATER
    weights: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        if not self.lex:
            raise OrderingError(f"tier {self.name} is empty")
        _sign(self.degree)
        if self.lex_mode != "none":
            _sign(self.lex_mode)


@dataclass(frozen=True)
class QMWord:
    """Quantum-monomial normal form of a word: tier subwords (heaviest tier
    first) and the q-exponent."""

    parts: tuple[tuple[str, ...], ...]
    q: int

    def __str__(self):
        letters = [g for p in self.parts for g in p]
        out = []
        for g in letters:
            if out and out[-1][0] == g:
                out[-1][1] += 1
            else:
                out.append([g, 1])
        text = "·".join(g if k == 1 else f"{g}^{k}" for g, k in out)
        return f"{text}·q^{self.q}" if text else f"q^{self.q}"


@dataclass(frozen=True)
class TieredQM(Ordering):
    """Tiered quantum-monomial ordering.

    ``tiers`` run from heaviest to lightest.  When ``counts`` is given (one
    polarity per tier) the number of vertices in each tier is compared
    first; being additive under composition this keeps the ordering
    admissible.  Then the root-to-leaf words are compared leaf by leaf
    (leaf 1 first) via their normal forms, and finally the PathLex fallback
    decides.
    """

    tiers: tuple[Tier, ...]
    q_polarity: str = GREATER
    fallback: PathLex | None = None
    counts: tuple[str, ...] = ()

    def __post_init__(self):
        if self.counts and len(self.counts) != len(self.tiers):
            raise OrderingError("one count polarity per tier is required")
        for c in self.counts:
            _sign(c)
        seen = {}
        for k, t in enumerate(self.tiers):
            for g in t.lex:
                if g in seen:
                    raise OrderingError(f"generator {g} appears in two tiers")
                seen[g] = k
        object.__setattr__(self, "_tier_of", seen)
        object.__setattr__(self, "_lex_rank", {g: i for t in self.tiers for i, g in enumerate(t.lex)})
        _sign(self.q_polarity)
        fb = self.fallback
        if fb is None:
            fb = PathLex(tuple(g for t in reversed(self.tiers) for g in t.lex))
            object.__setattr__(self, "fallback", fb)
        if set(fb.order) != set(seen):
            raise OrderingError("fallback must order exactly the tiered generators")

    @property
    def generators(self):
        return set(self._tier_of)

    def normal_form(self, word: Sequence[str]) -> QMWord:
        parts = [[] for _ in self.tiers]
        q = 0
        seen = [0] * len(self.tiers)
        for g in word:
            try:
                k = self._tier_of[g]
            except KeyError:
                raise OrderingError(f"generator {g} belongs to no tier") from None
            # every earlier letter of a lighter tier must be moved past g
            q += sum(seen[j] for j in range(k + 1, len(self.tiers)))
            seen[k] += 1
            parts[k].append(g)
        return QMWord(tuple(tuple(p) for p in parts), q)

    def word_key(self, word):
        nf = self.normal_form(word)
        steps = []
        for t, part in zip(self.tiers, nf.parts):
            sign = _sign(t.degree)
            if t.weights:
                # weighted degree, then length, keeps this a monoid order
                w = dict(t.weights)
                steps.append(sign * sum(w.get(g, 1) for g in part))
            steps.append(sign * len(part))
            if t.lex_mode != "none":
                s = _sign(t.lex_mode)
                steps.append(tuple(s * self._lex_rank[g] for g in part))
        steps.append(_sign(self.q_polarity) * nf.q)
        return tuple(steps)

    def primary_key(self, tree):
        return _cached_primary(self, tree)

    def _primary(self, tree):
        words = tuple(self.word_key(w) for w in path_words(tree))
        if not self.counts:
            return words
        tally = [0] * len(self.tiers)
        for name in _vertex_names(tree):
            tally[self._tier_of[name]] += 1
        return (tuple(_sign(c) * n for c, n in zip(self.counts, tally)), words)

    def key(self, tree):
        return (tree.arity, self.primary_key(tree), self.fallback.key(tree))

    def compare(self, a, b):
        if a == b:
            return 0, False
        if a.arity != b.arity:
            return (1 if a.arity > b.arity else -1), False
        pa, pb = self.primary_key(a), self.primary_key(b)
        if pa != pb:
            return (1 if pa > pb else -1), False
        c, _ = self.fallback.compare(a, b)
        return c, True

    def renamed(self, mapping):
        tiers = tuple(
            Tier(t.name, tuple(mapping[g] for g in t.lex), t.degree, t.lex_mode,
                 tuple((mapping[g], w) for g, w in t.weights))
            for t in self.tiers
        )
        return TieredQM(tiers, self.q_polarity, self.fallback.renamed(mapping), self.counts)


def _vertex_names(tree):
    if isinstance(tree, Leaf):
        return []
    out = [tree.gen.name]
    for c in tree.children:
        out.extend(_vertex_names(c))
    return out


@lru_cache(maxsize=1 << 18)
def _cached_primary(ordering, tree):
    return ordering._primary(tree)


# --- admissibility ------------------------------------------------------------


@dataclass
class AdmissibilityReport:
    checked: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self):
        head = f"checked {self.checked} instances, {len(self.violations)} violations"
        return "\n".join([head] + [f"  {v}" for v in self.violations[:20]])


def _composition_pairs(a, b, gamma, pos, inner: bool):
    """Matching compositions (same slot and shuffle) of a and b with gamma."""
    try:
        if inner:
            xs, ys = shuffle_grafts(gamma, pos, a), shuffle_grafts(gamma, pos, b)
        else:
            xs, ys = shuffle_grafts(a, pos, gamma), shuffle_grafts(b, pos, gamma)
    except (ColourMismatch, InvalidShuffle):
        return []
    # equal arities give the same shuffles in the same order
    return list(zip(xs, ys)) if len(xs) == len(ys) else []


def check_admissibility(
    ordering: Ordering,
    gens,
    arity_bound: int = 4,
    samples: int = 1000,
    seed: int = 0,
    max_degree: int | None = None,
) -> AdmissibilityReport:
    """Check both admissibility clauses.

    The arity clause is checked on the extreme monomials of every pair of
    arities.  Monotonicity is checked on ``samples`` random instances: a pair
    a < b of equal signature and a context gamma, composed on either side,
    with the composite arity at most ``arity_bound``.
    """
    if arity_bound < 2:
        raise OrderingError("arity_bound must be at least 2")
    rng = random.Random(seed)
    report = AdmissibilityReport()
    pool = {}
    for n in range(1, arity_bound + 1):
        deg = max_degree if max_degree is not None else max(n - 1, 1)
        ms = enumerate_monomials(gens, n, max_degree=deg)
        if ms:
            pool[n] = ordering.sort_desc(ms)
    for n in pool:
        for m in pool:
            if n < m:
                report.checked += 1
                if not ordering.less(pool[n][0], pool[m][-1]):
                    report.violations.append(f"arity: {pool[n][0]} !< {pool[m][-1]}")
    groups = {}
    for n, ms in pool.items():
        if n < arity_bound:
            for t in ms:
                groups.setdefault(signature(t), []).append(t)
    groups = [g for g in groups.values() if len(g) >= 2]
    contexts = {n: [t for t in ms if not isinstance(t, Leaf)] for n, ms in pool.items()}
    if not groups:
        return report
    done = attempts = 0
    while done < samples and attempts < 50 * samples:
        attempts += 1
        a, b = rng.sample(rng.choice(groups), 2)
        if ordering.less(b, a):
            a, b = b, a
        room = arity_bound - a.arity + 1
        sizes = [n for n in contexts if 2 <= n <= room and contexts[n]]
        if not sizes:
            continue
        gamma = rng.choice(contexts[rng.choice(sizes)])
        inner = rng.random() < 0.5
        if inner:
            positions = [l for l, c in leaf_colours(gamma).items() if c == a.output]
        else:
            positions = [l for l, c in leaf_colours(a).items() if c == gamma.output]
        if not positions:
            continue
        pos = rng.choice(positions)
        pairs = _composition_pairs(a, b, gamma, pos, inner)
        if not pairs:
            continue
        done += 1
        for x, y in pairs:
            report.checked += 1
            if not ordering.less(x, y):
                side = "inner" if inner else "outer"
                report.violations.append(f"{side}: {a} < {b} but {x} !< {y} (context {gamma}, slot {pos})")
    return report
