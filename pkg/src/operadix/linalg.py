"""Exact sparse Gaussian elimination over the rationals.

Rows are dicts ``column -> Fraction`` (or dense lists, converted on entry).
Column order is the integer order, so callers index columns by descending
monomial order to make pivots coincide with leading terms.
"""
from __future__ import annotations

import heapq
from fractions import Fraction


def _sparse(row) -> dict[int, Fraction]:
    if isinstance(row, dict):
        return {c: Fraction(v) for c, v in row.items() if v}
    return {j: Fraction(v) for j, v in enumerate(row) if v}


class Eliminator:
    """Incremental echelon form: add rows one at a time; each pivot row is
    monic with its pivot as smallest column."""

    def __init__(self):
        self.pivots: dict[int, dict[int, Fraction]] = {}
        self.origin: dict[int, int] = {}
        self._count = 0

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row) -> dict[int, Fraction]:
        r = _sparse(row)
        heap = list(r)
        heapq.heapify(heap)
        done = set()
        while heap:
            c = heapq.heappop(heap)
            if c in done:
                continue
            done.add(c)
            v = r.get(c)
            if not v or c not in self.pivots:
                continue
            for k, w in self.pivots[c].items():
                x = r.get(k, 0) - v * w
                if x:
                    if k not in r:
                        heapq.heappush(heap, k)
                    r[k] = x
                else:
                    r.pop(k, None)
        return r

    def add(self, row) -> bool:
        """Add a row; True if it raised the rank."""
        idx = self._count
        self._count += 1
        r = self.reduce(row)
        if not r:
            return False
        p = min(r)
        inv = 1 / r[p]
        self.pivots[p] = {k: v * inv for k, v in r.items()}
        self.origin[p] = idx
        return True

    def reduced_rows(self):
        """Fully reduced rows sorted by pivot, with pivots and origins."""
        cols = sorted(self.pivots)
        rows = {c: dict(self.pivots[c]) for c in cols}
        for c in reversed(cols):
            for d in cols:
                if d >= c:
                    break
                v = rows[d].get(c)
                if v:
                    for k, w in rows[c].items():
                        x = rows[d].get(k, 0) - v * w
                        if x:
                            rows[d][k] = x
                        else:
                            rows[d].pop(k, None)
        return [rows[c] for c in cols], cols, [self.origin[c] for c in cols]


def row_echelon(rows, track: bool = False):
    """Reduced row echelon form of dense or sparse rows.

    Returns dense rows when the input was dense.  With ``track`` also the
    pivot columns and, for each pivot, the index of the input row that first
    produced it."""
    rows = list(rows)
    dense_width = None
    if rows and not isinstance(rows[0], dict):
        dense_width = len(rows[0])
    el = Eliminator()
    for r in rows:
        el.add(r)
    red, piv, origin = el.reduced_rows()
    if dense_width is not None:
        red = [[r.get(j, Fraction(0)) for j in range(dense_width)] for r in red]
    if track:
        return red, piv, origin
    return red


def rank(rows) -> int:
    el = Eliminator()
    for r in rows:
        el.add(r)
    return el.rank


def nullspace(rows, width: int):
    """Basis of {x : row . x = 0 for all rows} as dense lists."""
    el = Eliminator()
    for r in rows:
        el.add(r)
    red, piv, _ = el.reduced_rows()
    free = [j for j in range(width) if j not in set(piv)]
    basis = []
    for f in free:
        x = [Fraction(0)] * width
        x[f] = Fraction(1)
        for r, p in zip(red, piv):
            v = r.get(f)
            if v:
                x[p] = -v
        basis.append(x)
    return basis


def solve_in_span(vectors, target):
    """Coefficients c with sum c_i v_i = target, or None."""
    vectors = [_sparse(v) for v in vectors]
    target = _sparse(target)
    # eliminate on augmented columns: tag each vector with an identity part
    n = len(vectors)
    cols = sorted({c for v in vectors for c in v} | set(target))
    index = {c: i for i, c in enumerate(cols)}
    width = len(cols)
    el = Eliminator()
    for i, v in enumerate(vectors):
        row = {index[c]: x for c, x in v.items()}
        row[width + i] = Fraction(1)
        el.add(row)
    t = el.reduce({index[c]: x for c, x in target.items()})
    if any(c < width for c in t):
        return None
    # t now equals target minus a combination; read the combination off the tags
    coeffs = [Fraction(0)] * n
    for c, x in t.items():
        coeffs[c - width] = -x
    return coeffs
