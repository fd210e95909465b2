from fractions import Fraction

from hypothesis import given, strategies as st

from operadix.linalg import Eliminator, nullspace, rank, row_echelon, solve_in_span

small = st.integers(-3, 3).map(Fraction)


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_cols).flatmap(
        lambda w: st.lists(st.lists(small, min_size=w, max_size=w), min_size=0, max_size=max_rows).map(lambda rows: (rows, w))
    )


def dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def test_rank_examples():
    assert rank([[1, 2], [2, 4]]) == 1
    assert rank([[1, 0], [0, 1], [1, 1]]) == 2
    assert rank([]) == 0


def test_row_echelon_dense():
    red = row_echelon([[2, 4], [1, 3]])
    assert red == [[1, 0], [0, 1]]


def test_solve_in_span_example():
    c = solve_in_span([[1, 1, 0], [0, 1, 1]], [1, 2, 1])
    assert c is not None
    assert solve_in_span([[1, 1, 0]], [0, 0, 1]) is None


@given(matrices())
def test_rank_nullity(m):
    rows, w = m
    ns = nullspace(rows, w)
    assert rank(rows) + len(ns) == w
    for x in ns:
        assert all(dot(r, x) == 0 for r in rows)
    assert rank(ns) == len(ns)


@given(matrices())
def test_rank_is_transpose_invariant(m):
    rows, w = m
    if rows:
        cols = [list(c) for c in zip(*rows)]
        assert rank(rows) == rank(cols)


@given(matrices(), st.lists(small, min_size=5, max_size=5))
def test_solve_roundtrip(m, coeffs):
    rows, w = m
    target = [sum(c * r[j] for c, r in zip(coeffs, rows)) for j in range(w)]
    sol = solve_in_span(rows, target)
    assert sol is not None
    got = [Fraction(0)] * w
    for i, c in (sol.items() if isinstance(sol, dict) else enumerate(sol)):
        for j in range(w):
            got[j] += c * rows[i][j]
    assert got == target


@given(matrices())
def test_eliminator_add_reports_independence(m):
    rows, _ = m
    el = Eliminator()
    added = sum(el.add(r) for r in rows)
    assert added == el.rank == rank(rows)
