"""Truncated multivariate exponential generating series.

A series component is a dict ``exponent vector -> Fraction`` holding the
ordinary coefficient of t1^m1...td^md, so a dimension d at weights m
contributes d / (m1!...md!).  Closed forms are read with the ``ast`` module
and evaluated over truncated power series.
"""
from __future__ import annotations

import ast
import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, prod
from typing import Mapping, Sequence


class SeriesError(ValueError):
    pass


Coeffs = dict  # tuple[int, ...] -> Fraction


def _total(e):
    return sum(e)


def _clean(c: Mapping, N: int) -> Coeffs:
    return {e: Fraction(v) for e, v in c.items() if v and _total(e) <= N}


def _add(a: Coeffs, b: Coeffs, s=1) -> Coeffs:
    out = dict(a)
    for e, v in b.items():
        w = out.get(e, 0) + s * v
        if w:
            out[e] = w
        else:
            out.pop(e, None)
    return out


def _mul(a: Coeffs, b: Coeffs, N: int) -> Coeffs:
    out: Coeffs = {}
    for ea, va in a.items():
        ta = _total(ea)
        for eb, vb in b.items():
            if ta + _total(eb) > N:
                continue
            e = tuple(x + y for x, y in zip(ea, eb))
            w = out.get(e, 0) + va * vb
            if w:
                out[e] = w
            else:
                out.pop(e, None)
    return out


def _scale(a: Coeffs, c) -> Coeffs:
    c = Fraction(c)
    return {e: v * c for e, v in a.items()} if c else {}


def _const(d: int, c=1) -> Coeffs:
    return {(0,) * d: Fraction(c)} if c else {}


def _split(a: Coeffs, d: int):
    zero = (0,) * d
    c0 = a.get(zero, Fraction(0))
    rest = {e: v for e, v in a.items() if e != zero}
    return c0, rest


def _power_sum(rest: Coeffs, coeffs: Sequence[Fraction], d: int, N: int) -> Coeffs:
    """sum_k coeffs[k] * rest^k for a constant-free ``rest``."""
    out: Coeffs = {}
    p = _const(d)
    for k, c in enumerate(coeffs):
        if k > N or not p:
            break
        if c:
            out = _add(out, _scale(p, c))
        p = _mul(p, rest, N)
    return out


def _inverse(a: Coeffs, d: int, N: int) -> Coeffs:
    c0, rest = _split(a, d)
    if not c0:
        raise SeriesError("division by a series without constant term")
    # 1/(c0 + r) = (1/c0) sum (-r/c0)^k
    r = _scale(rest, -1 / c0)
    return _scale(_power_sum(r, [Fraction(1)] * (N + 1), d, N), 1 / c0)


def _exp(a: Coeffs, d: int, N: int) -> Coeffs:
    c0, rest = _split(a, d)
    if c0:
        raise SeriesError("exp needs an argument without constant term")
    return _power_sum(rest, [Fraction(1, factorial(k)) for k in range(N + 1)], d, N)


def _log(a: Coeffs, d: int, N: int) -> Coeffs:
    c0, rest = _split(a, d)
    if c0 != 1:
        raise SeriesError("log needs an argument with constant term 1")
    coeffs = [Fraction(0)] + [Fraction((-1) ** (k + 1), k) for k in range(1, N + 1)]
    return _power_sum(rest, coeffs, d, N)


@dataclass
class TruncatedEGF:
    """One truncated series per output colour."""

    ncolours: int
    N: int
    components: list  # list[Coeffs]
    names: tuple = ()

    def __post_init__(self):
        if len(self.components) != self.ncolours:
            raise SeriesError("one component per colour is required")
        self.components = [_clean(c, self.N) for c in self.components]
        for c in self.components:
            for e in c:
                if len(e) != self.ncolours:
                    raise SeriesError(f"exponent {e} has the wrong length")

    def coefficient(self, colour: int, exps) -> Fraction:
        return self.components[colour].get(tuple(exps), Fraction(0))

    def dimension(self, colour: int, exps) -> Fraction:
        exps = tuple(exps)
        return self.coefficient(colour, exps) * prod(factorial(m) for m in exps)

    def truncate(self, N: int) -> "TruncatedEGF":
        return TruncatedEGF(self.ncolours, min(N, self.N), self.components, self.names)

    def __eq__(self, other):
        return (
            isinstance(other, TruncatedEGF)
            and self.ncolours == other.ncolours
            and self.N == other.N
            and self.components == other.components
        )

    def table_lines(self, min_total=1):
        """Lines ``(m1,...,md | colour) : dim``."""
        lines = []
        for e in exponent_vectors(self.ncolours, self.N, min_total):
            for c in range(self.ncolours):
                d = self.dimension(c, e)
                col = self.names[c] if self.names else str(c + 1)
                lines.append(f"({','.join(map(str, e))} | {col}) : {d}")
        return lines


def exponent_vectors(d: int, N: int, min_total: int = 0):
    for total in range(min_total, N + 1):
        for e in itertools.product(range(total + 1), repeat=d):
            if sum(e) == total:
                yield e


def series_from_dimensions(table: Mapping, ncolours: int, N: int, names=()) -> TruncatedEGF:
    """``table[(weights, colour)] = dim``; every weight vector of total
    1..N must be present for every colour."""
    comps = [dict() for _ in range(ncolours)]
    for e in exponent_vectors(ncolours, N, 1):
        for c in range(ncolours):
            if (e, c) not in table:
                raise SeriesError(f"dimension table misses weights {e} for colour {c}")
            d = table[(e, c)]
            if d:
                comps[c][e] = Fraction(d, prod(factorial(m) for m in e))
    return TruncatedEGF(ncolours, N, comps, tuple(names))


def identity_series(ncolours: int, N: int) -> TruncatedEGF:
    comps = []
    for c in range(ncolours):
        e = tuple(1 if j == c else 0 for j in range(ncolours))
        comps.append({e: Fraction(1)})
    return TruncatedEGF(ncolours, N, comps)


def compose_series(F: TruncatedEGF, G: TruncatedEGF, N: int | None = None) -> TruncatedEGF:
    """Substitute t_j -> G_j in every component of F."""
    if F.ncolours != G.ncolours:
        raise SeriesError("palettes differ")
    d = F.ncolours
    N = min(F.N, G.N) if N is None else N
    zero = (0,) * d
    for c in G.components:
        if c.get(zero):
            raise SeriesError("inner series has a nonzero constant term")
    # powers of each G_j, computed lazily
    powers = [[_const(d)] for _ in range(d)]

    def power(j, k):
        while len(powers[j]) <= k:
            powers[j].append(_mul(powers[j][-1], G.components[j], N))
        return powers[j][k]

    comps = []
    for comp in F.components:
        out: Coeffs = {}
        for e, v in comp.items():
            if _total(e) > N:
                continue
            term = _const(d, v)
            for j, k in enumerate(e):
                if k:
                    term = _mul(term, power(j, k), N)
                    if not term:
                        break
            out = _add(out, term)
        comps.append(out)
    return TruncatedEGF(d, N, comps, F.names)


def combine_components(parts: Sequence[tuple[TruncatedEGF, int]]) -> TruncatedEGF:
    """Series whose k-th component is component ``parts[k][1]`` of
    ``parts[k][0]``: the collection (P; Q) built colour by colour."""
    d = len(parts)
    N = min(s.N for s, _ in parts)
    return TruncatedEGF(d, N, [s.components[c] for s, c in parts])


def compare(a: TruncatedEGF, b: TruncatedEGF):
    """Differences as (colour, exponents, coefficient a, coefficient b)."""
    N = min(a.N, b.N)
    out = []
    for c in range(a.ncolours):
        keys = {e for e in a.components[c] if _total(e) <= N} | {e for e in b.components[c] if _total(e) <= N}
        for e in sorted(keys, key=lambda e: (_total(e), e)):
            x, y = a.coefficient(c, e), b.coefficient(c, e)
            if x != y:
                out.append((c, e, x, y))
    return out


# --- closed forms ---------------------------------------------------------------

_FUNCS = {"exp", "log", "ln"}


def _variables(ncolours: int, names=()):
    table = {f"t{k + 1}": k for k in range(ncolours)}
    return table


def parse_expr(text: str) -> ast.expr:
    """Parse an infix series expression; ``^`` is a power."""
    src = text.replace("^", "**").replace("−", "-")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as e:
        raise SeriesError(f"syntax error in series expression at column {e.offset}: {text!r}") from None
    _validate(tree.body, text)
    return tree.body


def _validate(node, text):
    ok = (ast.BinOp, ast.UnaryOp, ast.Call, ast.Name, ast.Constant)
    if not isinstance(node, ok):
        raise SeriesError(f"unsupported construct {type(node).__name__} in {text!r}")
    if isinstance(node, ast.BinOp):
        if not isinstance(node.op, (ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow)):
            raise SeriesError(f"unsupported operator in {text!r}")
        _validate(node.left, text)
        _validate(node.right, text)
    elif isinstance(node, ast.UnaryOp):
        if not isinstance(node.op, (ast.USub, ast.UAdd)):
            raise SeriesError(f"unsupported operator in {text!r}")
        _validate(node.operand, text)
    elif isinstance(node, ast.Call):
        if not isinstance(node.func, ast.Name) or node.func.id not in _FUNCS or len(node.args) != 1 or node.keywords:
            raise SeriesError(f"only exp(x) and log(x) are allowed in {text!r}")
        _validate(node.args[0], text)
    elif isinstance(node, ast.Constant):
        if not isinstance(node.value, (int, float)) or isinstance(node.value, bool):
            raise SeriesError(f"bad constant in {text!r}")


def eval_expr(expr, ncolours: int, N: int) -> Coeffs:
    if isinstance(expr, str):
        expr = parse_expr(expr)
    d = ncolours
    names = _variables(d)

    def ev(node):
        if isinstance(node, ast.Constant):
            return _const(d, Fraction(str(node.value)) if isinstance(node.value, float) else node.value)
        if isinstance(node, ast.Name):
            if node.id not in names:
                raise SeriesError(f"unknown variable {node.id!r}")
            e = tuple(1 if j == names[node.id] else 0 for j in range(d))
            return {e: Fraction(1)}
        if isinstance(node, ast.UnaryOp):
            v = ev(node.operand)
            return _scale(v, -1) if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.Call):
            v = ev(node.args[0])
            return _exp(v, d, N) if node.func.id == "exp" else _log(v, d, N)
        a = ev(node.left)
        if isinstance(node.op, ast.Pow):
            if not isinstance(node.right, ast.Constant) or not isinstance(node.right.value, int) or node.right.value < 0:
                raise SeriesError("only non-negative integer powers are supported")
            out = _const(d)
            for _ in range(node.right.value):
                out = _mul(out, a, N)
            return out
        b = ev(node.right)
        if isinstance(node.op, ast.Add):
            return _add(a, b)
        if isinstance(node.op, ast.Sub):
            return _add(a, b, -1)
        if isinstance(node.op, ast.Mult):
            return _mul(a, b, N)
        return _mul(a, _inverse(b, d, N), N)

    return _clean(ev(expr), N)


def eval_closed_form(exprs: Sequence, ncolours: int, N: int) -> TruncatedEGF:
    """One expression per output colour."""
    if len(exprs) != ncolours:
        raise SeriesError(f"expected {ncolours} components, got {len(exprs)}")
    return TruncatedEGF(ncolours, N, [eval_expr(e, ncolours, N) for e in exprs])
