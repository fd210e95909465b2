"""Command-line front end.

Exit codes: 0 ok, 1 a check failed (the discrepancy is printed), 2 usage or
parse error, 3 a resource bound was exceeded.
"""
from __future__ import annotations

import argparse
import random
import sys
from fractions import Fraction
from math import factorial, prod

from . import catalogue as cat
from .completion import CompletionError, buchberger, dimension_table, is_quadratic_groebner, normal_monomials
from .dsl import DSLError, format_presentation, format_term, shuffle_document
from .koszul import PLUS, SIGNED, KoszulError, quadratic_dual
from .polynomials import format_poly
from .replay import RuleBook, pair_reductions, render_reductions, replay
from .series import SeriesError, compare, eval_expr, series_from_dimensions, TruncatedEGF
from .trees import ResourceLimit, TreeError

OK, FAILED, USAGE, RESOURCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class Output:
    """Collects text or ``key: value`` lines."""

    def __init__(self, fmt, stream):
        self.fmt = fmt
        self.stream = stream

    @property
    def structured(self):
        return self.fmt == "structured"

    def line(self, text=""):
        print(text, file=self.stream)

    def kv(self, key, value):
        if self.structured:
            print(f"{key}: {value}", file=self.stream)
        else:
            print(f"{key.replace('_', ' ')}: {value}", file=self.stream)


def _positive(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if v < 1:
        raise argparse.ArgumentTypeError("bounds must be positive")
    return v


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "structured"), default="text")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    common.add_argument("--jobs", type=_positive, default=1, help="worker processes for completion")

    with_operad = argparse.ArgumentParser(add_help=False, parents=[common])
    with_operad.add_argument("--operad", required=True, help="built-in name or path to an .opd file")

    p = argparse.ArgumentParser(prog="operadix", description="Groebner bases for coloured shuffle operads")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("list", parents=[common], help="list the built-in operads")

    q = sub.add_parser("gb", parents=[with_operad], help="run Buchberger completion")
    q.add_argument("--max-degree", type=_positive, default=3)
    q.add_argument("--verbose", action="store_true", help="print the per-pair log")
    q.add_argument("--basis", action="store_true", help="print the resulting basis")

    q = sub.add_parser("certify", parents=[with_operad], help="check for a quadratic Groebner basis")
    q.add_argument("--verbose", action="store_true")

    q = sub.add_parser("dims", parents=[with_operad], help="dimension table from normal forms")
    q.add_argument("--max-arity", type=_positive, default=4)
    q.add_argument("--figure", metavar="PATH")

    q = sub.add_parser("series", parents=[with_operad], help="compare generating series")
    q.add_argument("--compare", choices=("closed-form", "composition"), default="closed-form")
    q.add_argument("--trunc", type=_positive, default=5)
    q.add_argument("--figure", metavar="PATH")

    q = sub.add_parser("trace", parents=[with_operad], help="S-polynomial reductions of a relation pair")
    q.add_argument("--pair", required=True, metavar="L1,L2")
    q.add_argument("--printed", action="store_true", help="replay the stored printed traces for the pair")

    q = sub.add_parser("normal-forms", parents=[with_operad], help="list normal monomials")
    q.add_argument("--arity", type=_positive, required=True)
    q.add_argument("--colouring", help="comma separated input colours (default: every standard colouring)")
    q.add_argument("--output", dest="out_colour", help="output colour (default: all)")

    q = sub.add_parser("koszul-dual", parents=[with_operad], help="emit the quadratic dual in the DSL")
    q.add_argument("--pairing", choices=(SIGNED, PLUS), default=SIGNED)

    sub.add_parser("expand", parents=[with_operad], help="emit the shuffle relations with labels")
    return p


def _entry(args):
    try:
        return cat.load(args.operad)
    except cat.CatalogueError as e:
        raise UsageError(str(e)) from None


def _fmt_term(entry):
    display = entry.display
    return lambda t: format_term(t, display)


def _gb(entry, args, max_degree=3):
    sp = entry.shuffle()
    if sp.ordering is None:
        raise UsageError(f"{entry.name} declares no ordering")
    return sp, buchberger(sp.relations, sp.ordering, max_degree=max_degree, jobs=args.jobs)


def cmd_list(args, out):
    for name in cat.names():
        e = cat.builtin(name)
        sp = e.shuffle()
        if out.structured:
            out.kv(f"operad.{name}", f"colours={','.join(e.doc.colours)} generators={len(sp.generators)} relations={len(sp.relations)}")
        else:
            out.line(f"{name:8} colours {', '.join(e.doc.colours):8} {len(sp.generators)} shuffle generators, {len(sp.relations)} relations")
    return OK


def _report(out, report, verbose):
    for line in report.summary_lines():
        key, value = line.split(": ", 1)
        out.kv(key.replace(" ", "_") if out.structured else key, value)
    if verbose:
        for o in report.log:
            out.kv("pair", str(o)) if out.structured else out.line(str(o))


def cmd_gb(args, out):
    entry = _entry(args)
    sp, gb = _gb(entry, args, args.max_degree)
    _report(out, gb.report, args.verbose)
    if args.basis:
        fmt = _fmt_term(entry)
        for label, p in gb.elements:
            text = format_poly(p, sp.ordering, fmt)
            out.kv(f"basis.{label}", text) if out.structured else out.line(f"{label}: {text}")
    return OK


def cmd_certify(args, out):
    entry = _entry(args)
    sp = entry.shuffle()
    if sp.ordering is None:
        raise UsageError(f"{entry.name} declares no ordering")
    try:
        report = is_quadratic_groebner(sp.relations, sp.ordering)
    except CompletionError as e:
        out.line(f"not quadratic: {e}")
        return FAILED
    _report(out, report, args.verbose)
    out.kv("certified", "yes" if report.certified else "no")
    return OK if report.certified else FAILED


def _dims_series(entry, args, N):
    sp, gb = _gb(entry, args)
    table = dimension_table(gb, sp.generators, len(entry.doc.colours), N)
    return series_from_dimensions(table, len(entry.doc.colours), N, entry.doc.colours), gb


def cmd_dims(args, out):
    from .plotting import plot_dimensions

    entry = _entry(args)
    s, gb = _dims_series(entry, args, args.max_arity)
    if not gb.report.certified:
        out.line(f"warning: the basis is not certified ({gb.report.new_elements_added} new elements)")
    for line in s.table_lines():
        if out.structured:
            key, value = line.split(" : ")
            out.kv(f"dim{key.replace(' ', '')}", value)
        else:
            out.line(line)
    if args.figure:
        plot_dimensions(s, args.figure, title=f"{entry.name}: dimensions up to arity {args.max_arity}")
        out.kv("figure", args.figure)
    return OK


def _fmt_exps(entry, c, e):
    return f"({','.join(map(str, e))} | {entry.doc.colours[c]})"


def cmd_series(args, out):
    from .plotting import plot_comparison

    entry = _entry(args)
    N = args.trunc
    ncol = len(entry.doc.colours)
    computed, _ = _dims_series(entry, args, N)
    failed = False
    if args.compare == "closed-form":
        exprs = entry.expected_series()
        if not exprs:
            raise UsageError(f"{entry.name} states no closed-form series")
        comps = []
        for c, text in enumerate(exprs):
            try:
                comps.append(eval_expr(text, ncol, N))
            except SeriesError as e:
                failed = True
                comps.append(None)
                out.kv(f"unevaluable.{entry.doc.colours[c]}", f"{text}: {e}")
        expected = None
        if all(c is not None for c in comps):
            expected = TruncatedEGF(ncol, N, comps, entry.doc.colours)
        label = "closed form"
    else:
        dec = cat.decomposition(entry.name)
        if dec is None:
            raise UsageError(f"no decomposition is known for {entry.name}")
        desc, fn = dec
        expected = fn(N)
        out.kv("decomposition", desc)
        label = desc
    diffs = []
    if expected is not None:
        diffs = compare(computed, expected)
    else:
        # compare the components that could be evaluated
        for c, comp in enumerate(comps):
            if comp is None:
                continue
            one = TruncatedEGF(ncol, N, [comp if k == c else computed.components[k] for k in range(ncol)])
            diffs += compare(computed, one)
    for c, e, a, b in diffs:
        scale = prod(factorial(m) for m in e)
        out.kv(f"mismatch{_fmt_exps(entry, c, e)}", f"normal forms {Fraction(a) * scale}, {label} {Fraction(b) * scale}")
    failed = failed or bool(diffs)
    out.kv("result", "discrepant" if failed else "match")
    if args.figure:
        plot_comparison(computed, expected, args.figure, title=f"{entry.name} against {label}", expected_label=label)
        out.kv("figure", args.figure)
    return FAILED if failed else OK


def cmd_trace(args, out):
    entry = _entry(args)
    parts = [p.strip() for p in args.pair.split(",")]
    if len(parts) != 2 or not all(parts):
        raise UsageError("--pair takes two labels separated by a comma")
    left, right = parts
    if args.printed:
        traces = [t for t in entry.traces if set(t.pair) == {left, right} or tuple(t.pair) == (left, right)]
        if not traces:
            raise UsageError(f"no printed trace for the pair {left},{right}")
        book = RuleBook(entry)
        bad = False
        for k, t in enumerate(traces):
            res = replay(t, entry, book)
            out.kv(f"trace.{k + 1}.rules", " ".join(res.rules))
            for s in res.steps:
                if not s.ok:
                    out.kv(f"trace.{k + 1}.unjustified", f"{s.rule}: {s.detail}")
            out.kv(f"trace.{k + 1}.ends_in_zero", "yes" if res.ends_in_zero else "no")
            if res.header_ok is not None:
                out.kv(f"trace.{k + 1}.header_matches", "yes" if res.header_ok else "no")
            bad = bad or not res.ok
        return FAILED if bad else OK
    try:
        reductions = pair_reductions(entry, left, right)
    except DSLError as e:
        raise UsageError(str(e)) from None
    if not reductions:
        out.line(f"{left} and {right} have no small common multiple")
        return OK
    out.line(render_reductions(entry, reductions, entry.display))
    return OK if all(not r[-1].result for r in reductions) else FAILED


def cmd_normal_forms(args, out):
    from .completion import standard, weight_vectors

    entry = _entry(args)
    sp, gb = _gb(entry, args)
    cols = entry.doc.colours
    idx = {c: k for k, c in enumerate(cols)}

    def colour(name):
        if name not in idx:
            raise UsageError(f"unknown colour {name!r}")
        return idx[name]

    if args.colouring:
        colourings = [tuple(colour(c.strip()) for c in args.colouring.split(","))]
        if len(colourings[0]) != args.arity:
            raise UsageError("the colouring length must equal the arity")
    else:
        colourings = [standard(w) for w in weight_vectors(len(cols), args.arity, args.arity)]
    outputs = [colour(args.out_colour)] if args.out_colour else list(range(len(cols)))
    fmt = _fmt_term(entry)
    for chi in colourings:
        for c in outputs:
            trees = normal_monomials(gb, sp.generators, args.arity, chi, c)
            head = f"({','.join(cols[k] for k in chi)} | {cols[c]})"
            if out.structured:
                out.kv(f"count{head.replace(' ', '')}", len(trees))
                for t in trees:
                    out.kv(f"normal{head.replace(' ', '')}", fmt(t))
            else:
                out.line(f"{head} : {len(trees)}")
                for t in trees:
                    out.line(f"  {fmt(t)}")
    return OK


def cmd_koszul_dual(args, out):
    entry = _entry(args)
    sp = entry.shuffle()
    try:
        dual = quadratic_dual(sp, pairing=args.pairing)
    except KoszulError as e:
        out.line(f"not quadratic: {e}")
        return FAILED
    out.stream.write(format_presentation(shuffle_document(dual)))
    return OK


def cmd_expand(args, out):
    entry = _entry(args)
    sp = entry.shuffle()
    doc = shuffle_document(sp, name=entry.name)
    doc.display = dict(entry.doc.display)
    out.stream.write(format_presentation(doc))
    return OK


COMMANDS = {
    "list": cmd_list,
    "gb": cmd_gb,
    "certify": cmd_certify,
    "dims": cmd_dims,
    "series": cmd_series,
    "trace": cmd_trace,
    "normal-forms": cmd_normal_forms,
    "koszul-dual": cmd_koszul_dual,
    "expand": cmd_expand,
}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return USAGE if e.code else OK
    random.seed(args.seed)
    out = Output(args.format, stdout)
    try:
        return COMMANDS[args.command](args, out)
    except ResourceLimit as e:
        print(f"resource limit: {e}", file=stderr)
        return RESOURCE
    except (UsageError, DSLError, cat.CatalogueError, TreeError) as e:
        print(f"error: {e}", file=stderr)
        return USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
