"""The ``.opd`` presentation language: parser, formatter and term syntax.

Grammar (``#`` starts a comment)::

    doc        = { statement } ;
    statement  = "operad" NAME ";"
               | "colours" NAME { "," NAME } ";"
               | "shuffle" ";"
               | "display" NAME GLYPH { "," NAME GLYPH } ";"
               | "generator" NAME ":" "(" [ NAME { "," NAME } ] ")" "->" NAME
                     { "," ( "symmetric" | "antisymmetric" | "mirror" NAME ) } ";"
               | "ordering" [ "reverse" ] ( pathlex ";" | tiers )
               | "relation" LABEL ":" poly ";"
               | "series" NAME ":" EXPR ";"
               | "trace" LABEL "," LABEL [ "@" term ] "{" poly { "={" LABEL "}=>" poly } "}" ;
    pathlex    = "pathlex" "[" NAME { "," NAME } "]" [ "perm" MODE ] ;
    tiers      = "tiers" "{" { tierline } "}" ;
    tierline   = "tier" NAME "[" NAME { "," NAME } "]" POLARITY
                     [ "," "lex" ( POLARITY | "none" ) ]
                     [ "," "weights" "(" NAME INT { "," NAME INT } ")" ] ";"
               | "q" POLARITY ";" | "counts" POLARITY { "," POLARITY } ";"
               | "fallback" pathlex ";" ;
    poly       = [ "-" ] mono { ( "+" | "-" ) mono } | "0" ;
    mono       = [ INT [ "/" INT ] "*" ] term ;
    term       = INT | NAME "(" term { "," term } ")" ;

POLARITY is ``greater`` or ``smaller``.  In a symmetric document a free
binary generator gets a mirror (``<name>_op`` unless named); a ``shuffle``
document lists shuffle generators and relations as they are.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .colours import Palette
from .orderings import GREATER, SMALLER, Ordering, PathLex, Reversed, Tier, TieredQM
from .polynomials import Poly
from .symmetrize import (
    ANTISYMMETRIC,
    FREE,
    SYMMETRIC,
    ShufflePresentation,
    SymGenerator,
    SymmetricPresentation,
    SymRelation,
    Provenance,
    expand_generators,
    shuffle_presentation,
    PresentationError,
)
from .trees import Generator, Leaf, Tree, TreeError, Vertex, check_tree

ALIASES = {"α": "alpha", "β": "beta", "B": "beta"}
POLARITIES = (GREATER, SMALLER)


class DSLError(ValueError):
    def __init__(self, message, line=None, col=None):
        self.message = message
        self.line = line
        self.col = col
        where = f"{line}:{col}: " if line is not None else ""
        super().__init__(where + message)


# --- AST -------------------------------------------------------------------------


@dataclass(frozen=True)
class LeafNode:
    label: int
    pos: int = 0


@dataclass(frozen=True)
class OpNode:
    name: str
    args: tuple
    pos: int = 0


@dataclass
class PolyAST:
    terms: list  # (Fraction, node), in source order
    pos: int = 0


@dataclass
class GeneratorAST:
    name: str
    inputs: tuple[str, ...]
    output: str
    symmetry: str = FREE
    mirror: str | None = None
    pos: int = 0


@dataclass
class TierAST:
    name: str
    gens: tuple[str, ...]
    degree: str
    lex: str = GREATER
    weights: tuple[tuple[str, int], ...] = ()


@dataclass
class OrderingAST:
    kind: str  # pathlex | tiers
    reverse: bool = False
    order: tuple[str, ...] = ()
    perm: str = "antilex"
    tiers: list = field(default_factory=list)
    q: str = GREATER
    counts: tuple[str, ...] = ()
    fallback: "OrderingAST | None" = None


@dataclass
class RelationAST:
    label: str
    poly: PolyAST
    pos: int = 0


@dataclass
class TraceAST:
    pair: tuple[str, str]
    scm: object  # term node or None
    start: PolyAST
    steps: list  # (rule label, PolyAST)
    pos: int = 0


@dataclass
class PresentationDoc:
    name: str = ""
    colours: tuple[str, ...] = ()
    shuffle: bool = False
    display: dict = field(default_factory=dict)
    generators: list = field(default_factory=list)
    ordering: OrderingAST | None = None
    relations: list = field(default_factory=list)
    series: list = field(default_factory=list)  # (colour, text)
    traces: list = field(default_factory=list)
    header: tuple[str, ...] = ()  # leading comment lines, kept verbatim
    source: str = ""

    # building -------------------------------------------------------------
    @property
    def palette(self) -> Palette:
        return Palette(self.colours)

    def colour_index(self, name):
        return self.colours.index(name)

    def generator_map(self):
        return {g.name: g for g in self.generators}

    def symmetric(self) -> SymmetricPresentation:
        if self.shuffle:
            raise PresentationError(f"{self.name} is given in shuffle form")
        gens = [
            SymGenerator(g.name, tuple(self.colour_index(c) for c in g.inputs), self.colour_index(g.output), g.symmetry, g.mirror)
            for g in self.generators
        ]
        rels = [SymRelation(r.label, tuple((c, to_sterm(n)) for c, n in r.poly.terms)) for r in self.relations]
        return SymmetricPresentation(self.name, self.palette, gens, rels, self.build_ordering())

    def shuffle_generators(self) -> list[Generator]:
        if self.shuffle:
            return [Generator(g.name, tuple(self.colour_index(c) for c in g.inputs), self.colour_index(g.output)) for g in self.generators]
        return expand_generators(self.symmetric())[0]

    def build_ordering(self) -> Ordering | None:
        return build_ordering(self.ordering) if self.ordering else None

    def shuffle_presentation(self, order=None, basis=True) -> ShufflePresentation:
        order = order or self.build_ordering()
        if not self.shuffle:
            return shuffle_presentation(self.symmetric(), order, basis)
        gens = self.shuffle_generators()
        by_name = {g.name: g for g in gens}
        rels = [(r.label, poly_from_ast(r.poly, by_name)) for r in self.relations]
        prov = {g.name: Provenance(g.name, g.name, tuple(range(g.arity))) for g in gens}
        return ShufflePresentation(self.name, self.palette, gens, prov, rels, order)

    def series_exprs(self):
        """Closed-form texts in colour order, or None when incomplete."""
        table = dict(self.series)
        if not table:
            return None
        return [table.get(c) for c in self.colours]


def build_ordering(o: OrderingAST) -> Ordering:
    if o.kind == "pathlex":
        base = PathLex(tuple(o.order), o.perm)
    else:
        tiers = tuple(Tier(t.name, tuple(t.gens), t.degree, t.lex, tuple(t.weights)) for t in o.tiers)
        fb = build_ordering(o.fallback) if o.fallback else None
        base = TieredQM(tiers, o.q, fb, tuple(o.counts))
    return Reversed(base) if o.reverse else base


def ordering_ast(order: Ordering) -> OrderingAST:
    """Inverse of build_ordering for the supported ordering classes."""
    if isinstance(order, Reversed):
        o = ordering_ast(order.base)
        o.reverse = not o.reverse
        return o
    if isinstance(order, PathLex):
        return OrderingAST("pathlex", order=tuple(order.order), perm=order.perm_mode)
    if isinstance(order, TieredQM):
        tiers = [TierAST(t.name, tuple(t.lex), t.degree, t.lex_mode, tuple(t.weights)) for t in order.tiers]
        default_fb = tuple(g for t in reversed(order.tiers) for g in t.lex)
        fb = None
        if tuple(order.fallback.order) != default_fb or order.fallback.perm_mode != "antilex":
            fb = ordering_ast(order.fallback)
        return OrderingAST("tiers", tiers=tiers, q=order.q_polarity, counts=tuple(order.counts), fallback=fb)
    raise DSLError(f"cannot serialise ordering {type(order).__name__}")


# --- scanner ---------------------------------------------------------------------

_WS = re.compile(r"(?:\s+|#[^\n]*)*")
_NAME = re.compile(r"[^\W\d]\w*!*")
_LABEL = re.compile(r"[^\s:;,{}()=@]+")
_INT = re.compile(r"\d+")


class _Scanner:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def where(self, pos=None):
        pos = self.pos if pos is None else pos
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, col

    def error(self, msg, pos=None):
        line, col = self.where(pos)
        return DSLError(msg, line, col)

    def skip(self):
        self.pos = _WS.match(self.text, self.pos).end()

    def at_end(self):
        self.skip()
        return self.pos >= len(self.text)

    def peek(self, lit):
        self.skip()
        return self.text.startswith(lit, self.pos)

    def accept(self, lit):
        if self.peek(lit):
            self.pos += len(lit)
            return True
        return False

    def expect(self, lit):
        if not self.accept(lit):
            raise self.error(f"expected {lit!r}")

    def word(self, what="name"):
        self.skip()
        m = _NAME.match(self.text, self.pos)
        if not m:
            raise self.error(f"expected {what}")
        self.pos = m.end()
        return m.group()

    def keyword(self, options):
        start = self.pos
        w = self.word("keyword")
        if w not in options:
            raise self.error(f"expected one of {', '.join(options)}, got {w!r}", start)
        return w

    def label(self):
        self.skip()
        m = _LABEL.match(self.text, self.pos)
        if not m:
            raise self.error("expected a label")
        self.pos = m.end()
        return m.group()

    def integer(self):
        self.skip()
        m = _INT.match(self.text, self.pos)
        if not m:
            raise self.error("expected an integer")
        self.pos = m.end()
        return int(m.group())

    def signed_int(self):
        neg = self.accept("-")
        v = self.integer()
        return -v if neg else v

    def until(self, stop=";"):
        self.skip()
        end = self.text.find(stop, self.pos)
        if end < 0:
            raise self.error(f"missing {stop!r}")
        s = self.text[self.pos:end].strip()
        self.pos = end + len(stop)
        return s


def _canon_name(name):
    return ALIASES.get(name, name)


def _parse_term(sc: _Scanner):
    sc.skip()
    start = sc.pos
    if _INT.match(sc.text, sc.pos):
        return LeafNode(sc.integer(), start)
    name = _canon_name(sc.word("a term"))
    sc.expect("(")
    args = [_parse_term(sc)]
    while sc.accept(","):
        args.append(_parse_term(sc))
    sc.expect(")")
    return OpNode(name, tuple(args), start)


def _parse_coeff(sc):
    """Optional ``p/q*`` prefix."""
    sc.skip()
    save = sc.pos
    m = re.compile(r"(\d+)(?:\s*/\s*(\d+))?\s*\*").match(sc.text, sc.pos)
    if m:
        sc.pos = m.end()
        return Fraction(int(m.group(1)), int(m.group(2) or 1))
    sc.pos = save
    return Fraction(1)


def _parse_poly(sc: _Scanner, stops=(";",)) -> PolyAST:
    sc.skip()
    start = sc.pos
    terms = []
    sign = -1 if sc.accept("-") else 1
    if sign == 1:
        sc.accept("+")
    # a lone 0 is the zero polynomial
    sc.skip()
    m = re.compile(r"0(?![\d(])").match(sc.text, sc.pos)
    if m and sign == 1:
        sc.pos = m.end()
        return PolyAST([], start)
    while True:
        c = _parse_coeff(sc)
        terms.append((sign * c, _parse_term(sc)))
        if sc.accept("+"):
            sign = 1
        elif sc.peek("-") and not sc.peek("->"):
            sc.expect("-")
            sign = -1
        else:
            break
    return PolyAST(terms, start)


def _parse_pathlex(sc):
    sc.expect("[")
    names = [_canon_name(sc.word("generator"))]
    while sc.accept(","):
        names.append(_canon_name(sc.word("generator")))
    sc.expect("]")
    perm = "antilex"
    if sc.peek("perm"):
        sc.word()
        perm = sc.keyword(("revlex", "lex", "antilex", "colex"))
    return OrderingAST("pathlex", order=tuple(names), perm=perm)


def _parse_tiers(sc):
    o = OrderingAST("tiers")
    sc.expect("{")
    while not sc.accept("}"):
        kw = sc.keyword(("tier", "q", "counts", "fallback"))
        if kw == "tier":
            name = sc.word("tier name")
            sc.expect("[")
            gens = [_canon_name(sc.word("generator"))]
            while sc.accept(","):
                gens.append(_canon_name(sc.word("generator")))
            sc.expect("]")
            t = TierAST(name, tuple(gens), sc.keyword(POLARITIES))
            while sc.accept(","):
                opt = sc.keyword(("lex", "weights"))
                if opt == "lex":
                    t.lex = sc.keyword(POLARITIES + ("none",))
                else:
                    sc.expect("(")
                    ws = []
                    while True:
                        g = _canon_name(sc.word("generator"))
                        ws.append((g, sc.signed_int()))
                        if not sc.accept(","):
                            break
                    sc.expect(")")
                    t.weights = tuple(ws)
            o.tiers.append(t)
        elif kw == "q":
            o.q = sc.keyword(POLARITIES)
        elif kw == "counts":
            cs = [sc.keyword(POLARITIES)]
            while sc.accept(","):
                cs.append(sc.keyword(POLARITIES))
            o.counts = tuple(cs)
        else:
            sc.keyword(("pathlex",))
            o.fallback = _parse_pathlex(sc)
        sc.expect(";")
    return o


def parse_presentation(text: str, check: bool = True) -> PresentationDoc:
    sc = _Scanner(text)
    header = []
    for line in text.split("\n"):
        if not line.startswith("#"):
            break
        header.append(line)
    doc = PresentationDoc(source=text, header=tuple(header))
    positions = {}
    while not sc.at_end():
        start = sc.pos
        kw = sc.keyword(("operad", "colours", "colors", "shuffle", "display", "generator", "ordering", "relation", "series", "trace"))
        if kw == "operad":
            doc.name = sc.label()
            sc.expect(";")
        elif kw in ("colours", "colors"):
            cols = [sc.word("colour")]
            while sc.accept(","):
                cols.append(sc.word("colour"))
            if len(set(cols)) != len(cols):
                raise sc.error("repeated colour name", start)
            doc.colours = tuple(cols)
            sc.expect(";")
        elif kw == "shuffle":
            doc.shuffle = True
            sc.expect(";")
        elif kw == "display":
            while True:
                g = _canon_name(sc.word("generator"))
                doc.display[g] = sc.label()
                if not sc.accept(","):
                    break
            sc.expect(";")
        elif kw == "generator":
            name = _canon_name(sc.word("generator name"))
            sc.expect(":")
            sc.expect("(")
            ins = []
            if not sc.accept(")"):
                ins.append(sc.word("colour"))
                while sc.accept(","):
                    ins.append(sc.word("colour"))
                sc.expect(")")
            sc.expect("->")
            g = GeneratorAST(name, tuple(ins), sc.word("colour"), pos=start)
            while sc.accept(","):
                opt = sc.keyword(("symmetric", "antisymmetric", "mirror"))
                if opt == "mirror":
                    g.mirror = _canon_name(sc.word("mirror name"))
                else:
                    g.symmetry = SYMMETRIC if opt == "symmetric" else ANTISYMMETRIC
            sc.expect(";")
            doc.generators.append(g)
            positions[("gen", name)] = start
        elif kw == "ordering":
            rev = False
            k = sc.keyword(("reverse", "pathlex", "tiers"))
            if k == "reverse":
                rev = True
                k = sc.keyword(("pathlex", "tiers"))
            if k == "pathlex":
                o = _parse_pathlex(sc)
                sc.expect(";")
            else:
                o = _parse_tiers(sc)
                sc.accept(";")
            o.reverse = rev
            doc.ordering = o
        elif kw == "relation":
            label = sc.label()
            sc.expect(":")
            doc.relations.append(RelationAST(label, _parse_poly(sc), start))
            sc.expect(";")
        elif kw == "series":
            col = sc.word("colour")
            sc.expect(":")
            doc.series.append((col, sc.until(";")))
        else:
            a = sc.label()
            sc.expect(",")
            b = sc.label()
            scm = None
            if sc.accept("@"):
                scm = _parse_term(sc)
            sc.expect("{")
            first = _parse_poly(sc)
            steps = []
            while sc.accept("={"):
                rule = sc.label()
                sc.expect("}=>")
                steps.append((rule, _parse_poly(sc)))
            sc.expect("}")
            doc.traces.append(TraceAST((a, b), scm, first, steps, start))
    if check:
        _check(doc, sc)
    return doc


def _check(doc: PresentationDoc, sc: _Scanner):
    if not doc.colours:
        raise DSLError("no colours declared", 1, 1)
    names = set()
    for g in doc.generators:
        for c in g.inputs + (g.output,):
            if c not in doc.colours:
                raise sc.error(f"unknown colour {c!r} in generator {g.name}", g.pos)
        if g.name in names:
            raise sc.error(f"generator {g.name} declared twice", g.pos)
        names.add(g.name)
        try:
            SymGenerator(g.name, tuple(doc.colour_index(c) for c in g.inputs), doc.colour_index(g.output), g.symmetry, g.mirror)
        except PresentationError as e:
            raise sc.error(str(e), g.pos) from None
        if doc.shuffle and (g.symmetry != FREE or g.mirror):
            raise sc.error("shuffle generators take no symmetry options", g.pos)
    if not doc.shuffle:
        try:
            expand_generators(doc.symmetric_generators_only())
        except PresentationError as e:
            raise DSLError(str(e)) from None
    sigs = _signatures(doc)
    for r in doc.relations:
        _check_poly(r.poly, sigs, doc, sc, r.label)
    for t in doc.traces:
        for p in [t.start] + [q for _, q in t.steps]:
            _check_poly(p, sigs, doc, sc, "trace")
    if doc.ordering is not None:
        try:
            build_ordering(doc.ordering)
        except ValueError as e:
            raise DSLError(f"ordering: {e}") from None
    for col, text in doc.series:
        if col not in doc.colours:
            raise DSLError(f"series for unknown colour {col!r}")
        from .series import parse_expr

        parse_expr(text)


def _symmetric_generators_only(self):
    gens = [
        SymGenerator(g.name, tuple(self.colour_index(c) for c in g.inputs), self.colour_index(g.output), g.symmetry, g.mirror)
        for g in self.generators
    ]
    return SymmetricPresentation(self.name, self.palette, gens, [])


PresentationDoc.symmetric_generators_only = _symmetric_generators_only


def _signatures(doc):
    """name -> (input colour indices, output index) for every name a term
    may use: declared generators, plus mirrors in symmetric documents."""
    sigs = {}
    for g in doc.generators:
        ins = tuple(doc.colour_index(c) for c in g.inputs)
        sigs[g.name] = (ins, doc.colour_index(g.output))
    if not doc.shuffle:
        gens, _ = expand_generators(doc.symmetric_generators_only())
        for g in gens:
            sigs.setdefault(g.name, (g.inputs, g.output))
    return sigs


def _node_colour(node, sigs, sc, expected=None):
    """Type-check a term; returns (output colour or None for a leaf, labels)."""
    if isinstance(node, LeafNode):
        return expected, [node.label]
    if node.name.startswith("id_") and len(node.args) == 1 and isinstance(node.args[0], LeafNode):
        return None, [node.args[0].label]
    if node.name not in sigs:
        raise sc.error(f"unknown generator {node.name!r}", node.pos)
    ins, out = sigs[node.name]
    if len(node.args) != len(ins):
        raise sc.error(f"{node.name} takes {len(ins)} arguments, got {len(node.args)}", node.pos)
    labels = []
    for a, col in zip(node.args, ins):
        if isinstance(a, OpNode) and a.name in sigs and sigs[a.name][1] != col:
            raise sc.error(f"{a.name} outputs colour {sigs[a.name][1]} but slot {len(labels) + 1} of {node.name} takes {col}", a.pos)
        _, ls = _node_colour(a, sigs, sc, col)
        labels += ls
    return out, labels


def _leaf_colours(node, sigs, acc, col=None):
    if isinstance(node, LeafNode):
        acc[node.label] = col
        return
    if node.name.startswith("id_"):
        acc[node.args[0].label] = col
        return
    ins, _ = sigs[node.name]
    for a, c in zip(node.args, ins):
        _leaf_colours(a, sigs, acc, c)


def _check_poly(p: PolyAST, sigs, doc, sc, label):
    shape = None
    for _, node in p.terms:
        out, labels = _node_colour(node, sigs, sc)
        if len(set(labels)) != len(labels):
            raise sc.error(f"{label}: leaf label repeated", node.pos)
        if sorted(labels) != list(range(1, len(labels) + 1)):
            raise sc.error(f"{label}: leaf labels must be 1..{len(labels)}", node.pos)
        cols = {}
        _leaf_colours(node, sigs, cols)
        sig = (out, tuple(sorted(cols.items())))
        if shape is None:
            shape = sig
        elif sig != shape:
            raise sc.error(f"{label}: terms have different signatures", node.pos)


# --- conversions -----------------------------------------------------------------


def to_sterm(node):
    if isinstance(node, LeafNode):
        return node.label
    return (node.name, tuple(to_sterm(a) for a in node.args))


def tree_from_node(node, gens: dict, colour=None) -> Tree:
    """Build a shuffle tree from a term over shuffle generators."""
    if isinstance(node, LeafNode):
        if colour is None:
            raise DSLError("a bare leaf needs a colour")
        return Leaf(node.label, colour)
    if node.name.startswith("id_"):
        raise DSLError("identity monomials cannot be grafted into terms")
    g = gens.get(node.name)
    if g is None:
        raise DSLError(f"unknown shuffle generator {node.name!r}")
    if len(node.args) != g.arity:
        raise DSLError(f"{g.name} takes {g.arity} arguments")
    return Vertex(g, [tree_from_node(a, gens, c) for a, c in zip(node.args, g.inputs)])


def poly_from_ast(p: PolyAST, gens: dict) -> Poly:
    acc = []
    for c, node in p.terms:
        t = tree_from_node(node, gens)
        try:
            check_tree(t)
        except TreeError as e:
            raise DSLError(f"{format_node(node)}: {e}") from None
        acc.append((t, c))
    return Poly(acc)


def parse_term(text: str, gens: dict | None = None, colours=None):
    """A term node, or a shuffle tree when ``gens`` is given."""
    sc = _Scanner(text)
    node = _parse_term(sc)
    if not sc.at_end():
        raise sc.error("trailing input after term")
    if gens is None:
        return node
    if isinstance(node, OpNode) and node.name.startswith("id_"):
        col = node.name[3:]
        if colours is None or col not in colours:
            raise DSLError(f"unknown identity colour {col!r}")
        return Leaf(node.args[0].label, colours.index(col))
    return tree_from_node(node, gens)


def parse_poly(text: str, gens: dict | None = None):
    sc = _Scanner(text)
    p = _parse_poly(sc)
    if not sc.at_end():
        raise sc.error("trailing input after polynomial")
    return p if gens is None else poly_from_ast(p, gens)


# --- formatting ------------------------------------------------------------------


def format_node(node, display=None) -> str:
    display = display or {}
    if isinstance(node, LeafNode):
        return str(node.label)
    return f"{display.get(node.name, node.name)}({','.join(format_node(a, display) for a in node.args)})"


def format_term(t: Tree, display=None, colours=None) -> str:
    """Canonical ``gen(arg,...)`` text; an identity prints as ``id_<colour>(1)``."""
    display = display or {}
    if isinstance(t, Leaf):
        if colours is None:
            return str(t.label)
        return f"id_{colours[t.colour]}({t.label})"

    def walk(x):
        if isinstance(x, Leaf):
            return str(x.label)
        return f"{display.get(x.gen.name, x.gen.name)}({','.join(walk(c) for c in x.children)})"

    return walk(t)


def _coeff_prefix(c: Fraction) -> str:
    a = abs(c)
    if a == 1:
        return ""
    return (f"{a.numerator}" if a.denominator == 1 else f"{a.numerator}/{a.denominator}") + "*"


def format_poly_ast(p: PolyAST, display=None) -> str:
    if not p.terms:
        return "0"
    out = []
    for k, (c, node) in enumerate(p.terms):
        body = _coeff_prefix(c) + format_node(node, display)
        if k == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


def poly_ast_from_poly(f: Poly, order=None) -> PolyAST:
    items = f.sorted_terms(order) if order is not None else sorted(f.terms.items(), key=lambda kv: str(kv[0]))
    return PolyAST([(c, node_from_tree(t)) for t, c in items])


def node_from_tree(t: Tree):
    if isinstance(t, Leaf):
        return LeafNode(t.label)
    return OpNode(t.gen.name, tuple(node_from_tree(c) for c in t.children))


def _format_ordering(o: OrderingAST) -> list[str]:
    head = "ordering " + ("reverse " if o.reverse else "")
    if o.kind == "pathlex":
        return [head + _pathlex_text(o) + ";"]
    lines = [head + "tiers {"]
    for t in o.tiers:
        s = f"  tier {t.name} [{', '.join(t.gens)}] {t.degree}"
        if t.lex != GREATER:
            s += f", lex {t.lex}"
        if t.weights:
            s += ", weights (" + ", ".join(f"{g} {w}" for g, w in t.weights) + ")"
        lines.append(s + ";")
    lines.append(f"  q {o.q};")
    if o.counts:
        lines.append(f"  counts {', '.join(o.counts)};")
    if o.fallback is not None:
        lines.append(f"  fallback {_pathlex_text(o.fallback)};")
    lines.append("}")
    return lines


def _pathlex_text(o):
    s = f"pathlex [{', '.join(o.order)}]"
    if o.perm != "antilex":
        s += f" perm {o.perm}"
    return s


def format_presentation(doc: PresentationDoc) -> str:
    disp = doc.display
    lines = list(doc.header)
    if doc.name:
        lines.append(f"operad {doc.name};")
    lines.append(f"colours {', '.join(doc.colours)};")
    if doc.shuffle:
        lines.append("shuffle;")
    if doc.display:
        lines.append("display " + ", ".join(f"{g} {v}" for g, v in doc.display.items()) + ";")
    for g in doc.generators:
        s = f"generator {g.name} : ({','.join(g.inputs)}) -> {g.output}"
        if g.symmetry != FREE:
            s += f", {g.symmetry}"
        if g.mirror:
            s += f", mirror {g.mirror}"
        lines.append(s + ";")
    if doc.ordering is not None:
        lines += _format_ordering(doc.ordering)
    for r in doc.relations:
        lines.append(f"relation {r.label}: {format_poly_ast(r.poly, disp)};")
    for col, text in doc.series:
        lines.append(f"series {col}: {text};")
    for t in doc.traces:
        head = f"trace {t.pair[0]},{t.pair[1]}"
        if t.scm is not None:
            head += f" @ {format_node(t.scm, disp)}"
        lines.append(head + " {")
        lines.append(f"  {format_poly_ast(t.start, disp)}")
        for rule, p in t.steps:
            lines.append(f"  ={{{rule}}}=> {format_poly_ast(p, disp)}")
        lines.append("}")
    return "\n".join(lines) + "\n"


def canonical(text: str) -> str:
    return format_presentation(parse_presentation(text))


def shuffle_document(sp: ShufflePresentation, order: Ordering | None = None, name=None) -> PresentationDoc:
    """A ``shuffle`` document for a shuffle presentation."""
    cols = tuple(sp.palette.colours)
    doc = PresentationDoc(name=name or sp.name, colours=cols, shuffle=True)
    for g in sp.generators:
        doc.generators.append(GeneratorAST(g.name, tuple(cols[c] for c in g.inputs), cols[g.output]))
    order = order or sp.ordering
    if order is not None:
        doc.ordering = ordering_ast(order)
    for label, p in sp.relations:
        doc.relations.append(RelationAST(label, poly_ast_from_poly(p, order)))
    return doc
