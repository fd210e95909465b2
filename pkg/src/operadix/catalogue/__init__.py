"""Built-in operads, helper operads and paper fixtures."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

from ..dsl import PresentationDoc, parse_presentation, poly_from_ast
from ..polynomials import Poly
from ..symmetrize import ShufflePresentation, _scalar_key

FILES = {
    "ICom": "icom.opd",
    "AffHS": "affhs.opd",
    "MLie": "mlie.opd",
    "LP": "lp.opd",
    "DCom": "dcom.opd",
    "LieR": "lier.opd",
    "DerCom": "dercom.opd",
}
APPENDIX = "lier_appendix.opd"


class CatalogueError(KeyError):
    def __str__(self):
        return self.args[0] if self.args else "catalogue error"


def read_resource(name: str) -> str:
    return resources.files(__package__).joinpath(name).read_text(encoding="utf-8")


@dataclass
class CatalogueEntry:
    name: str
    doc: PresentationDoc
    path: str | None = None
    fixtures: PresentationDoc | None = None
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def ordering(self):
        return self.doc.build_ordering()

    @property
    def symmetric(self):
        return self.doc.symmetric()

    @property
    def generators(self):
        return self.shuffle().generators

    def shuffle(self, ordering=None) -> ShufflePresentation:
        """Shuffle presentation with the relation basis.  When appendix
        fixtures exist, basis elements equal to a fixture up to scalar
        carry the fixture's label."""
        key = ("shuffle", id(ordering))
        if key not in self._cache:
            sp = self.doc.shuffle_presentation(ordering)
            if self.fixtures is not None:
                names = self.fixture_relations()
                index = {_scalar_key(p): lab for lab, p in reversed(list(names.items()))}
                sp.relations = [(index.get(_scalar_key(p), lab), p) for lab, p in sp.relations]
            self._cache[key] = sp
        return self._cache[key]

    def fixture_relations(self) -> dict[str, Poly]:
        if self.fixtures is None:
            return {}
        gens = {g.name: g for g in self.shuffle_generators()}
        return {r.label: poly_from_ast(r.poly, gens) for r in self.fixtures.relations}

    def shuffle_generators(self):
        return self.doc.shuffle_generators()

    def expected_series(self):
        return self.doc.series_exprs()

    @property
    def traces(self):
        out = list(self.doc.traces)
        if self.fixtures is not None:
            out += self.fixtures.traces
        return out

    @property
    def display(self):
        d = dict(self.doc.display)
        if self.fixtures is not None:
            d.update(self.fixtures.display)
        return d


def names() -> list[str]:
    return list(FILES)


@lru_cache(maxsize=None)
def _load_builtin(name):
    doc = parse_presentation(read_resource(FILES[name]))
    fixtures = None
    if name in ("LieR", "DerCom"):
        fixtures = parse_presentation(read_resource(APPENDIX))
    return doc, fixtures


def builtin(name: str) -> CatalogueEntry:
    if name not in FILES:
        raise CatalogueError(f"unknown operad {name!r}; built-ins are {', '.join(FILES)}")
    doc, fixtures = _load_builtin(name)
    # DerCom reuses the LieR labels but not the LR-A/LR-B reductions
    if name == "DerCom":
        fixtures = _without_lr(fixtures)
    return CatalogueEntry(name, doc, FILES[name], fixtures)


def _without_lr(doc: PresentationDoc) -> PresentationDoc:
    from dataclasses import replace

    rels = [r for r in doc.relations if not r.label.startswith("LR-")]
    traces = [t for t in doc.traces if not any(p.startswith("LR-") for p in t.pair)]
    return replace(doc, relations=rels, traces=traces)


def load(source: str) -> CatalogueEntry:
    """A built-in name or a path to an ``.opd`` file."""
    if source in FILES:
        return builtin(source)
    p = Path(source)
    if not p.exists():
        raise CatalogueError(f"no built-in operad or file named {source!r}")
    doc = parse_presentation(p.read_text(encoding="utf-8"))
    return CatalogueEntry(doc.name or p.stem, doc, str(p))


def appendix() -> PresentationDoc:
    return _load_builtin("LieR")[1]


# --- helper operads for decompositions -------------------------------------------


def _doc(text):
    return parse_presentation(text)


def helper(kind: str, colours: tuple[str, ...], *slots: str) -> PresentationDoc:
    """Small operads on a given palette.

    ``As``/``Com``/``Lie`` live on one colour; ``Nm`` is the nilpotent
    m : (s, t) -> t; ``Fd`` the free operad on d : (s, t) -> s; ``Fmi`` the
    free operad on m : (s, t) -> t and i : (s) -> t.
    """
    head = f"operad {kind};\ncolours {', '.join(colours)};\n"
    if kind == "As":
        (c,) = slots
        return _doc(head + f"generator a : ({c},{c}) -> {c}, mirror b;\nordering pathlex [a, b];\n"
                    "relation As: a(a(1,2),3) - a(1,a(2,3));\n")
    if kind == "Com":
        (c,) = slots
        return _doc(head + f"generator alpha : ({c},{c}) -> {c}, symmetric;\nordering pathlex [alpha];\n"
                    "relation Com: alpha(alpha(1,2),3) - alpha(1,alpha(2,3));\n")
    if kind == "Lie":
        (c,) = slots
        return _doc(head + f"generator beta : ({c},{c}) -> {c}, antisymmetric;\nordering pathlex [beta];\n"
                    "relation Jac: beta(beta(1,2),3) - beta(beta(1,3),2) - beta(1,beta(2,3));\n")
    if kind == "Nm":
        s, t = slots
        return _doc(head + f"generator m : ({s},{t}) -> {t}, mirror n;\nordering pathlex [m, n];\n"
                    "relation Nil: m(1,m(2,3));\n")
    if kind == "Fd":
        s, t = slots
        return _doc(head + f"generator d : ({s},{t}) -> {s}, mirror e;\nordering pathlex [d, e];\n")
    if kind == "Fmi":
        s, t = slots
        return _doc(head + f"generator i : ({s}) -> {t};\ngenerator m : ({s},{t}) -> {t}, mirror n;\n"
                    "ordering pathlex [i, m, n];\n")
    raise CatalogueError(f"unknown helper {kind!r}")


def doc_series(doc: PresentationDoc, N: int):
    """Generating series of a presentation from its Groebner normal forms.

    Helpers are small enough to complete up to degree N - 1, which is the
    largest degree a monomial of arity N can have when all generators are
    binary; unary generators are handled by the explicit bound."""
    from ..completion import buchberger, dimension_table
    from ..series import series_from_dimensions

    sp = doc.shuffle_presentation()
    order = sp.ordering
    deg = max([3] + [p.degree for _, p in sp.relations])
    gb = buchberger(sp.relations, order, max_degree=deg)
    if not gb.report.certified:
        raise CatalogueError(f"{doc.name}: the helper presentation is not a quadratic Groebner basis")
    table = dimension_table(gb, sp.generators, len(doc.colours), N)
    return series_from_dimensions(table, len(doc.colours), N, doc.colours)


def entry_series(entry: CatalogueEntry, N: int):
    from ..completion import buchberger, dimension_table
    from ..series import series_from_dimensions

    sp = entry.shuffle()
    gb = buchberger(sp.relations, sp.ordering)
    table = dimension_table(gb, sp.generators, len(entry.doc.colours), N)
    return series_from_dimensions(table, len(entry.doc.colours), N, entry.doc.colours)


# name -> (description, function N -> TruncatedEGF)
def _decompositions():
    from ..series import combine_components, compose_series

    def lp(N):
        cols = builtin("LP").doc.colours
        return compose_series(doc_series(helper("As", cols, cols[0]), N), entry_series(builtin("MLie"), N), N)

    def lier(N):
        cols = builtin("LieR").doc.colours
        inner = combine_components([(entry_series(builtin("DCom"), N), 0), (doc_series(helper("Lie", cols, cols[1]), N), 1)])
        return compose_series(doc_series(helper("Nm", cols, *cols), N), inner, N)

    def dcom(N):
        cols = builtin("DCom").doc.colours
        return compose_series(doc_series(helper("Com", cols, cols[0]), N), doc_series(helper("Fd", cols, *cols), N), N)

    def affhs(N):
        cols = builtin("AffHS").doc.colours
        return combine_components([(doc_series(helper("Lie", cols, cols[0]), N), 0), (doc_series(helper("Fmi", cols, *cols), N), 1)])

    def mlie(N):
        cols = builtin("MLie").doc.colours
        # d : (L, M) -> M, so the free part has slots (M, L) read as (s, t) = (M, L)
        fd = _doc(f"operad Fd;\ncolours {', '.join(cols)};\ngenerator d : ({cols[1]},{cols[0]}) -> {cols[0]}, mirror e;\n"
                  "ordering pathlex [d, e];\n")
        return combine_components([(doc_series(fd, N), 0), (doc_series(helper("Lie", cols, cols[1]), N), 1)])

    return {
        "LP": ("As o MLie", lp),
        "LieR": ("N_m o (DCom^1; Lie)", lier),
        "DCom": ("Com o F(d)", dcom),
        "AffHS": ("(Lie; F(m,i))", affhs),
        "MLie": ("(F(d); Lie)", mlie),
    }


def decomposition(name: str):
    """(description, N -> series) for operads with a stated decomposition."""
    return _decompositions().get(name)
