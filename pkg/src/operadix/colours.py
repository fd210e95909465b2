"""Colour palettes and colourings of finite ordered sets.

Colours are small integers indexing into a :class:`Palette`; names only
appear when reading or writing text.  Positions are 1-based in every public
function, matching the way compositions are written by hand.
"""
from __future__ import annotations

from dataclasses import dataclass


class ColourError(ValueError):
    pass


@dataclass(frozen=True)
class Palette:
    colours: tuple[str, ...]

    def __post_init__(self):
        if not self.colours:
            raise ColourError("palette must contain at least one colour")
        if len(set(self.colours)) != len(self.colours):
            raise ColourError(f"duplicate colour names in {self.colours}")

    def __len__(self):
        return len(self.colours)

    def index(self, name: str) -> int:
        try:
            return self.colours.index(name)
        except ValueError:
            raise ColourError(f"unknown colour {name!r}") from None

    def name(self, index: int) -> str:
        return self.colours[index]


@dataclass(frozen=True)
class Colouring:
    palette: Palette
    values: tuple[int, ...]

    def __post_init__(self):
        if not self.values:
            raise ColourError("a colouring needs at least one position")
        for v in self.values:
            if not 0 <= v < len(self.palette):
                raise ColourError(f"colour index {v} outside palette")

    def __len__(self):
        return len(self.values)

    def __getitem__(self, position: int) -> int:
        """Colour at a 1-based position."""
        return self.values[position - 1]

    def names(self) -> tuple[str, ...]:
        return tuple(self.palette.name(v) for v in self.values)

    def weights(self) -> tuple[int, ...]:
        """Number of positions of each colour (the colour-degree vector)."""
        counts = [0] * len(self.palette)
        for v in self.values:
            counts[v] += 1
        return tuple(counts)

    @classmethod
    def from_names(cls, palette: Palette, names) -> "Colouring":
        return cls(palette, tuple(palette.index(n) for n in names))


def compose_colouring(first: Colouring, position: int, second: Colouring) -> Colouring:
    """Colouring of ``first ∘_position second`` on n+m-1 points."""
    if first.palette != second.palette:
        raise ColourError("colourings over different palettes")
    n, m = len(first), len(second)
    if not 1 <= position <= n:
        raise ColourError(f"position {position} out of range 1..{n}")
    values = []
    for k in range(1, n + m):
        if k < position:
            values.append(first[k])
        elif k < position + m:
            values.append(second[k - position + 1])
        else:
            values.append(first[k - m + 1])
    return Colouring(first.palette, tuple(values))


def standard_colouring(palette: Palette, weights) -> Colouring:
    weights = tuple(weights)
    if len(weights) != len(palette):
        raise ColourError(f"expected {len(palette)} weights, got {len(weights)}")
    if any(w < 0 for w in weights):
        raise ColourError("weights must be non-negative")
    if sum(weights) == 0:
        raise ColourError("standard colouring of the empty set")
    values = tuple(c for c, w in enumerate(weights) for _ in range(w))
    return Colouring(palette, values)
