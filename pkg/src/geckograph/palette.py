"""Deterministic, colorblind-safe color assignment for type identifiers.

The default palette is the 8-color Okabe-Ito set extended with 4
high-contrast colors.  Assignment is hash-based so the same identifier gets
the same slot across independent renderings; collisions within one
signature are resolved to the nearest free slot in first-appearance order.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

OKABE_ITO = [
    "#E69F00",  # orange
    "#56B4E9",  # sky blue
    "#009E73",  # bluish green
    "#F0E442",  # yellow
    "#0072B2",  # blue
    "#D55E00",  # vermillion
    "#CC79A7",  # reddish purple
    "#999999",  # grey
]

DEFAULT_COLORS = OKABE_ITO + [
    "#882255",  # wine
    "#44AA99",  # teal
    "#6A3D9A",  # violet
    "#117733",  # dark green
]


@dataclass
class Assignment:
    indices: dict[str, int]
    overflowed: bool = False

    def __getitem__(self, ident: str) -> int:
        return self.indices[ident]


@dataclass
class Palette:
    colors: list[str] = field(default_factory=lambda: list(DEFAULT_COLORS))

    def __post_init__(self) -> None:
        if not self.colors:
            raise ValueError("palette must be non-empty")

    def color(self, slot: int) -> str:
        return self.colors[slot % len(self.colors)]

    @classmethod
    def from_file(cls, path: str | Path) -> "Palette":
        colors = json.loads(Path(path).read_text())
        if not isinstance(colors, list) or not all(isinstance(c, str) for c in colors):
            raise ValueError("palette file must be a JSON array of hex colors")
        return cls(colors)


def stable_slot(ident: str, size: int) -> int:
    digest = hashlib.sha256(ident.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") % size


def assign_colors(identifiers: list[str], palette: Palette) -> Assignment:
    """Map each identifier to a palette index.

    Injective while identifiers fit the palette; beyond that indices recycle
    and the overflow flag is set.
    """
    size = len(palette.colors)
    out: dict[str, int] = {}
    taken: set[int] = set()
    overflowed = False
    for ident in identifiers:
        if ident in out:
            continue
        want = stable_slot(ident, size)
        if len(taken) >= size:
            out[ident] = want
            overflowed = True
            continue
        slot = want
        while slot in taken:
            slot = (slot + 1) % size
        out[ident] = slot
        taken.add(slot)
    return Assignment(out, overflowed)
