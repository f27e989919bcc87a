"""Chimera-cell connectivity graphs and their bipartitions.

A unit cell is the complete bipartite graph K_{k,k} (k=4 on the annealer
hardware this mimics).  Within a cell, vertices 0..k-1 form the left
column (side 0) and k..2k-1 the right column (side 1).  Cells tile
horizontally; the right column is the side that carries the inter-cell
couplers, pairing equal slots of adjacent cells.  Left/right inter-cell
results are symmetric under the opposite choice.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, TextIO

HORIZONTAL_SIDE = 1  # side whose slots couple to the adjacent cell


@dataclass(frozen=True)
class ChimeraGraph:
    """Immutable coupling topology: vertices, edges, cells, vertex labels.

    ``labels[v]`` is ``(cell, side, slot)`` with side 0 the left column.
    """

    n_spins: int
    edges: tuple[tuple[int, int], ...]
    cells: tuple[tuple[int, ...], ...]
    labels: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        seen = set()
        for i, j in self.edges:
            if i == j:
                raise ValueError(f"self-loop at vertex {i}")
            if not (0 <= i < j < self.n_spins):
                raise ValueError(f"edge ({i},{j}) out of range or unordered")
            if (i, j) in seen:
                raise ValueError(f"duplicate edge ({i},{j})")
            seen.add((i, j))
        if len(self.labels) != self.n_spins:
            raise ValueError("one label per vertex required")

    def degree(self, v: int) -> int:
        return sum(1 for i, j in self.edges if v in (i, j))


@dataclass(frozen=True)
class Bipartition:
    """A split of all vertices into two non-empty disjoint blocks."""

    part_a: tuple[int, ...]
    part_b: tuple[int, ...]

    def __post_init__(self):
        a, b = set(self.part_a), set(self.part_b)
        if not a or not b:
            raise ValueError("both blocks must be non-empty")
        if a & b:
            raise ValueError(f"blocks overlap: {sorted(a & b)}")
        n = len(a) + len(b)
        if a | b != set(range(n)):
            raise ValueError("blocks must cover vertices 0..n-1 exactly")

    @property
    def n_spins(self) -> int:
        return len(self.part_a) + len(self.part_b)

    def swapped(self) -> "Bipartition":
        return Bipartition(self.part_b, self.part_a)


def bipartition_from_a(part_a: Iterable[int], n_spins: int) -> Bipartition:
    """Explicit bipartition from one block; the other is the complement."""
    a = tuple(sorted(set(int(v) for v in part_a)))
    b = tuple(v for v in range(n_spins) if v not in set(a))
    return Bipartition(a, b)


def build_cell(k: int) -> ChimeraGraph:
    """Complete bipartite K_{k,k} cell on 2k vertices (k=4 is the unit cell)."""
    if not 1 <= int(k) <= 8:
        raise ValueError(f"half-cell size must be in 1..8, got {k}")
    k = int(k)
    edges = tuple((i, k + j) for i in range(k) for j in range(k))
    labels = tuple((0, 0, i) for i in range(k)) + tuple((0, 1, j) for j in range(k))
    return ChimeraGraph(
        n_spins=2 * k,
        edges=edges,
        cells=(tuple(range(2 * k)),),
        labels=labels,
    )


def tile_horizontal(cells: int, k: int = 4) -> ChimeraGraph:
    """`cells` copies of K_{k,k}, adjacent cells joined slot-by-slot.

    One coupler per slot on the horizontal side connects cell c to cell
    c+1 (k couplers per adjacent pair; 4 at k=4).
    """
    if int(cells) < 1:
        raise ValueError(f"cell count must be >= 1, got {cells}")
    cells = int(cells)
    unit = build_cell(k)
    per_cell = 2 * k
    edges: list[tuple[int, int]] = []
    labels: list[tuple[int, int, int]] = []
    groups: list[tuple[int, ...]] = []
    for c in range(cells):
        off = c * per_cell
        edges.extend((i + off, j + off) for i, j in unit.edges)
        labels.extend((c, side, slot) for _, side, slot in unit.labels)
        groups.append(tuple(range(off, off + per_cell)))
    for c in range(cells - 1):
        for slot in range(k):
            v = c * per_cell + HORIZONTAL_SIDE * k + slot
            edges.append((v, v + per_cell))
    return ChimeraGraph(
        n_spins=cells * per_cell,
        edges=tuple(edges),
        cells=tuple(groups),
        labels=tuple(labels),
    )


# The two half-cell cuts of the 8-spin unit cell, by literal vertex index.
_NAMED_CUTS = {
    "up-down": (0, 1, 4, 5),
    "left-right": (0, 1, 2, 3),
}


def named_bipartition(g: ChimeraGraph, name: str) -> Bipartition:
    """The 'up-down' or 'left-right' half cut of the 8-spin unit cell."""
    key = name.strip().lower()
    if key not in _NAMED_CUTS:
        raise ValueError(f"unknown bipartition {name!r}; known: {sorted(_NAMED_CUTS)}")
    if g.n_spins != 8:
        raise ValueError(
            f"named cuts are defined for the 8-spin unit cell, got {g.n_spins} spins"
        )
    return bipartition_from_a(_NAMED_CUTS[key], 8)


def format_edge_list(g: ChimeraGraph) -> str:
    """Debug export: header line with the spin count, then one 'i j' per edge."""
    lines = [f"n_spins {g.n_spins}"]
    lines.extend(f"{i} {j}" for i, j in g.edges)
    return "\n".join(lines) + "\n"


def write_edge_list(g: ChimeraGraph, stream: TextIO) -> None:
    stream.write(format_edge_list(g))
