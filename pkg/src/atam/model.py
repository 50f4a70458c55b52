"""Static domain of the abstract Tile Assembly Model.

Positions, glues, tile types, assemblies, systems, the binding graph and
temperature stability. Everything here is an immutable value.
"""
from __future__ import annotations

import enum
from collections import defaultdict, deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, NamedTuple, Optional

from .mincut import global_min_cut

COORD_MIN = -(2**63)
COORD_MAX = 2**63 - 1


class UnknownTileError(KeyError):
    """An assembly refers to a tile name missing from the tile set."""

    def __init__(self, name: str, position: Optional["Position"] = None):
        self.name = name
        self.position = position
        where = f" at {tuple(position)}" if position is not None else ""
        super().__init__(f"unknown tile type {name!r}{where}")

    def __str__(self) -> str:
        return self.args[0]


class Position(NamedTuple):
    x: int
    y: int

    def neighbor(self, d: "Direction") -> "Position":
        dx, dy = d.offset
        nx, ny = self.x + dx, self.y + dy
        if not (COORD_MIN <= nx <= COORD_MAX and COORD_MIN <= ny <= COORD_MAX):
            raise OverflowError(f"neighbor of {tuple(self)} to the {d.name.lower()} leaves the 64-bit lattice")
        return Position(nx, ny)

    def neighbors(self) -> Iterator[tuple["Direction", "Position"]]:
        for d in Direction:
            yield d, self.neighbor(d)


class Direction(enum.Enum):
    NORTH = 0
    EAST = 1
    SOUTH = 2
    WEST = 3

    @property
    def offset(self) -> tuple[int, int]:
        return _OFFSETS[self.value]

    @property
    def opposite(self) -> "Direction":
        return _DIRS[(self.value + 2) % 4]

    @property
    def key(self) -> str:
        return self.name.lower()


_OFFSETS = ((0, 1), (1, 0), (0, -1), (-1, 0))
_DIRS = tuple(Direction)


@dataclass(frozen=True)
class Glue:
    label: str = ""
    strength: int = 0

    @property
    def is_null(self) -> bool:
        return self.label == ""


NULL_GLUE = Glue()


def glue_interaction(a: Glue, b: Glue) -> int:
    """Strength with which two abutting glues bind (0 if they do not)."""
    if a.label and a.label == b.label and a.strength == b.strength:
        return a.strength
    return 0


@dataclass(frozen=True)
class Display:
    label: Optional[str] = None
    color: Optional[str] = None


@dataclass(frozen=True)
class TileType:
    name: str
    north: Glue = NULL_GLUE
    east: Glue = NULL_GLUE
    south: Glue = NULL_GLUE
    west: Glue = NULL_GLUE
    display: Display = field(default_factory=Display)

    def glue(self, d: Direction) -> Glue:
        return (self.north, self.east, self.south, self.west)[d.value]

    @property
    def glues(self) -> dict[Direction, Glue]:
        return {d: self.glue(d) for d in Direction}

    @property
    def short_label(self) -> str:
        text = self.display.label or self.name
        return text[0]


@dataclass(frozen=True)
class TileSet:
    """Ordered collection of tile types.

    Construction does not enforce the naming and glue invariants; use
    :func:`validate_tas` (or :func:`tileset_diagnostics`) to get a report.
    """

    tiles: tuple[TileType, ...]

    def __post_init__(self):
        object.__setattr__(self, "tiles", tuple(self.tiles))

    @cached_property
    def by_name(self) -> dict[str, TileType]:
        table: dict[str, TileType] = {}
        for t in self.tiles:
            table.setdefault(t.name, t)
        return table

    def __getitem__(self, name: str) -> TileType:
        try:
            return self.by_name[name]
        except KeyError:
            raise UnknownTileError(name) from None

    def __contains__(self, name: object) -> bool:
        return name in self.by_name

    def __iter__(self) -> Iterator[TileType]:
        return iter(self.tiles)

    def __len__(self) -> int:
        return len(self.tiles)

    @property
    def names(self) -> list[str]:
        return [t.name for t in self.tiles]

    @cached_property
    def side_index(self) -> dict[tuple[Direction, str], tuple[TileType, ...]]:
        """(side, label) -> tiles carrying a positive glue with that label on that side."""
        index: dict[tuple[Direction, str], list[TileType]] = defaultdict(list)
        for name, t in self.by_name.items():
            for d in Direction:
                g = t.glue(d)
                if g.label and g.strength > 0:
                    index[(d, g.label)].append(t)
        return {k: tuple(v) for k, v in index.items()}


class Assembly(Mapping[Position, str]):
    """Finite partial map from lattice positions to tile-type names.

    Equality and hashing are by placement map; positions are absolute.
    """

    __slots__ = ("_map", "_hash")

    def __init__(self, placements: Mapping[Position, str] | Iterable[tuple[Position, str]] = ()):
        items = placements.items() if isinstance(placements, Mapping) else placements
        self._map: dict[Position, str] = {Position(*p): name for p, name in items}
        self._hash: Optional[int] = None

    @classmethod
    def _wrap(cls, table: dict[Position, str], h: Optional[int] = None) -> "Assembly":
        a = cls.__new__(cls)
        a._map = table
        a._hash = h
        return a

    def __getitem__(self, p: Position) -> str:
        return self._map[p]

    def get(self, p, default=None):
        return self._map.get(p, default)

    def __contains__(self, p: object) -> bool:
        return p in self._map

    def __iter__(self) -> Iterator[Position]:
        return iter(self._map)

    def items(self):
        return self._map.items()

    def __len__(self) -> int:
        return len(self._map)

    def __hash__(self) -> int:
        # order-independent sum of placement hashes, so with_tile can update it in O(1)
        if self._hash is None:
            self._hash = sum(hash(item) for item in self._map.items()) % _HASH_MOD
        return self._hash

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Assembly):
            return self._map == other._map
        return NotImplemented

    def __repr__(self) -> str:
        inner = ", ".join(f"({p.x},{p.y}):{n}" for p, n in self.canonical())
        return f"Assembly({{{inner}}})"

    @property
    def domain(self) -> frozenset[Position]:
        return frozenset(self._map)

    def canonical(self) -> tuple[tuple[Position, str], ...]:
        """Placements sorted by position; the canonical node identity."""
        return tuple(sorted(self._map.items()))

    def with_tile(self, p: Position, name: str) -> "Assembly":
        """A copy with ``name`` placed at empty position ``p``."""
        if p in self._map:
            raise ValueError(f"position ({p[0]},{p[1]}) is already occupied")
        table = dict(self._map)
        table[p] = name
        return Assembly._wrap(table, (hash(self) + hash((p, name))) % _HASH_MOD)

    def bounding_box(self) -> tuple[int, int, int, int]:
        xs = [p.x for p in self._map]
        ys = [p.y for p in self._map]
        return min(xs), min(ys), max(xs), max(ys)


_HASH_MOD = 2**61 - 1  # values below this are their own hash()
EMPTY = Assembly()


@dataclass(frozen=True)
class TAS:
    tileset: TileSet
    seed: Assembly
    temperature: int

    @property
    def tau(self) -> int:
        return self.temperature


@dataclass(frozen=True)
class BindingGraph:
    nodes: tuple[Position, ...]
    edges: dict[frozenset, int]

    def weight(self, p: Position, q: Position) -> int:
        return self.edges.get(frozenset((p, q)), 0)

    def adjacency(self) -> dict[Position, dict[Position, int]]:
        adj: dict[Position, dict[Position, int]] = {p: {} for p in self.nodes}
        for pair, w in self.edges.items():
            p, q = tuple(pair)
            adj[p][q] = w
            adj[q][p] = w
        return adj

    def is_connected(self) -> bool:
        if len(self.nodes) <= 1:
            return True
        adj = self.adjacency()
        seen = {self.nodes[0]}
        todo = deque(seen)
        while todo:
            p = todo.popleft()
            for q in adj[p]:
                if q not in seen:
                    seen.add(q)
                    todo.append(q)
        return len(seen) == len(self.nodes)


def binding_graph(alpha: Assembly, ts: TileSet) -> BindingGraph:
    for p, name in alpha.items():
        if name not in ts:
            raise UnknownTileError(name, p)
    edges: dict[frozenset, int] = {}
    for p, name in alpha.items():
        tile = ts[name]
        # east and north only, so each abutting pair is visited once
        for d in (Direction.EAST, Direction.NORTH):
            q = p.neighbor(d)
            other = alpha.get(q)
            if other is None:
                continue
            w = glue_interaction(tile.glue(d), ts[other].glue(d.opposite))
            if w > 0:
                edges[frozenset((p, q))] = w
    return BindingGraph(tuple(sorted(alpha)), edges)


def is_tau_stable(alpha: Assembly, ts: TileSet, tau: int) -> bool:
    if len(alpha) <= 1:
        return True
    g = binding_graph(alpha, ts)
    if not g.is_connected():
        return False
    cut, _ = global_min_cut(g.adjacency())
    return cut >= tau


def is_subassembly(alpha: Mapping[Position, str], beta: Mapping[Position, str]) -> bool:
    """``alpha ⊑ beta``: beta agrees with alpha on every position alpha occupies."""
    if len(alpha) > len(beta):
        return False
    return all(beta.get(p) == name for p, name in alpha.items())


def is_connected_set(points: Iterable[Position]) -> bool:
    pts = set(points)
    if not pts:
        return False
    start = next(iter(pts))
    seen = {start}
    todo = [start]
    while todo:
        p = todo.pop()
        for _, q in p.neighbors():
            if q in pts and q not in seen:
                seen.add(q)
                todo.append(q)
    return len(seen) == len(pts)


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    context: str = ""

    def __str__(self) -> str:
        where = f" [{self.context}]" if self.context else ""
        return f"{self.code}: {self.message}{where}"


def tileset_diagnostics(ts: TileSet) -> list[Diagnostic]:
    out: list[Diagnostic] = []
    if not ts.tiles:
        out.append(Diagnostic("EmptyTileSet", "the tile set has no tile types"))
    seen: set[str] = set()
    for i, t in enumerate(ts.tiles):
        if not t.name:
            out.append(Diagnostic("EmptyTileName", "tile type name must be nonempty", f"tiles[{i}]"))
        elif t.name in seen:
            out.append(Diagnostic("DuplicateTileName", f"tile name {t.name!r} is used more than once", f"tiles[{i}]"))
        seen.add(t.name)
    strengths: dict[str, int] = {}
    conflicts: list[str] = []
    for i, t in enumerate(ts.tiles):
        for d in Direction:
            g = t.glue(d)
            ctx = f"tiles[{i}].{d.key}"
            if g.strength < 0:
                out.append(Diagnostic("NegativeStrength", f"glue {g.label!r} has negative strength {g.strength}", ctx))
            if g.is_null:
                if g.strength != 0:
                    out.append(Diagnostic("NullGlueStrength", f"null glue must have strength 0, got {g.strength}", ctx))
                continue
            prev = strengths.setdefault(g.label, g.strength)
            if prev != g.strength and g.label not in conflicts:
                conflicts.append(g.label)
                out.append(Diagnostic(
                    "GlueStrengthConflict",
                    f"glue {g.label!r} appears with strengths {prev} and {g.strength}",
                    ctx,
                ))
    return out


def validate_tas(t: TAS) -> list[Diagnostic]:
    """All violations of the system's well-formedness rules; empty when valid."""
    out = tileset_diagnostics(t.tileset)
    if not isinstance(t.temperature, int) or t.temperature < 1:
        out.append(Diagnostic("InvalidTemperature", f"temperature must be a positive integer, got {t.temperature!r}"))
    if len(t.seed) == 0:
        out.append(Diagnostic("EmptySeed", "the seed assembly must place at least one tile"))
    unknown = False
    for p, name in t.seed.items():
        if name not in t.tileset:
            unknown = True
            out.append(Diagnostic("UnknownTile", f"seed uses unknown tile {name!r}", f"seed ({p.x},{p.y})"))
    if not unknown and len(t.seed) and isinstance(t.temperature, int) and t.temperature >= 1:
        if not is_tau_stable(t.seed, t.tileset, t.temperature):
            out.append(Diagnostic("SeedNotStable", f"seed is not {t.temperature}-stable"))
    return out
