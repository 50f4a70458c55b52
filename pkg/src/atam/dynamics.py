"""Growth: single-tile attachment, frontiers, sequences and state-space enumeration.

Random sampling uses numpy's PCG64 bit generator (PCG XSL-RR 128/64). Only its
raw 64-bit output stream is consumed, and bounded integers are drawn with
plain rejection sampling, so a given ``rng_seed`` yields the same sequence on
every platform and numpy release that ships PCG64.

Producibility is decided greedily. Bond strength at an empty position can only
grow as tiles are added, so a tile that may attach to some β ⊑ α may still
attach to any β' with β ⊑ β' ⊑ α (when its position is still empty). Hence the
order of attachments never matters when building toward a fixed target, and
a single greedy fixed point decides membership.
"""
from __future__ import annotations

from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .model import COORD_MAX, COORD_MIN, TAS, Assembly, Direction, Position, is_subassembly

_SIDES = tuple(Direction)
_STEPS = tuple((d, d.opposite, d.offset[0], d.offset[1]) for d in _SIDES)


def _around(p: Position) -> list[tuple[Direction, Direction, Position]]:
    """(side, opposite side, neighbor) for the four sides of ``p``."""
    x, y = p
    if not (COORD_MIN < x < COORD_MAX and COORD_MIN < y < COORD_MAX):
        return [(d, d.opposite, p.neighbor(d)) for d in _SIDES]  # raises OverflowError at the edge
    return [(d, o, Position(x + dx, y + dy)) for d, o, dx, dy in _STEPS]


class NotAttachable(ValueError):
    def __init__(self, position: Position, tile: str, strength: int, reason: str = ""):
        self.position = position
        self.tile = tile
        self.strength = strength
        msg = f"tile {tile!r} cannot attach at ({position[0]},{position[1]}) with bound strength {strength}"
        if reason:
            msg += f": {reason}"
        super().__init__(msg)


class ReplayError(ValueError):
    def __init__(self, index: int, cause: Exception):
        self.index = index
        self.cause = cause
        super().__init__(f"step {index}: {cause}")


@dataclass(frozen=True, order=True)
class Attachment:
    position: Position
    tile: str
    strength: int = field(compare=False, default=0)

    @property
    def sort_key(self) -> tuple[int, int, str]:
        return (self.position[0], self.position[1], self.tile)


@dataclass(frozen=True)
class AssemblySequence:
    start: Assembly
    steps: tuple[Attachment, ...] = ()

    def __len__(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class Bounds:
    max_tiles: Optional[int] = None
    region: Optional[frozenset[Position]] = None
    max_states: Optional[int] = None

    def __post_init__(self):
        if self.region is not None:
            object.__setattr__(self, "region", frozenset(Position(*p) for p in self.region))
        for name in ("max_tiles", "max_states"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise ValueError(f"{name} must be positive, got {v}")

    @property
    def is_bounded(self) -> bool:
        return self.max_tiles is not None or self.region is not None or self.max_states is not None

    def permits(self, size_after: int, p: Position) -> bool:
        if self.max_tiles is not None and size_after > self.max_tiles:
            return False
        if self.region is not None and p not in self.region:
            return False
        return True

    def describe(self) -> str:
        parts = []
        if self.max_tiles is not None:
            parts.append(f"max_tiles={self.max_tiles}")
        if self.region is not None:
            parts.append(f"region of {len(self.region)} positions")
        if self.max_states is not None:
            parts.append(f"max_states={self.max_states}")
        return ", ".join(parts) or "no bounds"


def bound_strength(t: TAS, placements, p: Position, name: str) -> int:
    """Total strength binding tile ``name`` at ``p`` to its occupied neighbors."""
    tiles = t.tileset
    tile = tiles[name]
    total = 0
    for d, o, q in _around(p):
        other = placements.get(q)
        if other is not None:
            a = tile.glue(d)
            b = tiles[other].glue(o)
            if a.label and a.label == b.label and a.strength == b.strength:
                total += a.strength
    return total


def attachable(t: TAS, alpha: Assembly, p: Position, name: str) -> Optional[Attachment]:
    p = Position(*p)
    t.tileset[name]  # raises UnknownTileError
    if p in alpha:
        return None
    s = bound_strength(t, alpha, p, name)
    if s >= t.temperature:
        return Attachment(p, name, s)
    return None


def _attachments_at(t: TAS, placements, p: Position) -> list[Attachment]:
    """Every tile that can attach at empty position ``p``, with its bound strength."""
    totals: dict[str, int] = {}
    index = t.tileset.side_index
    by_name = t.tileset.by_name
    for d, o, q in _around(p):
        other = placements.get(q)
        if other is None:
            continue
        g = by_name[other].glue(o)
        if not g.label or g.strength <= 0:
            continue
        for tile in index.get((d, g.label), ()):
            if tile.glue(d).strength == g.strength:
                totals[tile.name] = totals.get(tile.name, 0) + g.strength
    tau = t.temperature
    return [Attachment(p, name, s) for name, s in totals.items() if s >= tau]


def _empty_neighbors(alpha, positions: Iterable[Position]) -> set[Position]:
    out = set()
    for p in positions:
        for _, _, q in _around(p):
            if q not in alpha:
                out.add(q)
    return out


def frontier(t: TAS, alpha: Assembly) -> list[Attachment]:
    """All attachments available to ``alpha``, ordered by (x, y, tile name)."""
    out: list[Attachment] = []
    for p in _empty_neighbors(alpha, alpha):
        out.extend(_attachments_at(t, alpha, p))
    out.sort(key=lambda a: a.sort_key)
    return out


def _advance_frontier(t: TAS, child: Assembly, parent_frontier: Sequence[Attachment], p: Position) -> list[Attachment]:
    # only the new tile's empty neighbors can change their bond totals
    touched = _empty_neighbors(child, (p,))
    out = [a for a in parent_frontier if a.position != p and a.position not in touched]
    for q in touched:
        out.extend(_attachments_at(t, child, q))
    out.sort(key=lambda a: a.sort_key)
    return out


def attach(t: TAS, alpha: Assembly, a: Attachment) -> Assembly:
    p = Position(*a.position)
    if p in alpha:
        raise NotAttachable(p, a.tile, 0, "position is occupied")
    s = bound_strength(t, alpha, p, a.tile)
    if s < t.temperature:
        raise NotAttachable(p, a.tile, s, f"temperature is {t.temperature}")
    return alpha.with_tile(p, a.tile)


def replay(t: TAS, s: AssemblySequence, check: bool = False) -> Assembly:
    """Result of an assembly sequence.

    With ``check`` the result is verified to be the union of all stage domains
    and every stage is verified to be a subassembly of it.
    """
    if s.start != t.seed:
        raise ReplayError(0, ValueError("sequence does not start at the seed"))
    alpha = s.start
    stages = [alpha] if check else None
    for i, step in enumerate(s.steps):
        try:
            nxt = attach(t, alpha, step)
        except NotAttachable as e:
            raise ReplayError(i, e) from e
        if step.strength and bound_strength(t, alpha, step.position, step.tile) != step.strength:
            raise ReplayError(i, ValueError(
                f"recorded strength {step.strength} does not match the bond at ({step.position[0]},{step.position[1]})"))
        alpha = nxt
        if check:
            stages.append(alpha)
    if check:
        union = frozenset().union(*(st.domain for st in stages))
        assert union == alpha.domain, "result domain differs from the union of stage domains"
        assert all(is_subassembly(st, alpha) for st in stages), "a stage is not a subassembly of the result"
    return alpha


class _Rng:
    """Uniform bounded draws from the raw PCG64 stream."""

    def __init__(self, seed: int):
        self._bits = np.random.PCG64(seed & (2**64 - 1))

    def below(self, n: int) -> int:
        if n <= 0:
            raise ValueError("empty range")
        limit = (2**64 // n) * n
        while True:
            r = int(self._bits.random_raw())
            if r < limit:
                return r % n


def random_sequence(t: TAS, rng_seed: int, max_steps: int) -> AssemblySequence:
    rng = _Rng(rng_seed)
    alpha = t.seed
    front = frontier(t, alpha)
    steps: list[Attachment] = []
    while front and len(steps) < max_steps:
        a = front[rng.below(len(front))]
        alpha = alpha.with_tile(a.position, a.tile)
        steps.append(a)
        front = _advance_frontier(t, alpha, front, a.position)
    return AssemblySequence(t.seed, tuple(steps))


@dataclass
class Node:
    id: int
    assembly: Assembly
    terminal: bool = False
    truncated: bool = False
    parent: Optional[int] = None
    via: Optional[Attachment] = None


@dataclass(frozen=True)
class Escape:
    """Exploration stopped because ``attachment`` was available at node ``node``."""

    node: int
    attachment: Attachment


@dataclass
class AssemblyGraph:
    tas: TAS
    bounds: Bounds
    nodes: list[Node] = field(default_factory=list)
    edges: list[tuple[int, Attachment, int]] = field(default_factory=list)
    budget_exceeded: bool = False
    escape: Optional[Escape] = None

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def terminals(self) -> list[Node]:
        return [n for n in self.nodes if n.terminal]

    @property
    def truncated(self) -> bool:
        return self.budget_exceeded or self.escape is not None or any(n.truncated for n in self.nodes)

    def index(self) -> dict[Assembly, int]:
        return {n.assembly: n.id for n in self.nodes}

    def trace_to(self, node_id: int) -> AssemblySequence:
        """Assembly sequence from the seed along BFS discovery edges."""
        steps = []
        n = self.nodes[node_id]
        while n.parent is not None:
            steps.append(n.via)
            n = self.nodes[n.parent]
        return AssemblySequence(self.tas.seed, tuple(reversed(steps)))

    def successors(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in self.nodes]
        for src, _, dst in self.edges:
            out[src].append(dst)
        return out


class StateBudgetExceeded(RuntimeError):
    def __init__(self, graph: AssemblyGraph):
        self.graph = graph
        super().__init__(f"state budget of {graph.bounds.max_states} exceeded after {len(graph)} states")


def _expand(t: TAS, alpha: Assembly, front: Sequence[Attachment]):
    return [(a, alpha.with_tile(a.position, a.tile)) for a in front]


def enumerate_assemblies(
    t: TAS,
    bounds: Bounds = Bounds(),
    *,
    jobs: int = 1,
    forbidden: Optional[Callable[[Position], bool]] = None,
    raise_on_budget: bool = False,
) -> AssemblyGraph:
    """Breadth-first closure of the producible assemblies permitted by ``bounds``.

    Nodes are numbered in discovery order and each node's attachments are
    taken in (x, y, tile) order, so the graph does not depend on ``jobs``.
    Layers are expanded on a thread pool; deduplication happens on the
    calling thread in node order.

    If ``forbidden(p)`` holds for a position with an available attachment,
    exploration stops at once and the graph records the escape.
    """
    graph = AssemblyGraph(t, bounds)
    seen: dict[Assembly, int] = {t.seed: 0}
    graph.nodes.append(Node(0, t.seed))
    fronts: dict[int, list[Attachment]] = {0: frontier(t, t.seed)}
    layer = [0]
    pool = ThreadPoolExecutor(max_workers=jobs) if jobs > 1 else None

    def allowed(node_id: int) -> list[Attachment]:
        node = graph.nodes[node_id]
        front = fronts[node_id]
        node.terminal = not front
        size = len(node.assembly) + 1
        keep = [a for a in front if bounds.permits(size, a.position)]
        if len(keep) < len(front):
            node.truncated = True
        return keep

    try:
        while layer:
            work = []
            for nid in layer:
                if forbidden is not None:
                    for a in fronts[nid]:
                        if forbidden(a.position):
                            graph.escape = Escape(nid, a)
                            graph.nodes[nid].terminal = False
                            return graph
                work.append((nid, allowed(nid)))
            if pool is None:
                expanded = [_expand(t, graph.nodes[nid].assembly, keep) for nid, keep in work]
            else:
                expanded = list(pool.map(lambda w: _expand(t, graph.nodes[w[0]].assembly, w[1]), work))
            nxt: list[int] = []
            for (nid, _), children in zip(work, expanded):
                parent_front = fronts.pop(nid)
                for a, child in children:
                    cid = seen.get(child)
                    if cid is None:
                        if bounds.max_states is not None and len(graph.nodes) >= bounds.max_states:
                            graph.budget_exceeded = True
                            graph.nodes[nid].truncated = True
                            continue
                        cid = len(graph.nodes)
                        seen[child] = cid
                        graph.nodes.append(Node(cid, child, parent=nid, via=a))
                        fronts[cid] = _advance_frontier(t, child, parent_front, a.position)
                        nxt.append(cid)
                    graph.edges.append((nid, a, cid))
            layer = nxt
    finally:
        if pool is not None:
            pool.shutdown()

    if graph.budget_exceeded and raise_on_budget:
        raise StateBudgetExceeded(graph)
    return graph


def is_producible(t: TAS, alpha: Assembly) -> bool:
    if not is_subassembly(t.seed, alpha):
        return False
    for name in alpha.values():
        if name not in t.tileset:
            return False
    current = dict(t.seed.items())
    pending = deque(_empty_neighbors(current, current))
    queued = set(pending)
    while pending:
        p = pending.popleft()
        queued.discard(p)
        name = alpha.get(p)
        if name is None or p in current:
            continue
        if bound_strength(t, current, p, name) < t.temperature:
            continue
        current[p] = name
        for _, _, q in _around(p):
            if q not in current and q in alpha and q not in queued:
                pending.append(q)
                queued.add(q)
    return len(current) == len(alpha)
