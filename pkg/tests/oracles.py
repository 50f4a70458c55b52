"""Slow, obviously-correct reference implementations used only by the tests.

None of these share code paths with the package beyond the plain data types.
"""
from __future__ import annotations

import itertools
import random
from collections import deque

from atam.model import TAS, Assembly, Display, Glue, Position, TileSet, TileType

OFFSETS = {"north": (0, 1), "east": (1, 0), "south": (0, -1), "west": (-1, 0)}
OPPOSITE = {"north": "south", "south": "north", "east": "west", "west": "east"}


def bond(tiles: dict, a: str, side: str, b: str) -> int:
    """Strength between tile ``a`` and tile ``b`` sitting on ``a``'s ``side``."""
    ga = getattr(tiles[a], side)
    gb = getattr(tiles[b], OPPOSITE[side])
    if ga.label != "" and ga.label == gb.label and ga.strength == gb.strength:
        return ga.strength
    return 0


def pair_weights(alpha: dict, tiles: dict) -> dict:
    out = {}
    for (x, y), a in alpha.items():
        for side, (dx, dy) in OFFSETS.items():
            q = (x + dx, y + dy)
            if q in alpha and (x, y) < q:
                w = bond(tiles, a, side, alpha[q])
                if w:
                    out[((x, y), q)] = w
    return out


def brute_min_cut(alpha: dict, tiles: dict) -> int:
    """Minimum crossing weight over all 2^n - 2 bipartitions."""
    pts = sorted(alpha)
    weights = pair_weights(alpha, tiles)
    best = None
    for mask in range(1, 2 ** len(pts) - 1):
        side = {p for i, p in enumerate(pts) if mask >> i & 1}
        cut = sum(w for (p, q), w in weights.items() if (p in side) != (q in side))
        best = cut if best is None else min(best, cut)
    return best


def brute_stable(alpha: dict, tiles: dict, tau: int) -> bool:
    if len(alpha) <= 1:
        return True
    return brute_min_cut(alpha, tiles) >= tau


def brute_frontier(t: TAS, alpha: dict) -> list[tuple[int, int, str, int]]:
    """Every (x, y, tile, strength) obtained by trying every tile at every empty cell of a padded box."""
    tiles = t.tileset.by_name
    if not alpha:
        return []
    xs = [p[0] for p in alpha]
    ys = [p[1] for p in alpha]
    out = []
    for x in range(min(xs) - 1, max(xs) + 2):
        for y in range(min(ys) - 1, max(ys) + 2):
            if (x, y) in alpha:
                continue
            for name in tiles:
                s = 0
                for side, (dx, dy) in OFFSETS.items():
                    q = (x + dx, y + dy)
                    if q in alpha:
                        s += bond(tiles, name, side, alpha[q])
                if s >= t.temperature and s > 0:
                    out.append((x, y, name, s))
    return sorted(out)


def brute_producible(t: TAS, max_tiles: int = 10**9, max_states: int = 10**6) -> tuple[set, set]:
    """(producible, terminal) as sets of frozenset placement maps, by naive BFS."""
    start = frozenset(t.seed.items())
    seen = {start}
    terminal = set()
    todo = deque([start])
    while todo:
        cur = todo.popleft()
        alpha = dict(cur)
        moves = brute_frontier(t, alpha)
        if not moves:
            terminal.add(cur)
        if len(alpha) >= max_tiles:
            continue
        for x, y, name, _ in moves:
            nxt = frozenset(cur | {((x, y), name)})
            if nxt not in seen:
                seen.add(nxt)
                if len(seen) > max_states:
                    raise RuntimeError("oracle state budget exceeded")
                todo.append(nxt)
    return seen, terminal


def random_tileset(rng: random.Random, n_tiles: int, labels: str = "abc", max_strength: int = 2,
                   null_rate: float = 0.4) -> TileSet:
    strength = {lab: rng.randint(1, max_strength) for lab in labels}
    tiles = []
    for i in range(n_tiles):
        sides = {}
        for side in OFFSETS:
            if rng.random() < null_rate:
                continue
            lab = rng.choice(labels)
            sides[side] = Glue(lab, strength[lab])
        tiles.append(TileType(f"t{i}", display=Display(), **sides))
    return TileSet(tuple(tiles))


def random_polyomino(rng: random.Random, size: int) -> list[Position]:
    pts = [Position(0, 0)]
    while len(pts) < size:
        x, y = rng.choice(pts)
        dx, dy = rng.choice(list(OFFSETS.values()))
        q = Position(x + dx, y + dy)
        if q not in pts:
            pts.append(q)
    return pts


def random_assembly(rng: random.Random, ts: TileSet, size: int, connected: bool = True) -> Assembly:
    if connected:
        pts = random_polyomino(rng, size)
    else:
        cells = [Position(x, y) for x, y in itertools.product(range(4), range(3))]
        pts = rng.sample(cells, size)
    return Assembly({p: rng.choice(ts.names) for p in pts})


def random_tas(rng: random.Random, n_tiles: int | None = None, tau: int | None = None) -> TAS:
    n = n_tiles or rng.randint(2, 5)
    ts = random_tileset(rng, n, labels="abcd"[: rng.randint(2, 4)], null_rate=0.45)
    tau = tau or rng.choice((1, 2))
    return TAS(ts, Assembly({Position(0, 0): ts.names[0]}), tau)
