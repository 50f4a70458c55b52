"""Example systems shipped with the package.

==============  ==  =========================================================
file            τ   what it does
==============  ==  =========================================================
sys-line        1   ray growing east forever
sys-l           1   three tiles in an L; directed
sys-coop        2   2x2 block whose corner needs two cooperating bonds
sys-nondir      1   two tiles compete for one site; two terminal assemblies
sys-square-N    2   N x N square, strength-2 arms and a cooperative filler
sys-fsa-sep     2   two-row strip that grows forever; the upper row only
                    starts once a "turn" tile is placed in the lower row
==============  ==  =========================================================

``sys-fsa-sep`` is a locally built example, not taken from the literature.
Its shape (rows 0 and 1, x >= 0) can be finitely self-assembled: any finite
stage can still place a turn tile and fill the upper row. It is not strictly
self-assembled, because the lower row alone, grown forever without a turn
tile, is terminal. Only a window of it can be checked here.
"""
from __future__ import annotations

from importlib import resources
from pathlib import Path

from ..model import TAS, Assembly, Display, Glue, Position, TileSet, TileType

SQUARE_SIZES = range(4, 9)


def path(name: str) -> Path:
    return Path(str(resources.files(__name__).joinpath(name)))


def load(name: str) -> TAS:
    from ..documents import parse_tileset

    return parse_tileset(path(name).read_bytes())


def _tas(tiles: list[TileType], seed: dict, tau: int) -> TAS:
    return TAS(TileSet(tuple(tiles)), Assembly({Position(*p): n for p, n in seed.items()}), tau)


def sys_line() -> TAS:
    return _tas([
        TileType("S", east=Glue("r", 1), display=Display("S", "#f4a261")),
        TileType("R", west=Glue("r", 1), east=Glue("r", 1), display=Display("R", "#8ecae6")),
    ], {(0, 0): "S"}, 1)


def sys_l() -> TAS:
    return _tas([
        TileType("S", north=Glue("n", 1), east=Glue("e", 1), display=Display("S", "#f4a261")),
        TileType("E", west=Glue("e", 1), display=Display("E", "#8ecae6")),
        TileType("N", south=Glue("n", 1), display=Display("N", "#90be6d")),
    ], {(0, 0): "S"}, 1)


def sys_coop() -> TAS:
    return _tas([
        TileType("S", north=Glue("b", 2), east=Glue("a", 2), display=Display("S", "#f4a261")),
        TileType("A", west=Glue("a", 2), north=Glue("x", 1), display=Display("A", "#8ecae6")),
        TileType("B", south=Glue("b", 2), east=Glue("y", 1), display=Display("B", "#90be6d")),
        TileType("C", south=Glue("x", 1), west=Glue("y", 1), display=Display("C", "#e9c46a")),
    ], {(0, 0): "S"}, 2)


def sys_nondir() -> TAS:
    return _tas([
        TileType("S", east=Glue("a", 1), display=Display("S", "#f4a261")),
        TileType("A", west=Glue("a", 1), north=Glue("p", 1), display=Display("A", "#8ecae6")),
        TileType("B", west=Glue("a", 1), east=Glue("q", 1), display=Display("B", "#90be6d")),
        TileType("C", south=Glue("p", 1), display=Display("C", "#e9c46a")),
        TileType("D", west=Glue("q", 1), display=Display("D", "#e76f51")),
    ], {(0, 0): "S"}, 1)


def sys_square(n: int) -> TAS:
    """τ=2 builder of the n x n square with corner at the origin."""
    if n < 2:
        raise ValueError("square side must be at least 2")
    tiles = [TileType("O", north=Glue("l0", 2), east=Glue("b0", 2), display=Display("O", "#f4a261"))]
    for i in range(1, n):
        east = Glue(f"b{i}", 2) if i < n - 1 else Glue()
        tiles.append(TileType(f"B{i}", west=Glue(f"b{i - 1}", 2), east=east, north=Glue("v", 1),
                              display=Display("B", "#8ecae6")))
    for j in range(1, n):
        north = Glue(f"l{j}", 2) if j < n - 1 else Glue()
        tiles.append(TileType(f"L{j}", south=Glue(f"l{j - 1}", 2), north=north, east=Glue("h", 1),
                              display=Display("L", "#90be6d")))
    tiles.append(TileType("F", west=Glue("h", 1), south=Glue("v", 1), east=Glue("h", 1), north=Glue("v", 1),
                          display=Display("F", "#e9c46a")))
    return _tas(tiles, {(0, 0): "O"}, 2)


def square_points(n: int) -> frozenset[Position]:
    return frozenset(Position(x, y) for x in range(n) for y in range(n))


def sys_fsa_sep() -> TAS:
    return _tas([
        TileType("S", east=Glue("r", 2), north=Glue("s", 1), display=Display("S", "#f4a261")),
        TileType("R", west=Glue("r", 2), east=Glue("r", 2), north=Glue("s", 1), display=Display("R", "#8ecae6")),
        TileType("T", west=Glue("r", 2), east=Glue("r", 2), north=Glue("u", 2), display=Display("T", "#e76f51")),
        TileType("U", south=Glue("u", 2), west=Glue("w", 1), east=Glue("e", 1), display=Display("U", "#e9c46a")),
        TileType("W", east=Glue("w", 1), south=Glue("s", 1), west=Glue("w", 1), display=Display("W", "#90be6d")),
        TileType("E", west=Glue("e", 1), south=Glue("s", 1), east=Glue("e", 1), display=Display("E", "#90be6d")),
    ], {(0, 0): "S"}, 2)


def fsa_sep_contains(p: Position) -> bool:
    return p[0] >= 0 and p[1] in (0, 1)


FSA_SEP_WINDOW = (6, 2)


def systems() -> dict[str, tuple[TAS, str]]:
    out = {
        "sys-line.json": (sys_line(), "tau=1 ray growing east from the seed; never terminates"),
        "sys-l.json": (sys_l(), "tau=1 directed L of three tiles"),
        "sys-coop.json": (sys_coop(), "tau=2 2x2 block; the corner needs two cooperating strength-1 bonds"),
        "sys-nondir.json": (sys_nondir(), "tau=1; A and B compete for (1,0); two terminal assemblies"),
    }
    for n in SQUARE_SIZES:
        out[f"sys-square-{n}.json"] = (sys_square(n), f"tau=2 builder of the {n}x{n} square")
    out["sys-fsa-sep.json"] = (
        sys_fsa_sep(),
        "locally constructed example (not from the literature): the two-row strip x>=0, y in {0,1} "
        "finitely self-assembles but does not strictly self-assemble",
    )
    return out


def shapes() -> dict[str, tuple[frozenset[Position], str, str]]:
    """name -> (points, description, encoding); encoding is "points", "grid" or "ascii"."""
    out = {
        "l-tromino.shape": (frozenset({Position(0, 0), Position(1, 0), Position(0, 1)}), "L-tromino", "ascii"),
    }
    for n in SQUARE_SIZES:
        out[f"square-{n}.shape"] = (square_points(n), f"{n}x{n} square", "grid" if n % 2 == 0 else "points")
    w, h = FSA_SEP_WINDOW
    out["fsa-sep-window.shape"] = (
        frozenset(Position(x, y) for x in range(w) for y in range(h) if fsa_sep_contains(Position(x, y))),
        f"the strip x>=0, y in {{0,1}} restricted to the {w}x{h} window at the origin",
        "points",
    )
    return out


def regenerate(directory: Path | None = None) -> list[Path]:
    """Rewrite every corpus file from the builders above."""
    from ..documents import format_grid, serialize_shape, serialize_tileset

    directory = directory or path("")
    written = []
    for name, (tas, desc) in systems().items():
        target = Path(directory) / name
        target.write_text(serialize_tileset(tas, desc), encoding="utf-8")
        written.append(target)
    for name, (pts, desc, encoding) in shapes().items():
        target = Path(directory) / name
        if encoding == "ascii":
            text = f"; {desc}\n" + "\n".join(format_grid(pts)) + "\n"
        else:
            text = serialize_shape(pts, grid=encoding == "grid", description=desc)
        target.write_text(text, encoding="utf-8")
        written.append(target)
    return written
