"""Command-line interface.

Exit codes: 0 Holds / success, 1 Fails (or invalid input for ``validate``),
2 Unknown, 64 usage error, 65 bad input data, 66 missing input file,
73 output file cannot be written, 70 internal error.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .documents import (
    DocumentError,
    parse_shape_points,
    parse_snapshot,
    parse_tileset,
    serialize_graph,
    serialize_trace,
    serialize_verdict,
    serialize_witness,
)
from .dynamics import (
    AssemblySequence,
    Bounds,
    NotAttachable,
    ReplayError,
    enumerate_assemblies,
    frontier,
    random_sequence,
    replay,
)
from .model import TAS, Position, UnknownTileError, validate_tas
from .render import render
from .verification import (
    Shape,
    ShapeError,
    Verdict,
    directedness,
    finitely_self_assembles,
    self_assembles,
)

EX_OK = 0
EX_FAILS = 1
EX_UNKNOWN = 2
EX_USAGE = 64
EX_DATAERR = 65
EX_NOINPUT = 66
EX_SOFTWARE = 70
EX_CANTCREAT = 73


class CliError(Exception):
    def __init__(self, message: str, code: int):
        self.code = code
        super().__init__(message)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {v}")
    return v


def _nonnegative(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"must not be negative: {v}")
    return v


def _rng_seed(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not -(2**63) <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return v


_WINDOW = re.compile(r"^(\d+)x(\d+)(?:([+-]\d+)([+-]\d+))?$")


def _window(text: str) -> frozenset[Position]:
    """``WxH`` or ``WxH+X+Y``: a W by H rectangle with lower-left corner (X, Y)."""
    m = _WINDOW.match(text)
    if not m:
        raise argparse.ArgumentTypeError(f"window must look like WxH or WxH+X+Y, got {text!r}")
    w, h = int(m.group(1)), int(m.group(2))
    x0 = int(m.group(3) or 0)
    y0 = int(m.group(4) or 0)
    if w < 1 or h < 1:
        raise argparse.ArgumentTypeError("window must be nonempty")
    return frozenset(Position(x, y) for x in range(x0, x0 + w) for y in range(y0, y0 + h))


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="atam", description="Simulate and verify abstract Tile Assembly Model systems.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    def bounds_args(sp, need_tiles: bool):
        sp.add_argument("--max-tiles", type=_positive, required=need_tiles, metavar="K")
        sp.add_argument("--max-states", type=_positive, metavar="M")
        sp.add_argument("--jobs", type=_positive, default=1, metavar="N", help="worker threads")

    sp = sub.add_parser("validate", help="check a tile set document")
    sp.add_argument("tileset")

    sp = sub.add_parser("simulate", help="grow one random assembly sequence")
    sp.add_argument("tileset")
    sp.add_argument("--rng-seed", type=_rng_seed, required=True, metavar="S")
    sp.add_argument("--max-steps", type=_nonnegative, required=True, metavar="N")
    sp.add_argument("--render", choices=("ascii", "svg"), default="ascii", metavar="FMT")
    sp.add_argument("--trace", metavar="OUT", help="write the step trace here")
    sp.add_argument("--out", metavar="FILE", help="write the render here instead of stdout")
    sp.add_argument("--color", choices=("auto", "always", "never"), default="auto")

    sp = sub.add_parser("enumerate", help="explore all producible assemblies")
    sp.add_argument("tileset")
    bounds_args(sp, True)
    sp.add_argument("--out", metavar="GRAPH", help="write the assembly graph here")
    sp.add_argument("--json", action="store_true", help="print the summary as JSON")

    sp = sub.add_parser("frontier", help="list attachments available to an assembly")
    sp.add_argument("tileset")
    sp.add_argument("--assembly", metavar="SNAPSHOT", help="assembly or trace document (default: the seed)")
    sp.add_argument("--json", action="store_true")

    sp = sub.add_parser("check-directed", help="decide whether the system has one terminal assembly")
    sp.add_argument("tileset")
    bounds_args(sp, True)
    sp.add_argument("--json", action="store_true", help="print the verdict as JSON")
    sp.add_argument("--witness-dir", default=".", metavar="DIR")

    sp = sub.add_parser("verify-shape", help="decide strict or finite self-assembly of a shape")
    sp.add_argument("tileset")
    sp.add_argument("shape")
    sp.add_argument("--mode", choices=("strict", "finite"), required=True)
    sp.add_argument("--window", type=_window, metavar="WxH",
                    help="treat the shape as infinite; the shape file lists its points inside this window")
    bounds_args(sp, False)
    sp.add_argument("--json", action="store_true", help="print the verdict as JSON")
    sp.add_argument("--witness-dir", default=".", metavar="DIR")

    sp = sub.add_parser("render", help="draw an assembly")
    sp.add_argument("tileset")
    sp.add_argument("--assembly", required=True, metavar="SNAPSHOT")
    sp.add_argument("--format", choices=("ascii", "svg"), default="ascii")
    sp.add_argument("--out", metavar="FILE")
    sp.add_argument("--color", choices=("auto", "always", "never"), default="auto")
    return p


def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as e:
        raise CliError(f"cannot read {path}: {e.strerror or e}", EX_NOINPUT) from None


def _write(path: str | Path, data: bytes | str) -> None:
    try:
        p = Path(path)
        if isinstance(data, str):
            p.write_text(data, encoding="utf-8")
        else:
            p.write_bytes(data)
    except OSError as e:
        raise CliError(f"cannot write {path}: {e.strerror or e}", EX_CANTCREAT) from None


def _load_tas(path: str) -> TAS:
    try:
        return parse_tileset(_read(path))
    except DocumentError as e:
        lines = "\n".join(f"  {d}" for d in e.diagnostics)
        raise CliError(f"{path}: invalid tile set\n{lines}", EX_DATAERR) from None


def _load_assembly(t: TAS, path: Optional[str]):
    if path is None:
        return t.seed
    try:
        snap = parse_snapshot(_read(path))
    except DocumentError as e:
        raise CliError(f"{path}: {e}", EX_DATAERR) from None
    if isinstance(snap, AssemblySequence):
        try:
            return replay(t, snap)
        except ReplayError as e:
            raise CliError(f"{path}: trace does not replay: {e}", EX_DATAERR) from None
    for p, name in snap.items():
        if name not in t.tileset:
            raise CliError(f"{path}: unknown tile {name!r} at ({p.x},{p.y})", EX_DATAERR)
    return snap


def _use_color(choice: str, out_path: Optional[str]) -> bool:
    if choice == "always":
        return True
    if choice == "never" or out_path is not None:
        return False
    return sys.stdout.isatty() and not os.environ.get("NO_COLOR")


def _emit(data: bytes, out_path: Optional[str]) -> None:
    if out_path is None:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        _write(out_path, data)


def _bounds(args, region=None) -> Bounds:
    return Bounds(max_tiles=args.max_tiles, max_states=args.max_states, region=region)


def _report(v: Verdict, args) -> int:
    files = []
    if v.witnesses:
        d = Path(args.witness_dir)
        try:
            d.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise CliError(f"cannot create {d}: {e.strerror or e}", EX_CANTCREAT) from None
        for i, w in enumerate(v.witnesses, 1):
            f = d / f"witness-{i}.json"
            _write(f, serialize_witness(w))
            files.append(f)
    if args.json:
        sys.stdout.write(serialize_verdict(v))
    else:
        print(v.status.value)
        if v.note:
            print(f"note: {v.note}")
        for w, f in zip(v.witnesses, files):
            where = f" at ({w.position.x},{w.position.y})" if w.position is not None else ""
            print(f"witness: {f} ({w.reason}{where}; {len(w.trace)} steps)")
    return v.status.exit_code


def cmd_validate(args) -> int:
    try:
        t = parse_tileset(_read(args.tileset), validate=False)
        diags = validate_tas(t)
    except DocumentError as e:
        diags = e.diagnostics
    for d in diags:
        print(f"{args.tileset}: {d}", file=sys.stderr)
    if not diags:
        print(f"{args.tileset}: ok")
    return EX_OK if not diags else EX_FAILS


def cmd_simulate(args) -> int:
    t = _load_tas(args.tileset)
    seq = random_sequence(t, args.rng_seed, args.max_steps)
    final = replay(t, seq)
    if args.trace:
        _write(args.trace, serialize_trace(seq))
    _emit(render(final, t.tileset, args.render, color=_use_color(args.color, args.out)), args.out)
    done = "terminal" if not frontier(t, final) else "not terminal"
    print(f"{len(seq)} steps, {len(final)} tiles, {done}", file=sys.stderr)
    return EX_OK


def cmd_enumerate(args) -> int:
    t = _load_tas(args.tileset)
    g = enumerate_assemblies(t, _bounds(args), jobs=args.jobs)
    if args.out:
        _write(args.out, serialize_graph(g))
    summary = {
        "nodes": len(g.nodes),
        "edges": len(g.edges),
        "terminals": len(g.terminals),
        "truncated_nodes": sum(n.truncated for n in g.nodes),
        "truncated": g.truncated,
        "budget_exceeded": g.budget_exceeded,
    }
    if args.json:
        print(json.dumps(summary, indent=2))
    else:
        for k, v in summary.items():
            print(f"{k}: {str(v).lower() if isinstance(v, bool) else v}")
    return EX_OK


def cmd_frontier(args) -> int:
    t = _load_tas(args.tileset)
    alpha = _load_assembly(t, args.assembly)
    front = frontier(t, alpha)
    if args.json:
        print(json.dumps([{"x": a.position[0], "y": a.position[1], "tile": a.tile, "strength": a.strength}
                          for a in front], indent=2))
    else:
        for a in front:
            print(f"{a.position[0]} {a.position[1]} {a.tile} {a.strength}")
    return EX_OK


def cmd_check_directed(args) -> int:
    t = _load_tas(args.tileset)
    g = enumerate_assemblies(t, _bounds(args), jobs=args.jobs)
    return _report(directedness(g), args)


def cmd_verify_shape(args) -> int:
    t = _load_tas(args.tileset)
    try:
        points = parse_shape_points(_read(args.shape))
        if args.window is None:
            shape = Shape.finite(points)
        else:
            outside = sorted(points - args.window)
            if outside:
                raise CliError(f"{args.shape}: point ({outside[0].x},{outside[0].y}) lies outside the window",
                               EX_DATAERR)
            shape = Shape.windowed(points.__contains__, args.window)
    except (DocumentError, ShapeError) as e:
        raise CliError(f"{args.shape}: {e}", EX_DATAERR) from None
    check = self_assembles if args.mode == "strict" else finitely_self_assembles
    return _report(check(t, shape, _bounds(args), jobs=args.jobs), args)


def cmd_render(args) -> int:
    t = _load_tas(args.tileset)
    alpha = _load_assembly(t, args.assembly)
    _emit(render(alpha, t.tileset, args.format, color=_use_color(args.color, args.out)), args.out)
    return EX_OK


COMMANDS = {
    "validate": cmd_validate,
    "simulate": cmd_simulate,
    "enumerate": cmd_enumerate,
    "frontier": cmd_frontier,
    "check-directed": cmd_check_directed,
    "verify-shape": cmd_verify_shape,
    "render": cmd_render,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EX_USAGE
    try:
        return COMMANDS[args.command](args)
    except CliError as e:
        print(f"atam: {e}", file=sys.stderr)
        return e.code
    except (UnknownTileError, NotAttachable, ReplayError) as e:
        print(f"atam: {e}", file=sys.stderr)
        return EX_DATAERR
    except OverflowError as e:
        print(f"atam: {e}", file=sys.stderr)
        return EX_DATAERR
    except KeyboardInterrupt:
        return 130
    except Exception as e:  # noqa: BLE001
        print(f"atam: internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return EX_SOFTWARE


if __name__ == "__main__":
    sys.exit(main())
