"""JSON documents: tile sets, shapes, assembly snapshots, traces, graphs, verdicts.

Every document carries ``schema_version``. Output is deterministic: keys are
emitted in a fixed order and lists in canonical order, so files are diffable
and usable as golden references.
"""
from __future__ import annotations

import json
from typing import Any, Iterable, Optional, Union

import jsonschema

from .dynamics import AssemblyGraph, AssemblySequence, Attachment
from .model import (
    TAS,
    Assembly,
    Diagnostic,
    Display,
    Glue,
    Position,
    TileSet,
    TileType,
    validate_tas,
)
from .verification import Shape, Verdict, Witness

SCHEMA_VERSION = 1

_GLUE = {
    "type": "array",
    "prefixItems": [{"type": "string"}, {"type": "integer", "minimum": 0}],
    "minItems": 2,
    "maxItems": 2,
}
_PLACEMENT = {
    "type": "object",
    "properties": {"x": {"type": "integer"}, "y": {"type": "integer"}, "tile": {"type": "string"}},
    "required": ["x", "y", "tile"],
    "additionalProperties": False,
}
_STEP = {
    "type": "object",
    "properties": {
        "x": {"type": "integer"},
        "y": {"type": "integer"},
        "tile": {"type": "string"},
        "strength": {"type": "integer", "minimum": 0},
    },
    "required": ["x", "y", "tile"],
    "additionalProperties": False,
}
_POINT = {
    "type": "object",
    "properties": {"x": {"type": "integer"}, "y": {"type": "integer"}},
    "required": ["x", "y"],
    "additionalProperties": False,
}

TILESET_SCHEMA = {
    "type": "object",
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "kind": {"const": "tileset"},
        "description": {"type": "string"},
        "temperature": {"type": "integer"},
        "tiles": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "name": {"type": "string"},
                    "north": _GLUE,
                    "east": _GLUE,
                    "south": _GLUE,
                    "west": _GLUE,
                    "display": {
                        "type": "object",
                        "properties": {"label": {"type": "string", "minLength": 1}, "color": {"type": "string"}},
                        "additionalProperties": False,
                    },
                },
                "required": ["name"],
                "additionalProperties": False,
            },
        },
        "seed": {"type": "array", "items": _PLACEMENT},
    },
    "required": ["schema_version", "temperature", "tiles", "seed"],
    "additionalProperties": False,
}

SHAPE_SCHEMA = {
    "type": "object",
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "kind": {"const": "shape"},
        "description": {"type": "string"},
        "points": {"type": "array", "items": _POINT},
        "grid": {"type": "array", "items": {"type": "string"}},
        "origin": _POINT,
    },
    "required": ["schema_version"],
    "oneOf": [{"required": ["points"]}, {"required": ["grid"]}],
    "additionalProperties": False,
}

ASSEMBLY_SCHEMA = {
    "type": "object",
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "kind": {"const": "assembly"},
        "tiles": {"type": "array", "items": _PLACEMENT},
    },
    "required": ["schema_version", "kind", "tiles"],
    "additionalProperties": False,
}

TRACE_SCHEMA = {
    "type": "object",
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "kind": {"const": "trace"},
        "seed": {"type": "array", "items": _PLACEMENT},
        "steps": {"type": "array", "items": _STEP},
    },
    "required": ["schema_version", "kind", "seed", "steps"],
    "additionalProperties": False,
}


class DocumentError(ValueError):
    """A document could not be decoded. ``diagnostics`` lists every problem found."""

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = diagnostics
        super().__init__("; ".join(str(d) for d in diagnostics))


def _load_json(data: Union[bytes, str]) -> Any:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as e:
            raise DocumentError([Diagnostic("SyntaxError", f"not UTF-8 text: {e.reason}", f"byte {e.start}")]) from None
    try:
        return json.loads(data)
    except json.JSONDecodeError as e:
        raise DocumentError([Diagnostic("SyntaxError", e.msg, f"line {e.lineno}, column {e.colno}")]) from None


def _field_path(path: Iterable) -> str:
    out = ""
    for part in path:
        out += f"[{part}]" if isinstance(part, int) else (f".{part}" if out else str(part))
    return out or "<document>"


def _check_schema(doc: Any, schema: dict) -> None:
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(doc), key=lambda e: (list(map(str, e.absolute_path)), e.message))
    if errors:
        raise DocumentError([
            Diagnostic("SchemaViolation", e.message, _field_path(e.absolute_path)) for e in errors
        ])


def _forms(obj: Any, indent: int, width: int) -> tuple[str, str]:
    """(one-line form, indented form) of ``obj``, built bottom-up in one pass."""
    if isinstance(obj, dict):
        keys = [json.dumps(k, ensure_ascii=False) for k in obj]
        kids = [_forms(v, indent + 2, width) for v in obj.values()]
        flat = "{" + ", ".join(f"{k}: {f}" for k, (f, _) in zip(keys, kids)) + "}"
        lines = [f"{k}: {p}" for k, (_, p) in zip(keys, kids)]
        open_, close = "{", "}"
    elif isinstance(obj, list):
        kids = [_forms(v, indent + 2, width) for v in obj]
        flat = "[" + ", ".join(f for f, _ in kids) + "]"
        lines = [p for _, p in kids]
        open_, close = "[", "]"
    else:
        flat = json.dumps(obj, ensure_ascii=False)
        return flat, flat
    if not lines or len(flat) + indent <= width:
        return flat, flat
    pad = " " * (indent + 2)
    return flat, open_ + "\n" + ",\n".join(pad + ln for ln in lines) + "\n" + " " * indent + close


def _to_json(doc: Any) -> str:
    """Indented JSON that keeps any value fitting on one line on one line."""
    return _forms(doc, 0, 88)[1] + "\n"


def _placements_doc(alpha: Assembly) -> list[dict]:
    return [{"x": p.x, "y": p.y, "tile": name} for p, name in alpha.canonical()]


def _placements_from(items: list[dict], context: str) -> Assembly:
    table: dict[Position, str] = {}
    dups = []
    for i, item in enumerate(items):
        p = Position(item["x"], item["y"])
        if p in table:
            dups.append(Diagnostic("DuplicatePosition", f"position ({p.x},{p.y}) is listed twice", f"{context}[{i}]"))
        table[p] = item["tile"]
    if dups:
        raise DocumentError(dups)
    return Assembly(table)


# -- tile sets ---------------------------------------------------------------

def tas_from_doc(doc: Any, *, validate: bool = True) -> TAS:
    _check_schema(doc, TILESET_SCHEMA)
    tiles = []
    for item in doc["tiles"]:
        sides = {side: Glue(*item[side]) for side in ("north", "east", "south", "west") if side in item}
        disp = item.get("display", {})
        tiles.append(TileType(item["name"], display=Display(disp.get("label"), disp.get("color")), **sides))
    t = TAS(TileSet(tuple(tiles)), _placements_from(doc["seed"], "seed"), doc["temperature"])
    if validate:
        diags = validate_tas(t)
        if diags:
            raise DocumentError(diags)
    return t


def parse_tileset(data: Union[bytes, str], *, validate: bool = True) -> TAS:
    """Decode a tile set document into a validated TAS.

    Raises :class:`DocumentError` listing syntax, schema or validation problems.
    """
    return tas_from_doc(_load_json(data), validate=validate)


def tas_to_doc(t: TAS, description: Optional[str] = None) -> dict:
    doc: dict[str, Any] = {"schema_version": SCHEMA_VERSION, "kind": "tileset"}
    if description:
        doc["description"] = description
    doc["temperature"] = t.temperature
    tiles = []
    for tile in t.tileset.tiles:
        item: dict[str, Any] = {"name": tile.name}
        for side in ("north", "east", "south", "west"):
            g = getattr(tile, side)
            if not g.is_null or g.strength:
                item[side] = [g.label, g.strength]
        disp = {k: v for k, v in (("label", tile.display.label), ("color", tile.display.color)) if v is not None}
        if disp:
            item["display"] = disp
        tiles.append(item)
    doc["tiles"] = tiles
    doc["seed"] = _placements_doc(t.seed)
    return doc


def serialize_tileset(t: TAS, description: Optional[str] = None) -> str:
    return _to_json(tas_to_doc(t, description))


# -- shapes ------------------------------------------------------------------

def parse_grid(rows: list[str], origin: Position = Position(0, 0)) -> frozenset[Position]:
    """Decode an ASCII grid; the first row is the top. ``@`` is an in-shape cell at ``origin``."""
    rows = [r.rstrip("\n") for r in rows]
    anchors = [(r, c) for r, row in enumerate(rows) for c, ch in enumerate(row) if ch == "@"]
    if len(anchors) != 1:
        raise DocumentError([Diagnostic("SchemaViolation", f"grid needs exactly one '@' anchor, found {len(anchors)}", "grid")])
    ar, ac = anchors[0]
    points = set()
    for r, row in enumerate(rows):
        for c, ch in enumerate(row):
            if ch in "#@":
                points.add(Position(origin.x + c - ac, origin.y + ar - r))
            elif ch not in ". ":
                raise DocumentError([Diagnostic("SchemaViolation", f"unexpected grid character {ch!r}", f"grid[{r}][{c}]")])
    return frozenset(points)


def format_grid(points: Iterable[Position], anchor: Position = Position(0, 0)) -> list[str]:
    pts = set(points)
    if anchor not in pts:
        raise ValueError("the anchor must be a point of the shape")
    xs = [p.x for p in pts]
    ys = [p.y for p in pts]
    rows = []
    for y in range(max(ys), min(ys) - 1, -1):
        row = ""
        for x in range(min(xs), max(xs) + 1):
            p = Position(x, y)
            row += "@" if p == anchor else ("#" if p in pts else ".")
        rows.append(row)
    return rows


def parse_shape_points(data: Union[bytes, str]) -> frozenset[Position]:
    """Point set of a shape document (JSON) or of a bare ASCII grid file."""
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    if text.lstrip().startswith("{"):
        doc = _load_json(text)
        _check_schema(doc, SHAPE_SCHEMA)
        if "points" in doc:
            pts = [Position(p["x"], p["y"]) for p in doc["points"]]
            if len(set(pts)) != len(pts):
                raise DocumentError([Diagnostic("DuplicatePosition", "a point is listed twice", "points")])
            return frozenset(pts)
        o = doc.get("origin", {"x": 0, "y": 0})
        return parse_grid(doc["grid"], Position(o["x"], o["y"]))
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith(";")]
    return parse_grid(lines)


def parse_shape(data: Union[bytes, str]) -> Shape:
    return Shape.finite(parse_shape_points(data))


def shape_to_doc(points: Iterable[Position], *, grid: bool = False, description: Optional[str] = None) -> dict:
    pts = sorted(Position(*p) for p in points)
    doc: dict[str, Any] = {"schema_version": SCHEMA_VERSION, "kind": "shape"}
    if description:
        doc["description"] = description
    if grid:
        anchor = Position(0, 0) if Position(0, 0) in pts else pts[0]
        doc["grid"] = format_grid(pts, anchor)
        doc["origin"] = {"x": anchor.x, "y": anchor.y}
    else:
        doc["points"] = [{"x": p.x, "y": p.y} for p in pts]
    return doc


def serialize_shape(points: Iterable[Position], *, grid: bool = False, description: Optional[str] = None) -> str:
    return _to_json(shape_to_doc(points, grid=grid, description=description))


# -- assemblies and traces ---------------------------------------------------

def assembly_to_doc(alpha: Assembly) -> dict:
    return {"schema_version": SCHEMA_VERSION, "kind": "assembly", "tiles": _placements_doc(alpha)}


def trace_to_doc(seq: AssemblySequence) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "trace",
        "seed": _placements_doc(seq.start),
        "steps": [
            {"x": a.position[0], "y": a.position[1], "tile": a.tile, "strength": a.strength} for a in seq.steps
        ],
    }


def serialize_assembly(alpha: Assembly) -> str:
    return _to_json(assembly_to_doc(alpha))


def serialize_trace(seq: AssemblySequence) -> str:
    return _to_json(trace_to_doc(seq))


def parse_snapshot(data: Union[bytes, str]) -> Union[Assembly, AssemblySequence]:
    """Decode an assembly snapshot or a trace, depending on its ``kind``."""
    doc = _load_json(data)
    kind = doc.get("kind") if isinstance(doc, dict) else None
    if kind == "trace":
        _check_schema(doc, TRACE_SCHEMA)
        steps = tuple(
            Attachment(Position(s["x"], s["y"]), s["tile"], s.get("strength", 0)) for s in doc["steps"]
        )
        return AssemblySequence(_placements_from(doc["seed"], "seed"), steps)
    if kind == "witness":
        return parse_snapshot(json.dumps(doc.get("trace")))
    _check_schema(doc, ASSEMBLY_SCHEMA)
    return _placements_from(doc["tiles"], "tiles")


# -- graphs and verdicts -----------------------------------------------------

def graph_to_doc(g: AssemblyGraph) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "assembly-graph",
        "bounds": {
            "max_tiles": g.bounds.max_tiles,
            "max_states": g.bounds.max_states,
            "region": None if g.bounds.region is None else [[p.x, p.y] for p in sorted(g.bounds.region)],
        },
        "node_count": len(g.nodes),
        "edge_count": len(g.edges),
        "terminal_count": len(g.terminals),
        "truncated": g.truncated,
        "budget_exceeded": g.budget_exceeded,
        "nodes": [
            {
                "id": n.id,
                "tiles": [[p.x, p.y, name] for p, name in n.assembly.canonical()],
                "terminal": n.terminal,
                "truncated": n.truncated,
            }
            for n in g.nodes
        ],
        "edges": [[src, a.position[0], a.position[1], a.tile, a.strength, dst] for src, a, dst in g.edges],
    }


def serialize_graph(g: AssemblyGraph) -> str:
    """Graph document with one node or edge per line."""
    doc = graph_to_doc(g)
    lines = ["{"]
    for k, v in doc.items():
        if k in ("nodes", "edges"):
            continue
        lines.append(f"  {json.dumps(k)}: {json.dumps(v, separators=(', ', ': '))},")
    for key in ("nodes", "edges"):
        items = [json.dumps(item, ensure_ascii=False, separators=(", ", ": ")) for item in doc[key]]
        lines.append(f'  "{key}": [')
        lines.append(",\n".join("    " + it for it in items))
        lines.append("  ]," if key == "nodes" else "  ]")
    lines.append("}")
    return "\n".join(ln for ln in lines if ln) + "\n"


def witness_to_doc(w: Witness) -> dict:
    doc: dict[str, Any] = {"schema_version": SCHEMA_VERSION, "kind": "witness", "reason": w.reason}
    if w.position is not None:
        doc["position"] = {"x": w.position.x, "y": w.position.y}
    if w.attachment is not None:
        a = w.attachment
        doc["attachment"] = {"x": a.position[0], "y": a.position[1], "tile": a.tile, "strength": a.strength}
    doc["assembly"] = _placements_doc(w.assembly)
    doc["trace"] = trace_to_doc(w.trace)
    return doc


def verdict_to_doc(v: Verdict) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "verdict",
        "status": v.status.value,
        "note": v.note,
        "witnesses": [witness_to_doc(w) for w in v.witnesses],
    }


def serialize_verdict(v: Verdict) -> str:
    return _to_json(verdict_to_doc(v))


def serialize_witness(w: Witness) -> str:
    return _to_json(witness_to_doc(w))
