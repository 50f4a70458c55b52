"""Simulator and verifier for the abstract Tile Assembly Model."""
from __future__ import annotations

__version__ = "0.1.0"

from .model import (  # noqa: E402
    TAS,
    Assembly,
    BindingGraph,
    Diagnostic,
    Direction,
    Display,
    Glue,
    Position,
    TileSet,
    TileType,
    UnknownTileError,
    binding_graph,
    glue_interaction,
    is_subassembly,
    is_tau_stable,
    validate_tas,
)
from .dynamics import (  # noqa: E402
    AssemblyGraph,
    AssemblySequence,
    Attachment,
    Bounds,
    NotAttachable,
    ReplayError,
    StateBudgetExceeded,
    attach,
    attachable,
    enumerate_assemblies,
    frontier,
    is_producible,
    random_sequence,
    replay,
)
from .verification import (  # noqa: E402
    Shape,
    ShapeError,
    Status,
    Verdict,
    Witness,
    finitely_self_assembles,
    is_directed,
    self_assembles,
    shape_of,
)
from .documents import DocumentError, parse_shape, parse_tileset, serialize_tileset  # noqa: E402
from .render import render  # noqa: E402
