"""Decision procedures over the explored state space.

Answers are three-valued. ``Holds`` and ``Fails`` are definitive; ``Unknown``
means a bound was hit before the question could be settled, and the verdict
note says which one.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from .dynamics import (
    AssemblyGraph,
    AssemblySequence,
    Attachment,
    Bounds,
    enumerate_assemblies,
)
from .model import TAS, Assembly, Position, is_connected_set


class ShapeError(ValueError):
    pass


class EmptyAssembly(ShapeError):
    pass


@dataclass(frozen=True)
class Shape:
    """A set of lattice points.

    Finite mode holds an explicit point set. Infinite mode holds a membership
    test that is only trusted inside ``window``.
    """

    points: Optional[frozenset[Position]] = None
    contains: Optional[Callable[[Position], bool]] = field(default=None, compare=False)
    window: Optional[frozenset[Position]] = None

    def __post_init__(self):
        if self.points is not None:
            pts = frozenset(Position(*p) for p in self.points)
            object.__setattr__(self, "points", pts)
            if not pts:
                raise ShapeError("a shape must contain at least one point")
            if not is_connected_set(pts):
                raise ShapeError("a finite shape must be edge-connected")
        else:
            if self.contains is None or not self.window:
                raise ShapeError("an infinite shape needs a membership test and a nonempty window")
            object.__setattr__(self, "window", frozenset(Position(*p) for p in self.window))

    @classmethod
    def finite(cls, points: Iterable) -> "Shape":
        return cls(points=frozenset(points))

    @classmethod
    def windowed(cls, contains: Callable[[Position], bool], window: Iterable) -> "Shape":
        return cls(contains=contains, window=frozenset(window))

    @property
    def is_finite(self) -> bool:
        return self.points is not None

    def __contains__(self, p) -> bool:
        p = Position(*p)
        if self.points is not None:
            return p in self.points
        return bool(self.contains(p))

    def __len__(self) -> int:
        if self.points is None:
            raise TypeError("an infinite shape has no length")
        return len(self.points)

    def within_window(self) -> frozenset[Position]:
        """Points of the shape that lie inside the window (all points in finite mode)."""
        if self.points is not None:
            return self.points
        return frozenset(p for p in self.window if self.contains(p))


def shape_of(alpha: Assembly) -> Shape:
    if len(alpha) == 0:
        raise EmptyAssembly("the empty assembly has no shape")
    return Shape.finite(alpha.domain)


class Status(enum.Enum):
    HOLDS = "Holds"
    FAILS = "Fails"
    UNKNOWN = "Unknown"

    @property
    def exit_code(self) -> int:
        return {"Holds": 0, "Fails": 1, "Unknown": 2}[self.value]

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Witness:
    assembly: Assembly
    trace: AssemblySequence
    reason: str
    position: Optional[Position] = None
    attachment: Optional[Attachment] = None


@dataclass(frozen=True)
class Verdict:
    status: Status
    witnesses: tuple[Witness, ...] = ()
    note: str = ""

    def __post_init__(self):
        if self.status is Status.FAILS and not self.witnesses:
            raise ValueError("a failing verdict needs a witness")

    @property
    def witness(self) -> Optional[Witness]:
        return self.witnesses[0] if self.witnesses else None

    @property
    def holds(self) -> bool:
        return self.status is Status.HOLDS


def _node_witness(g: AssemblyGraph, nid: int, reason: str) -> Witness:
    return Witness(g.nodes[nid].assembly, g.trace_to(nid), reason)


def _escape_witness(g: AssemblyGraph) -> Witness:
    esc = g.escape
    p = esc.attachment.position
    return Witness(
        g.nodes[esc.node].assembly,
        g.trace_to(esc.node),
        f"tile {esc.attachment.tile!r} can attach at ({p.x},{p.y}), outside the shape",
        position=p,
        attachment=esc.attachment,
    )


def _bound_note(g: AssemblyGraph) -> str:
    if g.budget_exceeded:
        return f"state budget exhausted after {len(g)} states ({g.bounds.describe()})"
    return f"exploration truncated by bounds ({g.bounds.describe()}) after {len(g)} states"


def directedness(g: AssemblyGraph) -> Verdict:
    terms = g.terminals
    if len(terms) >= 2:
        a, b = terms[0], terms[1]
        return Verdict(Status.FAILS, (
            _node_witness(g, a.id, "terminal assembly"),
            _node_witness(g, b.id, "a second, distinct terminal assembly"),
        ), f"at least {len(terms)} terminal assemblies" if g.truncated else f"{len(terms)} terminal assemblies")
    if g.truncated:
        return Verdict(Status.UNKNOWN, note=f"{len(terms)} terminal assembly found; {_bound_note(g)}")
    if len(terms) == 1:
        return Verdict(Status.HOLDS, note=f"1 terminal assembly among {len(g)} producible assemblies")
    # an untruncated finite graph always has a terminal node
    raise AssertionError("complete exploration without a terminal assembly")


def is_directed(t: TAS, bounds: Bounds, *, jobs: int = 1) -> Verdict:
    return directedness(enumerate_assemblies(t, bounds, jobs=jobs))


def _explore(t: TAS, shape: Shape, bounds: Bounds, jobs: int) -> AssemblyGraph:
    if shape.is_finite:
        region = shape.points
        forbidden = lambda p: p not in region  # noqa: E731
    else:
        region = shape.window
        window = shape.window
        forbidden = lambda p: p in window and not shape.contains(p)  # noqa: E731
    if bounds.region is not None:
        region = region & bounds.region
    b = Bounds(max_tiles=bounds.max_tiles, region=region, max_states=bounds.max_states)
    return enumerate_assemblies(t, b, jobs=jobs, forbidden=forbidden)


def self_assembles(t: TAS, shape: Shape, bounds: Bounds = Bounds(), *, jobs: int = 1) -> Verdict:
    """Does every terminal assembly place tiles exactly on ``shape``?"""
    g = _explore(t, shape, bounds, jobs)
    if g.escape is not None:
        return Verdict(Status.FAILS, (_escape_witness(g),), "a producible assembly leaves the shape")
    target = shape.within_window()
    for n in g.nodes:
        if n.terminal and n.assembly.domain != target:
            missing = sorted(target - n.assembly.domain)
            w = _node_witness(g, n.id, "terminal assembly does not cover the shape")
            w = Witness(w.assembly, w.trace, w.reason, position=missing[0] if missing else None)
            return Verdict(Status.FAILS, (w,), "a terminal assembly misses part of the shape")
    if not shape.is_finite:
        return Verdict(Status.UNKNOWN, note=f"holds within the window of {len(shape.window)} positions; {_bound_note(g)}")
    if g.truncated:
        return Verdict(Status.UNKNOWN, note=_bound_note(g))
    n = len(g.terminals)
    note = "the unique terminal assembly matches the shape" if n == 1 else f"all {n} terminal assemblies match the shape"
    return Verdict(Status.HOLDS, note=note)


def _coreachable(g: AssemblyGraph, goal: set[int]) -> set[int]:
    preds: list[list[int]] = [[] for _ in g.nodes]
    for src, _, dst in g.edges:
        preds[dst].append(src)
    marked = set(goal)
    todo = list(goal)
    while todo:
        v = todo.pop()
        for u in preds[v]:
            if u not in marked:
                marked.add(u)
                todo.append(u)
    return marked


def finitely_self_assembles(t: TAS, shape: Shape, bounds: Bounds = Bounds(), *, jobs: int = 1) -> Verdict:
    """Can every producible assembly still grow into one placed exactly on ``shape``?"""
    g = _explore(t, shape, bounds, jobs)
    if g.escape is not None:
        return Verdict(Status.FAILS, (_escape_witness(g),), "a producible assembly leaves the shape")
    target = shape.within_window()
    goal = {n.id for n in g.nodes if n.assembly.domain == target}
    good = _coreachable(g, goal)
    # a node whose forward closure touches a truncated node might still get there
    hopeful = _coreachable(g, {n.id for n in g.nodes if n.truncated})
    for n in g.nodes:
        if n.id in good:
            continue
        if n.id in hopeful:
            continue
        w = _node_witness(g, n.id, "no continuation reaches the shape")
        return Verdict(Status.FAILS, (w,), "a producible assembly can no longer grow into the shape")
    if not shape.is_finite:
        return Verdict(Status.UNKNOWN, note=f"holds within the window of {len(shape.window)} positions; {_bound_note(g)}")
    if g.truncated:
        return Verdict(Status.UNKNOWN, note=_bound_note(g))
    return Verdict(Status.HOLDS, note=f"all {len(g)} producible assemblies can grow into the shape")
