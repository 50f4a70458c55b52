import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from atam import corpus
from atam.documents import (
    DocumentError,
    format_grid,
    parse_grid,
    parse_shape_points,
    parse_snapshot,
    parse_tileset,
    serialize_assembly,
    serialize_shape,
    serialize_tileset,
    serialize_trace,
)
from atam.dynamics import random_sequence
from atam.model import TAS, Assembly, Position
from oracles import random_tileset

P = Position


def doc(**over):
    base = {
        "schema_version": 1,
        "temperature": 1,
        "tiles": [{"name": "S", "east": ["a", 1]}, {"name": "R", "west": ["a", 1]}],
        "seed": [{"x": 0, "y": 0, "tile": "S"}],
    }
    base.update(over)
    return json.dumps(base)


def codes(text):
    with pytest.raises(DocumentError) as e:
        parse_tileset(text)
    return [d.code for d in e.value.diagnostics]


def test_parse_coop_file():
    t = parse_tileset(corpus.path("sys-coop.json").read_bytes())
    assert t.temperature == 2 and len(t.tileset) == 4


def test_omitted_sides_are_null():
    t = parse_tileset(doc())
    s = t.tileset["S"]
    assert s.north.label == "" and s.north.strength == 0 and s.east.label == "a"


def test_duplicate_tile_name():
    assert codes(doc(tiles=[{"name": "S"}, {"name": "S"}])) == ["DuplicateTileName"]


def test_zero_temperature():
    assert codes(doc(temperature=0)) == ["InvalidTemperature"]


def test_syntax_error_has_line():
    with pytest.raises(DocumentError) as e:
        parse_tileset('{\n  "schema_version": 1,\n  oops\n}')
    d = e.value.diagnostics[0]
    assert d.code == "SyntaxError" and "line 3" in d.context


def test_schema_error_has_field_path():
    with pytest.raises(DocumentError) as e:
        parse_tileset(doc(tiles=[{"name": "S", "east": ["a", "strong"]}]))
    d = e.value.diagnostics[0]
    assert d.code == "SchemaViolation" and d.context == "tiles[0].east[1]"


def test_unknown_key_rejected():
    assert "SchemaViolation" in codes(doc(extra=1))


def test_duplicate_seed_position():
    assert codes(doc(seed=[{"x": 0, "y": 0, "tile": "S"}, {"x": 0, "y": 0, "tile": "R"}])) == ["DuplicatePosition"]


def test_unstable_seed_reported():
    text = doc(temperature=2, tiles=[{"name": "S", "east": ["a", 1]}, {"name": "R", "west": ["a", 1]}],
               seed=[{"x": 0, "y": 0, "tile": "S"}, {"x": 1, "y": 0, "tile": "R"}])
    assert codes(text) == ["SeedNotStable"]


@pytest.mark.parametrize("name", list(corpus.systems()))
def test_corpus_round_trip(name):
    t = corpus.load(name)
    assert parse_tileset(serialize_tileset(t)) == t


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 6), st.integers(1, 3))
def test_random_tileset_round_trip(seed, n, tau):
    rng = random.Random(seed)
    ts = random_tileset(rng, n)
    t = TAS(ts, Assembly({P(0, 0): ts.names[0]}), tau)
    once = parse_tileset(serialize_tileset(t))
    assert once == t
    assert serialize_tileset(once) == serialize_tileset(t)


def test_corpus_files_match_builders(tmp_path):
    corpus.regenerate(tmp_path)
    for f in sorted(tmp_path.iterdir()):
        assert f.read_bytes() == corpus.path(f.name).read_bytes(), f.name


@pytest.mark.parametrize("n", corpus.SQUARE_SIZES)
def test_square_shape_files(n):
    assert parse_shape_points(corpus.path(f"square-{n}.shape").read_bytes()) == corpus.square_points(n)


def test_l_tromino_ascii_file():
    pts = parse_shape_points(corpus.path("l-tromino.shape").read_text())
    assert pts == {P(0, 0), P(1, 0), P(0, 1)}


@pytest.mark.parametrize("pts", [
    {P(0, 0), P(1, 0), P(0, 1)},
    {P(0, 0), P(1, 0), P(2, 0), P(2, 1), P(2, 2)},
    {P(-3, 4), P(-2, 4), P(-2, 5)},
])
def test_grid_and_points_encodings_agree(pts):
    as_points = parse_shape_points(serialize_shape(pts))
    as_grid = parse_shape_points(serialize_shape(pts, grid=True))
    assert as_points == as_grid == pts


def test_grid_anchor_and_orientation():
    # '@' sits at the origin; the first row is the top
    assert parse_grid(["#.", "@#"]) == {P(0, 0), P(1, 0), P(0, 1)}
    assert parse_grid(["@#"], P(5, -2)) == {P(5, -2), P(6, -2)}
    assert format_grid({P(0, 0), P(1, 0), P(0, 1)}) == ["#.", "@#"]


def test_grid_requires_single_anchor():
    with pytest.raises(DocumentError):
        parse_grid(["##"])
    with pytest.raises(DocumentError):
        parse_grid(["@@"])


def test_snapshot_and_trace_round_trip(systems):
    t = systems["sys-square-5.json"]
    seq = random_sequence(t, 3, 12)
    assert parse_snapshot(serialize_trace(seq)) == seq
    alpha = Assembly({P(0, 0): "O", P(1, 0): "B1"})
    assert parse_snapshot(serialize_assembly(alpha)) == alpha
