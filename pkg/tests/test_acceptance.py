"""Exit criteria of the build; ``pytest tests/test_acceptance.py`` prints one line each."""
import json
import random
import time

import pytest

from atam import corpus
from atam.cli import main
from atam.documents import parse_snapshot, serialize_shape
from atam.dynamics import Bounds, enumerate_assemblies, is_producible, random_sequence, replay
from atam.model import Assembly, Position, is_subassembly, is_tau_stable
from atam.verification import Shape, Status, finitely_self_assembles, self_assembles
from oracles import brute_stable, random_assembly, random_polyomino, random_tas, random_tileset

P = Position
SYSTEMS = list(corpus.systems())


def cli(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.acceptance("1. stability matches brute-force min-cut on 500 random assemblies (<10 s)")
def test_stability_oracle(criterion):
    rng = random.Random(1)
    start = time.perf_counter()
    mismatches = 0
    for i in range(500):
        ts = random_tileset(rng, rng.randint(1, 4), max_strength=3)
        alpha = random_assembly(rng, ts, rng.randint(1, 8), connected=i % 5 != 0)
        tau = rng.randint(1, 4)
        mismatches += is_tau_stable(alpha, ts, tau) != brute_stable(dict(alpha), ts.by_name, tau)
    elapsed = time.perf_counter() - start
    assert mismatches == 0
    assert elapsed < 10, f"{elapsed:.1f}s"


@pytest.mark.acceptance("2. enumeration: SYS-COOP 5 states / 1 terminal, SYS-NONDIR 2 terminals (<1 s)")
def test_enumeration_exactness(criterion, coop, nondir):
    start = time.perf_counter()
    g = enumerate_assemblies(coop, Bounds(max_tiles=16))
    assert (len(g), len(g.terminals), g.truncated) == (5, 1, False)
    g = enumerate_assemblies(nondir, Bounds(max_tiles=16))
    assert (len(g.terminals), g.truncated) == (2, False)
    assert time.perf_counter() - start < 1


def _mutate(rng, t, alpha):
    table = dict(alpha.items())
    if rng.random() < 0.5:
        p = rng.choice(sorted(table))
        table[p] = rng.choice([n for n in t.tileset.names if n != table[p]] or t.tileset.names)
    else:
        x, y = rng.choice(sorted(table))
        dx, dy = rng.choice(((0, 1), (1, 0), (0, -1), (-1, 0), (2, 0), (0, 3)))
        table[P(x + dx, y + dy)] = rng.choice(t.tileset.names)
    return Assembly(table)


@pytest.mark.acceptance("3. producibility agrees with enumeration on corpus graphs and 100 mutations each")
def test_producibility_oracle(criterion, systems):
    rng = random.Random(3)
    checked = 0
    for name, t in systems.items():
        g = enumerate_assemblies(t, Bounds(max_tiles=80, max_states=20000))
        if g.truncated:
            continue  # sys-line and sys-fsa-sep grow forever
        checked += 1
        members = {n.assembly for n in g.nodes}
        assert all(is_producible(t, n.assembly) for n in g.nodes), name
        mismatches = 0
        for _ in range(100):
            mutant = _mutate(rng, t, rng.choice(g.nodes).assembly)
            mismatches += is_producible(t, mutant) != (mutant in members)
        assert mismatches == 0, name
    assert checked == len(systems) - 2


@pytest.mark.acceptance("4. 1000 random replays: result domain is the union of stages, every stage is a subassembly")
def test_sequence_semantics(criterion, systems):
    rng = random.Random(4)
    violations = 0
    for i in range(1000):
        t = systems[SYSTEMS[i % len(SYSTEMS)]]
        seq = random_sequence(t, rng.getrandbits(64), rng.randint(0, 70))
        result = replay(t, seq)
        stages = [t.seed]
        for a in seq.steps:
            stages.append(stages[-1].with_tile(a.position, a.tile))
        union = set().union(*(set(s) for s in stages))
        violations += union != set(result)
        violations += sum(not is_subassembly(s, result) for s in stages)
    assert violations == 0


@pytest.mark.acceptance("5. strict and finite self-assembly agree on 200+ random systems with finite shapes")
def test_finite_shape_equivalence(criterion):
    rng = random.Random(5)
    compared = holds = fails = 0
    disagreements = []
    for _ in range(220):
        t = random_tas(rng)
        g = enumerate_assemblies(t, Bounds(max_tiles=5, max_states=300))
        shapes = {n.assembly.domain for n in g.nodes if len(n.assembly) <= 5}
        shapes = rng.sample(sorted(shapes, key=sorted), min(3, len(shapes)))
        shapes.append(frozenset(random_polyomino(rng, rng.randint(1, 5))))
        for pts in shapes:
            x = Shape.finite(pts)
            a = self_assembles(t, x).status
            b = finitely_self_assembles(t, x).status
            assert Status.UNKNOWN not in (a, b)
            compared += 1
            holds += a is Status.HOLDS
            fails += a is Status.FAILS
            if (a is Status.HOLDS) != (b is Status.HOLDS):
                disagreements.append((t, pts))
    assert not disagreements
    assert holds > 0 and fails > 0 and compared >= 200


@pytest.mark.acceptance("6. verify-shape SYS-SQUARE N=4..8 Holds; one-cell perturbations Fail with replayable witness")
def test_square_shapes(criterion, systems, capsys, tmp_path):
    for n in corpus.SQUARE_SIZES:
        t = systems[f"sys-square-{n}.json"]
        tiles, shape = corpus.path(f"sys-square-{n}.json"), corpus.path(f"square-{n}.shape")
        for mode in ("strict", "finite"):
            start = time.perf_counter()
            code, out, _ = cli(capsys, "verify-shape", tiles, shape, "--mode", mode, "--witness-dir", tmp_path)
            assert (code, out.splitlines()[0]) == (0, "Holds"), (n, mode)
            assert time.perf_counter() - start < 30
        square = corpus.square_points(n)
        perturbed = {
            "drop-corner": square - {P(n - 1, n - 1)},
            "drop-edge": square - {P(n - 1, n // 2)},
            "add-cell": square | {P(n, 0)},
        }
        for label, pts in perturbed.items():
            f = tmp_path / f"{n}-{label}.shape"
            f.write_text(serialize_shape(pts, grid=True))
            for mode in ("strict", "finite"):
                wdir = tmp_path / f"w-{n}-{label}-{mode}"
                code, out, _ = cli(capsys, "verify-shape", tiles, f, "--mode", mode, "--witness-dir", wdir)
                assert (code, out.splitlines()[0]) == (1, "Fails"), (n, label, mode)
                text = (wdir / "witness-1.json").read_text()
                doc = json.loads(text)
                final = replay(t, parse_snapshot(text), check=True)
                assert sorted([p.x, p.y, name] for p, name in final.items()) == \
                    sorted([d["x"], d["y"], d["tile"]] for d in doc["assembly"])
                # re-check the violation itself
                if "position" in doc:
                    q = P(doc["position"]["x"], doc["position"]["y"])
                    if q in pts:
                        assert set(final) < pts and q not in final
                    else:
                        assert "attachment" in doc and q not in final
                else:
                    assert set(final) <= pts


@pytest.mark.acceptance("7. enumerate and check-directed output is byte-identical for 1, 2 and 8 workers")
def test_determinism(criterion, capsys, tmp_path):
    for name in SYSTEMS:
        outputs = set()
        verdicts = set()
        for jobs in (1, 2, 8):
            g = tmp_path / f"{name}-{jobs}.graph"
            code, _, _ = cli(capsys, "enumerate", corpus.path(name), "--max-tiles", 12, "--max-states", 20000,
                             "--jobs", jobs, "--out", g)
            assert code == 0
            outputs.add(g.read_bytes())
            code, out, _ = cli(capsys, "check-directed", corpus.path(name), "--max-tiles", 12, "--max-states", 20000,
                               "--jobs", jobs, "--json", "--witness-dir", tmp_path / f"w-{jobs}")
            verdicts.add(out.encode())
        assert len(outputs) == 1, name
        assert len(verdicts) == 1, name


@pytest.mark.acceptance("8. CLI exit codes 0/1/2/64 end to end; simulate traces replay to identical renders")
def test_cli_contract(criterion, capsys, tmp_path):
    c = corpus.path
    w = ("--witness-dir", tmp_path)
    assert cli(capsys, "check-directed", c("sys-coop.json"), "--max-tiles", 8, *w)[0] == 0
    assert cli(capsys, "check-directed", c("sys-nondir.json"), "--max-tiles", 8, *w)[0] == 1
    assert cli(capsys, "check-directed", c("sys-line.json"), "--max-tiles", 10, *w)[0] == 2
    assert cli(capsys, "verify-shape", c("sys-l.json"), c("l-tromino.shape"), "--mode", "strict", *w)[0] == 0
    assert cli(capsys, "verify-shape", c("sys-nondir.json"), c("l-tromino.shape"), "--mode", "strict", *w)[0] == 1
    assert cli(capsys, "verify-shape", c("sys-fsa-sep.json"), c("fsa-sep-window.shape"), "--mode", "strict",
               "--window", "6x2", *w)[0] == 2
    assert cli(capsys, "check-directed", c("sys-coop.json"))[0] == 64
    assert cli(capsys, "no-such-command")[0] == 64
    assert cli(capsys, "validate", c("sys-coop.json"))[0] == 0
    for name in SYSTEMS:
        for seed in (0, 7, 2**40 + 3):
            for fmt in ("ascii", "svg"):
                trace = tmp_path / "trace.json"
                code, first, _ = cli(capsys, "simulate", c(name), "--rng-seed", seed, "--max-steps", 40,
                                     "--render", fmt, "--trace", trace, "--color", "never")
                assert code == 0
                code, again, _ = cli(capsys, "render", c(name), "--assembly", trace, "--format", fmt,
                                     "--color", "never")
                assert code == 0 and again == first, (name, seed, fmt)
