import gzip
import io
import math

import numpy as np
import pytest

from xistrong import BaSpec, TheoremInstanceSpec, build_theorem_instance, connected_components, generate_ba
from xistrong.ingest import EmptyGraphError, SnapParseError, dump_snap_edgelist, generate_er, load_snap_edgelist
from xistrong._util import make_rng


# ---- SNAP edge lists


def test_reciprocal_pair_deduplicated():
    loaded = load_snap_edgelist(io.BytesIO(b"# c\n0 1\n1 0\n1 2\n"))
    assert loaded.graph.n == 3 and loaded.graph.edge_count == 2
    assert loaded.edge_lines == 3


def test_self_loop_ignored():
    loaded = load_snap_edgelist(b"0 0\n0 1\n")
    assert loaded.graph.edge_count == 1 and loaded.self_loops == 1


def test_ids_compacted_in_order():
    loaded = load_snap_edgelist(b"10 30\n30 20\n")
    assert loaded.original_ids.tolist() == [10, 20, 30]
    assert loaded.graph.adjacency() == [[2], [2], [0, 1]]


def test_whitespace_crlf_and_gzip():
    text = b"# FromNodeId\tToNodeId\r\n0\t1\r\n1   2\r\n\r\n"
    plain = load_snap_edgelist(text)
    zipped = load_snap_edgelist(gzip.compress(text))
    assert plain.graph == zipped.graph and plain.graph.edge_count == 2


def test_malformed_line_reports_number():
    with pytest.raises(SnapParseError) as err:
        load_snap_edgelist(b"# header\n0 1\n1 x\n")
    assert err.value.lineno == 3
    with pytest.raises(SnapParseError):
        load_snap_edgelist(b"0 1 2\n")
    with pytest.raises(SnapParseError):
        load_snap_edgelist(b"-1 2\n")


def test_empty_input():
    with pytest.raises(EmptyGraphError):
        load_snap_edgelist(b"# only comments\n")
    with pytest.raises(EmptyGraphError):
        load_snap_edgelist(b"")


def test_file_path(tmp_path):
    path = tmp_path / "g.txt"
    path.write_bytes(b"1 2\n2 3\n")
    assert load_snap_edgelist(path).graph.edge_count == 2
    assert load_snap_edgelist(str(path)).graph.n == 3


def test_dump_load_roundtrip():
    g = generate_ba(BaSpec(300, 2, 3), make_rng(1))
    g.add_edge(0, 299)
    text = b"5 7\n7 9\n9 5\n11 11\n"
    for graph in (g, load_snap_edgelist(text).graph):
        again = load_snap_edgelist(dump_snap_edgelist(graph))
        assert again.graph == graph
        assert again.original_ids.tolist() == list(range(graph.n))
        assert load_snap_edgelist(dump_snap_edgelist(again.graph)).graph == again.graph


# ---- preferential attachment


def test_ba_three_nodes():
    g = generate_ba(BaSpec(3, 1, 2), make_rng(0))
    assert g.edge_count == 2
    assert connected_components(g).largest_size == 3
    assert sorted(d for d in g.degree_array().tolist()) == [1, 1, 2]


def test_ba_edge_count_exact():
    spec = BaSpec(10_000, 3, 4)
    g = generate_ba(spec, make_rng(2))
    assert g.edge_count == 4 * 3 // 2 + (10_000 - 4) * 3 == spec.edge_count


def test_ba_seeded_determinism():
    a = generate_ba(BaSpec(2000, 3, 3), make_rng(77))
    b = generate_ba(BaSpec(2000, 3, 3), make_rng(77))
    c = generate_ba(BaSpec(2000, 3, 3), make_rng(78))
    assert a == b and a != c


def test_ba_frozen_output():
    # regression pin (PCG64 + endpoint-list sampling), identical on both backends
    g = generate_ba(BaSpec(8, 2, 2), make_rng(2024))
    assert g.edges()[0].tolist() == [0, 0, 1, 1, 1, 1, 1, 1, 2, 2, 2, 3, 4]
    assert g.edges()[1].tolist() == [1, 2, 2, 3, 4, 5, 6, 7, 3, 4, 5, 6, 7]


@pytest.mark.parametrize("spec", [BaSpec(5, 3, 2), BaSpec(5, 0, 1), BaSpec(3, 2, 4)])
def test_ba_infeasible(spec):
    with pytest.raises(ValueError):
        generate_ba(spec, make_rng(0))


def test_ba_tail_heavier_than_er():
    spec = BaSpec(2000, 3, 3)
    ba_max, er_max = [], []
    for seed in range(20):
        ba = generate_ba(spec, make_rng(seed))
        er = generate_er(spec.n, ba.edge_count, make_rng(1000 + seed))
        assert er.edge_count == ba.edge_count
        ba_max.append(ba.degree_array().max())
        er_max.append(er.degree_array().max())
    assert np.median(ba_max) > np.median(er_max)


# ---- theorem instances

SPEC = TheoremInstanceSpec(n=2000, C=1.0, a=0.2, b=0.8, alpha=0.3)


def test_theorem_partition_and_sizes():
    inst = build_theorem_instance(SPEC, make_rng(3))
    n = SPEC.n
    all_ids = np.concatenate([inst.fat, inst.nw, inst.valpha])
    assert sorted(all_ids.tolist()) == list(range(n))
    assert len(inst.fat) == math.ceil(SPEC.C * math.log(n))
    assert len(inst.valpha) == round(0.3 * n)
    assert len(inst.nw) == (1 - 0.3) * n - len(inst.fat)


def test_theorem_structure():
    inst = build_theorem_instance(SPEC, make_rng(4))
    g = inst.graph
    deg = g.degree_array()
    lo, hi = SPEC.degree_band
    assert lo == math.ceil(0.2 * 2000 / math.log(2000)) and hi == math.floor(0.8 * 2000 / math.log(2000))
    assert np.all((deg[inst.fat] >= lo) & (deg[inst.fat] <= hi))
    assert np.all(deg[inst.valpha] == 0)
    fat = set(inst.fat.tolist())
    for v in inst.nw.tolist():
        nb = set(g.neighbors(v).tolist())
        assert nb and nb <= fat
    assert np.array_equal(inst.participants, np.arange(SPEC.n))


def test_theorem_partial_participants():
    spec = TheoremInstanceSpec(n=2000, C=1.0, a=0.2, b=0.8, alpha=0.4, beta=0.5, gamma=0.25)
    inst = build_theorem_instance(spec, make_rng(5))
    p = set(inst.participants.tolist())
    assert len(p & set(inst.valpha.tolist())) == round(0.5 * len(inst.valpha))
    assert len(p & set(inst.nw.tolist())) == round(0.25 * len(inst.nw))
    assert not p & set(inst.fat.tolist())


@pytest.mark.parametrize(
    "kw",
    [
        dict(n=10_000, C=1, a=0.2, b=0.4, alpha=0.5),  # fat stubs cannot cover N_W
        dict(n=1000, C=1, a=0.5, b=0.2, alpha=0.3),
        dict(n=1000, C=1, a=0.2, b=0.8, alpha=1.0),
        dict(n=1000, C=1, a=0.2, b=0.8, alpha=0.3, beta=1.5),
    ],
)
def test_theorem_infeasible(kw):
    with pytest.raises(ValueError):
        build_theorem_instance(TheoremInstanceSpec(**kw), make_rng(0))
