import numpy as np
import pytest

from conftest import graph_of
from xistrong import (
    BaSpec,
    GameConfig,
    ProtocolConfig,
    generate_ba,
    largest_component_fraction,
    plan_random_failures,
    plan_targeted,
    play_game,
    remove_nodes,
    select_fat_nodes,
    xi_strength,
)
from xistrong.game import game_streams, plan_corruption
from xistrong.graph import Graph
from xistrong._util import make_rng


@pytest.fixture(scope="module")
def ba():
    return generate_ba(BaSpec(3000, 2, 2), make_rng(5))


# ---- plans


def test_random_plan_sizes(ba):
    assert len(plan_random_failures(ba, 0.0, make_rng(0)).corrupted) == 0
    assert plan_random_failures(ba, 1.0, make_rng(0)).corrupted.tolist() == list(range(ba.n))


def test_random_plan_rounding_on_epinions_size():
    g = Graph(75_879)
    plan = plan_random_failures(g, 0.2, make_rng(0))
    assert len(plan.corrupted) == 15_176 == len(set(plan.corrupted.tolist()))


def test_targeted_star(star):
    assert plan_targeted(star, 0.2).corrupted.tolist() == [0]


def test_targeted_tie_break(cycle4):
    assert plan_targeted(cycle4, 0.5).corrupted.tolist() == [0, 1]


def test_targeted_equals_fat_set(ba):
    k = 16
    assert set(plan_targeted(ba, k / ba.n).corrupted.tolist()) == set(select_fat_nodes(ba, k).tolist())


def test_targeted_independent_of_seed(ba):
    plans = {tuple(plan_corruption(ba, "targeted", 0.1, make_rng(s)).corrupted.tolist()) for s in range(5)}
    assert len(plans) == 1


def test_plan_bad_fraction(ba):
    with pytest.raises(ValueError):
        plan_targeted(ba, 1.2)


# ---- play_game


def test_identity_game(ba):
    out = play_game(ba, GameConfig(ProtocolConfig("none"), "random", 0.0, seed=1))
    assert out.frac_all == largest_component_fraction(ba)
    assert out.messages == out.edges_added == 0


@pytest.mark.parametrize("strategy", ["random", "targeted"])
@pytest.mark.parametrize("fraction", [0.05, 0.3, 0.7])
def test_no_protocol_decomposes(ba, strategy, fraction):
    cfg = GameConfig(ProtocolConfig("none"), strategy, fraction, seed=7)
    out = play_game(ba, cfg)
    plan = plan_corruption(ba, strategy, fraction, game_streams(7)[2])
    sub = remove_nodes(ba, plan.corrupted)
    assert out.frac_all == largest_component_fraction(sub.graph)
    assert out.n_honest == sub.graph.n


@pytest.mark.parametrize("kind", ["2sff", "a3f"])
@pytest.mark.parametrize("q", [0.1, 0.5, 1.0])
def test_mixture_identity(ba, kind, q):
    out = play_game(ba, GameConfig(ProtocolConfig(kind, 3, q), "targeted", 0.15, seed=2))
    assert out.largest_size == out.largest_participants + out.largest_nonparticipants
    if out.n_honest_participants and out.n_honest_nonparticipants:
        lhs = out.frac_all * out.n_honest
        rhs = out.frac_participants * out.n_honest_participants + out.frac_nonparticipants * out.n_honest_nonparticipants
        assert lhs == pytest.approx(rhs, abs=1e-9)
    for f in (out.frac_all, out.frac_participants, out.frac_nonparticipants):
        assert np.isnan(f) or 0 <= f <= 1


def test_edges_surviving(ba):
    out = play_game(ba, GameConfig(ProtocolConfig("a3f", 5), "targeted", 0.1, seed=3))
    assert 0 < out.edges_surviving < out.edges_added
    none_lost = play_game(ba, GameConfig(ProtocolConfig("a3f", 5), "targeted", 0.0, seed=3))
    assert none_lost.edges_surviving == none_lost.edges_added


@pytest.mark.parametrize("kind", ["2sff", "a3f"])
def test_m0_matches_none(ba, kind):
    for strategy in ("random", "targeted"):
        a = play_game(ba, GameConfig(ProtocolConfig(kind, 0, 0.5), strategy, 0.3, seed=11))
        b = play_game(ba, GameConfig(ProtocolConfig("none", 0, 0.5), strategy, 0.3, seed=11))
        assert a == b


def test_plan_shared_across_protocols(ba):
    # the same seed gives the same corruption whatever the protocol adds
    outs = [
        play_game(ba, GameConfig(ProtocolConfig(k, m), "random", 0.4, seed=5))
        for k, m in (("none", 0), ("2sff", 10), ("a3f", 10))
    ]
    assert len({o.n_honest for o in outs}) == 1


def test_participants_from_honest(ba):
    cfg = GameConfig(ProtocolConfig("a3f", 5, 0.2), "targeted", 0.2, seed=1, participants_from_honest=True)
    out = play_game(ba, cfg)
    assert out.n_honest_participants == round(0.2 * out.n_honest)


def test_no_participants_gives_nan(ba):
    out = play_game(ba, GameConfig(ProtocolConfig("a3f", 5, 0.0), "random", 0.1, seed=1))
    assert np.isnan(out.frac_participants)
    assert out.frac_nonparticipants == out.frac_all


def test_all_corrupted(ba):
    out = play_game(ba, GameConfig(ProtocolConfig("none"), "random", 1.0, seed=1))
    assert out.n_honest == 0 and np.isnan(out.frac_all)


def test_game_deterministic(ba):
    cfg = GameConfig(ProtocolConfig("2sff", 4, 0.5), "random", 0.3, seed=99)
    assert play_game(ba, cfg) == play_game(ba, cfg)


# ---- xi


def test_xi_connected(triangle):
    assert xi_strength(triangle) == 1.0


def test_xi_tie_components():
    assert xi_strength(graph_of(5, [(0, 1), (2, 3)])) == pytest.approx(0.4)


def test_xi_empty():
    with pytest.raises(ValueError):
        xi_strength(Graph(0))
