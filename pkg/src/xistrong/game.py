"""Adversaries and the Disconnection Game: enrich, corrupt, measure."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ._util import make_rng, round_half_up
from .graph import Graph, components_from_edges, induced_edges, keep_mask
from .protocols import EnrichmentResult, ProtocolConfig, degree_order, enrich, select_participants


class Strategy(str, Enum):
    RANDOM = "random"
    TARGETED = "targeted"


class MetricsOver(str, Enum):
    ALL = "all"
    PARTICIPANTS = "participants"
    NONPARTICIPANTS = "nonparticipants"


@dataclass(frozen=True)
class CorruptionPlan:
    strategy: Strategy
    fraction: float
    corrupted: np.ndarray  # sorted

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CorruptionPlan):
            return NotImplemented
        return (
            self.strategy == other.strategy
            and self.fraction == other.fraction
            and np.array_equal(self.corrupted, other.corrupted)
        )


def _k(g: Graph, fraction: float) -> int:
    if not 0 <= fraction <= 1:
        raise ValueError("corruption fraction must lie in [0, 1]")
    return round_half_up(fraction * g.n)


def plan_random_failures(g: Graph, fraction: float, rng: np.random.Generator) -> CorruptionPlan:
    k = _k(g, fraction)
    if k >= g.n:
        corrupted = np.arange(g.n, dtype=np.int64)
    else:
        corrupted = np.sort(rng.choice(g.n, size=k, replace=False)).astype(np.int64)
    return CorruptionPlan(Strategy.RANDOM, fraction, corrupted)


def plan_targeted(g: Graph, fraction: float) -> CorruptionPlan:
    """The k highest-degree nodes of ``g`` (ties to smaller id)."""
    k = _k(g, fraction)
    return CorruptionPlan(Strategy.TARGETED, fraction, np.sort(degree_order(g)[:k]))


def plan_corruption(g: Graph, strategy: Strategy | str, fraction: float, rng: np.random.Generator) -> CorruptionPlan:
    strategy = Strategy(strategy)
    if strategy is Strategy.RANDOM:
        return plan_random_failures(g, fraction, rng)
    return plan_targeted(g, fraction)


@dataclass(frozen=True)
class GameConfig:
    protocol: ProtocolConfig = ProtocolConfig()
    strategy: Strategy = Strategy.RANDOM
    fraction: float = 0.0
    seed: int = 0
    metrics_over: tuple[MetricsOver, ...] = tuple(MetricsOver)
    # sample participants among honest nodes only (off: sample over all nodes)
    participants_from_honest: bool = False

    def __post_init__(self):
        object.__setattr__(self, "strategy", Strategy(self.strategy))
        object.__setattr__(self, "metrics_over", tuple(MetricsOver(x) for x in self.metrics_over))
        if not 0 <= self.fraction <= 1:
            raise ValueError("corruption fraction must lie in [0, 1]")


@dataclass
class GameOutcome:
    frac_all: float
    frac_participants: float
    frac_nonparticipants: float
    xi: float
    messages: int
    edges_added: int
    edges_surviving: int
    n_honest: int
    n_honest_participants: int
    largest_size: int
    largest_participants: int
    largest_nonparticipants: int
    component_sizes: dict[int, int] = field(default_factory=dict)

    @property
    def n_honest_nonparticipants(self) -> int:
        return self.n_honest - self.n_honest_participants


def _ratio(a: int, b: int) -> float:
    return a / b if b else float("nan")


def xi_strength(g_honest: Graph) -> float:
    """Largest-component share of the honest-induced graph."""
    if g_honest.n == 0:
        raise ValueError("no honest nodes")
    src, dst = g_honest.edges()
    return components_from_edges(g_honest.n, src, dst).largest_size / g_honest.n


def measure(g: Graph, enrichment: EnrichmentResult, corrupted, participants) -> GameOutcome:
    """Outcome of G_A = (V minus C, E plus E_P minus edges touching C).

    Fractions are over honest nodes; those with an empty denominator are NaN.
    """
    n = g.n
    keep = keep_mask(n, corrupted)
    e_src, e_dst = g.edges()
    src = np.concatenate([e_src, enrichment.src])
    dst = np.concatenate([e_dst, enrichment.dst])
    original_ids, _, s, d = induced_edges(n, keep, src, dst)
    lab = components_from_edges(len(original_ids), s, d)

    is_part = np.zeros(n, dtype=bool)
    is_part[np.asarray(participants, dtype=np.int64)] = True
    honest_part = is_part[original_ids]
    in_largest = lab.in_largest() if len(original_ids) else np.zeros(0, dtype=bool)

    n_honest = len(original_ids)
    n_hp = int(np.count_nonzero(honest_part))
    largest = int(np.count_nonzero(in_largest))
    largest_p = int(np.count_nonzero(in_largest & honest_part))
    surviving = int(np.count_nonzero(keep[enrichment.src] & keep[enrichment.dst]))
    frac_all = _ratio(largest, n_honest)
    return GameOutcome(
        frac_all=frac_all,
        frac_participants=_ratio(largest_p, n_hp),
        frac_nonparticipants=_ratio(largest - largest_p, n_honest - n_hp),
        xi=frac_all,
        messages=enrichment.messages_sent,
        edges_added=enrichment.edge_count,
        edges_surviving=surviving,
        n_honest=n_honest,
        n_honest_participants=n_hp,
        largest_size=largest,
        largest_participants=largest_p,
        largest_nonparticipants=largest - largest_p,
        component_sizes=lab.size_histogram(),
    )


def game_streams(seed: int) -> tuple[np.random.Generator, np.random.Generator, np.random.Generator]:
    """Independent (participants, protocol, adversary) streams spawned from one seed."""
    children = np.random.SeedSequence(int(seed)).spawn(3)
    return tuple(make_rng(c) for c in children)  # type: ignore[return-value]


def play_game(g: Graph, cfg: GameConfig, fat_list=None) -> GameOutcome:
    """One Disconnection Game on ``g``.

    The corruption plan is fixed from the initial graph before any enrichment and
    rechecked afterwards; the adversary never sees the added edges.
    """
    rng_part, rng_proto, rng_adv = game_streams(cfg.seed)
    plan = plan_corruption(g, cfg.strategy, cfg.fraction, rng_adv)

    pool = np.arange(g.n, dtype=np.int64)
    if cfg.participants_from_honest:
        pool = pool[keep_mask(g.n, plan.corrupted)]
    participants = select_participants(pool, cfg.protocol.q, rng_part)
    result = enrich(g, cfg.protocol, participants, rng_proto, fat_list=fat_list)

    recheck = plan_corruption(g, cfg.strategy, cfg.fraction, game_streams(cfg.seed)[2])
    assert recheck == plan, "corruption plan changed after enrichment"
    return measure(g, result, plan.corrupted, participants)
