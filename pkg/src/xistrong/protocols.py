"""Local enrichment protocols: m-2SFF (two-step walks) and m-A3F (ask a fat node).

All walks and queries read the graph as it was before enrichment; the new edges of
one run are never walked in that same run.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ._util import round_half_up, uniform_index
from .graph import Graph


class ProtocolKind(str, Enum):
    NONE = "none"
    TWO_SFF = "2sff"
    A3F = "a3f"


def default_fat_count(n: int) -> int:
    """floor(log2 n), at least 1. Gives 16 for n = 75,879."""
    return max(1, int(n).bit_length() - 1)


@dataclass(frozen=True)
class ProtocolConfig:
    kind: ProtocolKind = ProtocolKind.NONE
    m: int = 0
    q: float = 1.0
    fat_count: int | None = None
    walk_length: int = 2

    def __post_init__(self):
        object.__setattr__(self, "kind", ProtocolKind(self.kind))
        if self.m < 0:
            raise ValueError("m must be non-negative")
        if not 0 <= self.q <= 1:
            raise ValueError("q must lie in [0, 1]")
        if self.fat_count is not None and self.fat_count < 1:
            raise ValueError("fat_count must be at least 1")
        if self.walk_length != 2:
            raise NotImplementedError("only length-2 walks are implemented")

    @property
    def label(self) -> str:
        if self.kind is ProtocolKind.NONE or self.m == 0:
            return "none"
        return f"{self.m}-{self.kind.value.upper()}"


@dataclass
class EnrichmentResult:
    src: np.ndarray  # added edges, src < dst, sorted by (src, dst)
    dst: np.ndarray
    messages_sent: int
    participants: np.ndarray
    idle_participants: int = 0  # isolated 2SFF participants that could not walk
    wasted_queries: int = 0  # A3F queries to a fat node with no neighbours
    notes: list[str] = field(default_factory=list)

    @property
    def edge_count(self) -> int:
        return len(self.src)

    @property
    def added_edges(self) -> set[tuple[int, int]]:
        return set(zip(self.src.tolist(), self.dst.tolist()))


def _empty(participants: np.ndarray) -> EnrichmentResult:
    z = np.zeros(0, dtype=np.int64)
    return EnrichmentResult(z, z.copy(), 0, participants)


def _new_edges(g: Graph, v: np.ndarray, u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Candidate pairs minus self-pairs, existing edges and repeats."""
    ok = v != u
    lo, hi = np.minimum(v[ok], u[ok]), np.maximum(v[ok], u[ok])
    keys = np.unique(lo * g.n + hi)
    existing = g.edge_keys()
    if len(existing):
        pos = np.minimum(np.searchsorted(existing, keys), len(existing) - 1)
        keys = keys[existing[pos] != keys]
    return keys // g.n, keys % g.n


def _participant_array(participants) -> np.ndarray:
    return np.unique(np.asarray(list(participants) if not isinstance(participants, np.ndarray) else participants, dtype=np.int64))


def select_participants(nodes, q: float, rng: np.random.Generator) -> np.ndarray:
    """Uniform subset of ``round_half_up(q * len(nodes))`` nodes, sorted."""
    if not 0 <= q <= 1:
        raise ValueError("q must lie in [0, 1]")
    nodes = np.asarray(nodes, dtype=np.int64)
    k = round_half_up(q * len(nodes))
    if k >= len(nodes):
        return np.sort(nodes)
    return np.sort(rng.choice(nodes, size=k, replace=False))


def run_2sff(g: Graph, participants, m: int, rng: np.random.Generator) -> EnrichmentResult:
    """Each participant v walks v -> w -> u ``m`` times and befriends u.

    Draws: one block of uniforms for the first hops of every walk (participants
    ascending, then round), then one block for the second hops.
    """
    p = _participant_array(participants)
    if m == 0:
        return _empty(p)
    deg = g.degree_array()
    active = p[deg[p] > 0]
    res = _empty(p)
    res.idle_participants = len(p) - len(active)
    if res.idle_participants:
        res.notes.append(f"{res.idle_participants} isolated participants skipped")
    if len(active) == 0:
        return res
    v = np.repeat(active, m)
    first, second = rng.random(len(v)), rng.random(len(v))
    w = g.indices[g.indptr[v] + uniform_index(first, deg[v])]
    u = g.indices[g.indptr[w] + uniform_index(second, deg[w])]
    res.src, res.dst = _new_edges(g, v, u)
    res.messages_sent = 2 * m * len(active)
    return res


def select_fat_nodes(g: Graph, fat_count: int) -> np.ndarray:
    """The ``fat_count`` highest-degree nodes, ties to the smaller id."""
    if not 0 <= fat_count <= g.n:
        raise ValueError(f"fat_count must lie in [0, {g.n}]")
    return degree_order(g)[:fat_count]


def degree_order(g: Graph) -> np.ndarray:
    """All nodes sorted by (degree descending, id ascending)."""
    ids = np.arange(g.n, dtype=np.int64)
    return ids[np.lexsort((ids, -g.degree_array()))]


def run_a3f(g: Graph, participants, fat_list, m: int, rng: np.random.Generator) -> EnrichmentResult:
    """Each participant asks ``m`` uniformly chosen fat nodes for a random neighbour.

    Every query costs two messages, including those that reach a fat node without
    neighbours (counted as wasted, no edge).
    """
    p = _participant_array(participants)
    fat = np.asarray(fat_list, dtype=np.int64)
    if len(fat) == 0:
        raise ValueError("fat list must be non-empty")
    if m == 0 or len(p) == 0:
        return _empty(p)
    deg = g.degree_array()
    v = np.repeat(p, m)
    first, second = rng.random(len(v)), rng.random(len(v))
    w = fat[uniform_index(first, np.int64(len(fat)))]
    dw = deg[w]
    ok = dw > 0
    u = g.indices[g.indptr[w[ok]] + uniform_index(second[ok], dw[ok])]
    res = _empty(p)
    res.src, res.dst = _new_edges(g, v[ok], u)
    res.messages_sent = 2 * m * len(p)
    res.wasted_queries = int(np.count_nonzero(~ok))
    return res


def enrich(g: Graph, cfg: ProtocolConfig, participants, rng: np.random.Generator, fat_list=None) -> EnrichmentResult:
    if cfg.kind is ProtocolKind.NONE:
        return _empty(_participant_array(participants))
    if cfg.kind is ProtocolKind.TWO_SFF:
        return run_2sff(g, participants, cfg.m, rng)
    if fat_list is None:
        fat_list = select_fat_nodes(g, cfg.fat_count or default_fat_count(g.n))
    return run_a3f(g, participants, fat_list, cfg.m, rng)
