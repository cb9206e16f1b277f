"""Graph sources: SNAP edge lists, preferential attachment, and fat-set theorem instances."""

from __future__ import annotations

import gzip
import io
import math
import os
from dataclasses import dataclass
from pathlib import Path
from typing import BinaryIO, NamedTuple

import numpy as np

from . import _backend
from ._util import round_half_up
from .graph import Graph


class SnapParseError(ValueError):
    def __init__(self, lineno: int, line: str):
        super().__init__(f"line {lineno}: expected two integer ids, got {line!r}")
        self.lineno = lineno


class EmptyGraphError(ValueError):
    pass


class LoadedGraph(NamedTuple):
    graph: Graph
    original_ids: np.ndarray  # dense id -> id in the file
    edge_lines: int  # data lines read, self-loops included
    self_loops: int


def _read_bytes(source: str | os.PathLike | BinaryIO | bytes) -> bytes:
    if isinstance(source, bytes):
        data = source
    elif isinstance(source, (str, os.PathLike)):
        data = Path(source).read_bytes()
    else:
        data = source.read()
    if data[:2] == b"\x1f\x8b":
        data = gzip.decompress(data)
    return data


def load_snap_edgelist(source: str | os.PathLike | BinaryIO | bytes) -> LoadedGraph:
    """Parse a SNAP ``from to`` edge list into a simple undirected graph.

    ``#`` lines are comments. Ids are compacted to ``0..n-1`` in ascending order of
    the original ids. Reciprocal and repeated pairs collapse to one edge; self-loops
    are dropped but still register their node. Gzip input is detected by magic bytes.
    """
    text = _read_bytes(source).decode("ascii")
    src: list[int] = []
    dst: list[int] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        if len(parts) != 2 or not (parts[0].isdigit() and parts[1].isdigit()):
            raise SnapParseError(lineno, line)
        src.append(int(parts[0]))
        dst.append(int(parts[1]))
    if not src:
        raise EmptyGraphError("edge list contains no data lines")

    raw = np.array([src, dst], dtype=np.int64)
    original_ids, dense = np.unique(raw, return_inverse=True)
    dense = dense.reshape(2, -1)
    self_loops = int(np.count_nonzero(raw[0] == raw[1]))
    graph = Graph.from_edges(len(original_ids), dense[0], dense[1])
    return LoadedGraph(graph, original_ids, len(src), self_loops)


def dump_snap_edgelist(g: Graph, stream: BinaryIO | None = None) -> bytes:
    """Serialize as SNAP text; isolated nodes are written as ``v v`` so reloading keeps them."""
    buf = io.StringIO()
    buf.write(f"# Nodes: {g.n} Edges: {g.edge_count}\n# FromNodeId\tToNodeId\n")
    src, dst = g.edges()
    # a leading self-loop line per isolated node registers it without adding an edge
    for v in np.flatnonzero(g.degree_array() == 0).tolist():
        buf.write(f"{v}\t{v}\n")
    for u, v in zip(src.tolist(), dst.tolist()):
        buf.write(f"{u}\t{v}\n")
    data = buf.getvalue().encode("ascii")
    if stream is not None:
        stream.write(data)
    return data


def save_npz(path: str | os.PathLike, loaded: LoadedGraph) -> None:
    np.savez_compressed(
        path,
        indptr=loaded.graph.indptr,
        indices=loaded.graph.indices,
        original_ids=loaded.original_ids,
        meta=np.array([loaded.edge_lines, loaded.self_loops], dtype=np.int64),
    )


def load_npz(path: str | os.PathLike) -> LoadedGraph:
    with np.load(path) as z:
        g = Graph(0)
        g.indptr = z["indptr"]
        g.indices = z["indices"]
        edge_lines, self_loops = z["meta"].tolist()
        return LoadedGraph(g, z["original_ids"], edge_lines, self_loops)


@dataclass(frozen=True)
class BaSpec:
    n: int
    m_attach: int
    seed_size: int

    def validate(self) -> None:
        if not (self.seed_size >= self.m_attach >= 1 and self.n >= self.seed_size):
            raise ValueError(f"need seed_size >= m_attach >= 1 and n >= seed_size, got {self}")

    @property
    def edge_count(self) -> int:
        return self.seed_size * (self.seed_size - 1) // 2 + (self.n - self.seed_size) * self.m_attach


def generate_ba(spec: BaSpec, rng: np.random.Generator) -> Graph:
    """Preferential attachment grown from a clique of ``seed_size`` nodes.

    Each arriving node picks ``m_attach`` distinct targets by sampling uniformly from
    the list of all edge endpoints so far (degree-proportional), redrawing on repeats.
    Exactly one ``rng.random()`` double is consumed per draw, in order.
    """
    spec.validate()
    src, dst = _backend.ba_edges(spec.n, spec.m_attach, spec.seed_size, rng)
    return Graph.from_edges(spec.n, src, dst)


def generate_er(n: int, edge_count: int, rng: np.random.Generator) -> Graph:
    """Uniform random simple graph G(n, M); a density-matched baseline for BA graphs."""
    if edge_count > n * (n - 1) // 2:
        raise ValueError("too many edges for a simple graph")
    keys = np.zeros(0, dtype=np.int64)
    while len(keys) < edge_count:
        a = rng.integers(0, n, size=2 * edge_count)
        b = rng.integers(0, n, size=2 * edge_count)
        ok = a != b
        fresh = np.minimum(a, b)[ok] * n + np.maximum(a, b)[ok]
        merged = np.concatenate([keys, fresh])
        _, first = np.unique(merged, return_index=True)
        keys = merged[np.sort(first)]
    keys = keys[:edge_count]
    return Graph.from_edges(n, keys // n, keys % n)


@dataclass(frozen=True)
class TheoremInstanceSpec:
    """Fat set W of ceil(C ln n) nodes, its neighbourhood N_W, and the rest V_alpha."""

    n: int
    C: float
    a: float
    b: float
    alpha: float
    beta: float = 1.0
    gamma: float = 1.0

    @property
    def log_n(self) -> float:
        return math.log(self.n)

    @property
    def fat_size(self) -> int:
        return math.ceil(self.C * self.log_n)

    @property
    def degree_band(self) -> tuple[int, int]:
        return math.ceil(self.a * self.n / self.log_n), math.floor(self.b * self.n / self.log_n)

    @property
    def valpha_size(self) -> int:
        return round_half_up(self.alpha * self.n)

    @property
    def nw_size(self) -> int:
        return self.n - self.fat_size - self.valpha_size

    @property
    def rounds(self) -> int:
        """Queries per participant in the log n-A3F run."""
        return math.ceil(self.log_n)

    @property
    def strength_bound(self) -> float:
        return 1.0 - (1.0 - self.beta) * self.alpha

    def validate(self) -> None:
        if self.n < 3:
            raise ValueError("n must be at least 3")
        if not (0 < self.a <= self.b):
            raise ValueError("need 0 < a <= b")
        if not (0 < self.alpha < 1):
            raise ValueError("need 0 < alpha < 1")
        if not (0 <= self.beta <= 1 and 0 <= self.gamma <= 1):
            raise ValueError("beta and gamma must lie in [0, 1]")
        lo, hi = self.degree_band
        if self.fat_size < 1 or self.nw_size < 1:
            raise ValueError(f"empty fat set or neighbourhood: |W|={self.fat_size}, |N_W|={self.nw_size}")
        if lo > hi:
            raise ValueError(f"empty degree band [{lo}, {hi}]")
        if hi > self.nw_size:
            raise ValueError(f"degree band top {hi} exceeds |N_W|={self.nw_size}")
        if self.fat_size * hi < self.nw_size:
            raise ValueError(f"fat stubs cannot cover N_W: {self.fat_size}*{hi} < {self.nw_size}")

    @property
    def thm1_regime(self) -> bool:
        return self.C * self.a < 1 - self.alpha

    @property
    def thm2_regime(self) -> bool:
        return self.thm1_regime and self.C * self.b > self.gamma * (1 - self.alpha)


class TheoremInstance(NamedTuple):
    graph: Graph
    fat: np.ndarray  # W, in construction order
    nw: np.ndarray  # N_W, sorted
    valpha: np.ndarray  # V_alpha, sorted
    participants: np.ndarray  # sorted


def build_theorem_instance(spec: TheoremInstanceSpec, rng: np.random.Generator) -> TheoremInstance:
    """Random graph with the fat-set structure: W -- N_W edges only, V_alpha isolated.

    Fat target degrees are uniform on the band; if they undershoot |N_W| they are
    raised round-robin (never past the band top). Fat stubs, laid end to end, first
    cover a random ordering of N_W once; leftover stubs go to uniformly random
    N_W nodes not already adjacent to that fat node.
    """
    spec.validate()
    n, k, n_nw = spec.n, spec.fat_size, spec.nw_size
    lo, hi = spec.degree_band

    perm = rng.permutation(n)
    fat = perm[:k]
    nw = perm[k : k + n_nw]
    valpha = perm[k + n_nw :]

    targets = rng.integers(lo, hi, endpoint=True, size=k)
    deficit = n_nw - int(targets.sum())
    i = 0
    while deficit > 0:
        if targets[i % k] < hi:
            targets[i % k] += 1
            deficit -= 1
        i += 1

    order = rng.permutation(nw)
    src_parts, dst_parts = [], []
    start = 0
    for w, t in zip(fat.tolist(), targets.tolist()):
        covered = order[start : min(start + t, n_nw)]
        start += len(covered)
        extra = t - len(covered)
        chosen = covered
        if extra > 0:
            free = np.setdiff1d(nw, covered, assume_unique=True)
            chosen = np.concatenate([covered, rng.choice(free, size=extra, replace=False)])
        src_parts.append(np.full(len(chosen), w, dtype=np.int64))
        dst_parts.append(chosen)
    graph = Graph.from_edges(n, np.concatenate(src_parts), np.concatenate(dst_parts))

    if spec.beta == 1 and spec.gamma == 1:
        participants = np.arange(n, dtype=np.int64)
    else:
        p_nw = rng.choice(nw, size=round_half_up(spec.gamma * len(nw)), replace=False)
        p_va = rng.choice(valpha, size=round_half_up(spec.beta * len(valpha)), replace=False)
        participants = np.sort(np.concatenate([p_nw, p_va]))
    return TheoremInstance(graph, fat, np.sort(nw), np.sort(valpha), participants)
