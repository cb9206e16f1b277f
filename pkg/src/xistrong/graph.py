"""Undirected simple graphs in CSR form, plus component analysis."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from . import _backend


class InvalidNodeError(IndexError):
    pass


def _as_ids(values) -> np.ndarray:
    return np.asarray(values, dtype=np.int64).reshape(-1)


class Graph:
    """Undirected simple graph over node ids ``0..n-1``.

    Neighbours of ``v`` are ``indices[indptr[v]:indptr[v+1]]``, kept sorted.
    Bulk construction goes through :meth:`from_edges`; :meth:`add_edge` is O(E)
    and meant for small incremental edits.
    """

    __slots__ = ("indptr", "indices", "_edge_keys")

    def __init__(self, n: int = 0):
        if n < 0:
            raise ValueError("node count must be non-negative")
        self.indptr = np.zeros(n + 1, dtype=np.int64)
        self.indices = np.zeros(0, dtype=np.int64)
        self._edge_keys: np.ndarray | None = None

    @classmethod
    def from_edges(cls, n: int, src, dst) -> "Graph":
        """Build from endpoint arrays; symmetrizes, drops self-loops and duplicates."""
        src, dst = _as_ids(src), _as_ids(dst)
        if src.shape != dst.shape:
            raise ValueError("src and dst differ in length")
        g = cls(n)
        if len(src) == 0:
            return g
        lo, hi = np.minimum(src, dst), np.maximum(src, dst)
        if lo.min() < 0 or hi.max() >= n:
            raise InvalidNodeError(f"edge endpoint outside [0, {n})")
        keep = lo != hi
        keys = np.unique(lo[keep] * n + hi[keep])
        g._set_from_keys(keys)
        return g

    def _set_from_keys(self, keys: np.ndarray) -> None:
        n = self.n
        lo, hi = keys // n, keys % n
        both = np.concatenate([lo * n + hi, hi * n + lo])
        both.sort()
        rows = both // n
        self.indices = both % n
        self.indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(rows, minlength=n), out=self.indptr[1:])
        self._edge_keys = keys

    @property
    def n(self) -> int:
        return len(self.indptr) - 1

    @property
    def edge_count(self) -> int:
        return len(self.indices) // 2

    def _check(self, v: int) -> int:
        v = int(v)
        if not 0 <= v < self.n:
            raise InvalidNodeError(f"node {v} outside [0, {self.n})")
        return v

    def neighbors(self, v: int) -> np.ndarray:
        v = self._check(v)
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def degree(self, v: int) -> int:
        v = self._check(v)
        return int(self.indptr[v + 1] - self.indptr[v])

    def degree_array(self) -> np.ndarray:
        return np.diff(self.indptr)

    def edge_keys(self) -> np.ndarray:
        """Sorted ``u*n + v`` codes of every edge with ``u < v``."""
        if self._edge_keys is None:
            rows = np.repeat(np.arange(self.n, dtype=np.int64), self.degree_array())
            upper = rows < self.indices
            self._edge_keys = rows[upper] * self.n + self.indices[upper]
        return self._edge_keys

    def edges(self) -> tuple[np.ndarray, np.ndarray]:
        keys = self.edge_keys()
        return keys // self.n, keys % self.n

    def has_edge(self, u: int, v: int) -> bool:
        u, v = self._check(u), self._check(v)
        nb = self.neighbors(u)
        i = np.searchsorted(nb, v)
        return bool(i < len(nb) and nb[i] == v)

    def add_edge(self, u: int, v: int) -> bool:
        u, v = self._check(u), self._check(v)
        if u == v or self.has_edge(u, v):
            return False
        # insert the higher position first so the lower one stays valid
        for a, b in sorted(((u, v), (v, u)), key=lambda p: -p[0]):
            pos = self.indptr[a] + np.searchsorted(self.neighbors(a), b)
            self.indices = np.insert(self.indices, pos, b)
            self.indptr[a + 1 :] += 1
        self._edge_keys = None
        return True

    def adjacency(self) -> list[list[int]]:
        return [self.neighbors(v).tolist() for v in range(self.n)]

    def copy(self) -> "Graph":
        g = Graph(0)
        g.indptr = self.indptr.copy()
        g.indices = self.indices.copy()
        return g

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return np.array_equal(self.indptr, other.indptr) and np.array_equal(self.indices, other.indices)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edge_count})"


def add_edge(g: Graph, u: int, v: int) -> bool:
    return g.add_edge(u, v)


def degrees(g: Graph) -> list[tuple[int, int]]:
    return list(enumerate(g.degree_array().tolist()))


class InducedSubgraph(NamedTuple):
    graph: Graph
    original_ids: np.ndarray  # new id -> original id
    new_ids: np.ndarray  # original id -> new id, -1 if removed


def keep_mask(n: int, removed: Iterable[int]) -> np.ndarray:
    ids = _as_ids(list(removed) if not isinstance(removed, np.ndarray) else removed)
    if len(ids) and (ids.min() < 0 or ids.max() >= n):
        raise InvalidNodeError(f"removed node outside [0, {n})")
    keep = np.ones(n, dtype=bool)
    keep[ids] = False
    return keep


def induced_edges(n: int, keep: np.ndarray, src: np.ndarray, dst: np.ndarray):
    """Restrict an edge list to kept nodes and relabel densely (order-preserving)."""
    new_ids = np.full(n, -1, dtype=np.int64)
    original_ids = np.flatnonzero(keep)
    new_ids[original_ids] = np.arange(len(original_ids))
    alive = keep[src] & keep[dst]
    return original_ids, new_ids, new_ids[src[alive]], new_ids[dst[alive]]


def remove_nodes(g: Graph, removed: Iterable[int]) -> InducedSubgraph:
    """Subgraph induced on the surviving nodes, with surviving ids compacted in order."""
    keep = keep_mask(g.n, removed)
    src, dst = g.edges()
    original_ids, new_ids, s, d = induced_edges(g.n, keep, src, dst)
    return InducedSubgraph(Graph.from_edges(len(original_ids), s, d), original_ids, new_ids)


@dataclass(frozen=True)
class ComponentLabeling:
    """``label[v]`` is the smallest node id in v's component."""

    label: np.ndarray
    roots: np.ndarray
    component_sizes: np.ndarray

    @classmethod
    def from_labels(cls, label: np.ndarray) -> "ComponentLabeling":
        counts = np.bincount(label, minlength=len(label))
        roots = np.flatnonzero(counts)
        return cls(label, roots, counts[roots])

    @property
    def n(self) -> int:
        return len(self.label)

    @property
    def count(self) -> int:
        return len(self.roots)

    @property
    def largest_size(self) -> int:
        return int(self.component_sizes.max()) if len(self.roots) else 0

    @property
    def largest_label(self) -> int:
        # argmax takes the first maximum, i.e. the tied component with the smallest id
        return int(self.roots[np.argmax(self.component_sizes)]) if len(self.roots) else -1

    def in_largest(self) -> np.ndarray:
        return self.label == self.largest_label

    def size_histogram(self) -> dict[int, int]:
        sizes, freq = np.unique(self.component_sizes, return_counts=True)
        return dict(zip(sizes.tolist(), freq.tolist()))


def components_from_edges(n: int, src: np.ndarray, dst: np.ndarray) -> ComponentLabeling:
    src = np.ascontiguousarray(src, dtype=np.int64)
    dst = np.ascontiguousarray(dst, dtype=np.int64)
    return ComponentLabeling.from_labels(_backend.component_labels(n, src, dst))


def connected_components(g: Graph) -> ComponentLabeling:
    src, dst = g.edges()
    return components_from_edges(g.n, src, dst)


def bfs_components(g: Graph) -> ComponentLabeling:
    """Breadth-first labelling; kept as an independent check on the union-find path."""
    n = g.n
    label = [-1] * n
    adj = g.adjacency()
    for s in range(n):
        if label[s] != -1:
            continue
        label[s] = s
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if label[w] == -1:
                    label[w] = s
                    queue.append(w)
    return ComponentLabeling.from_labels(np.asarray(label, dtype=np.int64))


def fraction_in_largest(labeling: ComponentLabeling, over: np.ndarray | None = None) -> float:
    if over is None:
        return labeling.largest_size / labeling.n if labeling.n else float("nan")
    over = _as_ids(over)
    if len(over) == 0:
        raise ValueError("'over' must be non-empty")
    return float(np.count_nonzero(labeling.label[over] == labeling.largest_label)) / len(over)


def largest_component_fraction(g: Graph, over: Iterable[int] | None = None) -> float:
    """Share of ``over`` (default: all nodes) lying in the graph's largest component."""
    if over is not None:
        over = _as_ids(sorted(set(over)) if not isinstance(over, np.ndarray) else np.unique(over))
        if len(over) == 0:
            raise ValueError("'over' must be non-empty")
        if over.min() < 0 or over.max() >= g.n:
            raise InvalidNodeError(f"node outside [0, {g.n})")
    elif g.n == 0:
        raise ValueError("empty graph has no largest component")
    return fraction_in_largest(connected_components(g), over)
