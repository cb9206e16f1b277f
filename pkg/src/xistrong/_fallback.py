"""Pure-Python versions of the compiled kernels in ``_kernels.pyx``.

Both implementations consume random numbers in the same order, so a given seed
yields identical output whichever backend is active.
"""

from __future__ import annotations

import numpy as np


def component_labels(n: int, src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    if len(src) != len(dst):
        raise ValueError("src and dst differ in length")
    parent = list(range(n))

    def find(x: int) -> int:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for a, b in zip(src.tolist(), dst.tolist()):
        ra, rb = find(a), find(b)
        if ra < rb:
            parent[rb] = ra
        elif rb < ra:
            parent[ra] = rb
    return np.fromiter((find(i) for i in range(n)), dtype=np.int64, count=n)


def ba_edges(n: int, m_attach: int, seed_size: int, rng: np.random.Generator):
    src: list[int] = []
    dst: list[int] = []
    ends: list[int] = []
    for i in range(seed_size):
        for j in range(i + 1, seed_size):
            src.append(i)
            dst.append(j)
            ends += (i, j)

    draw = rng.random
    for t in range(seed_size, n):
        chosen: list[int] = []
        pool = len(ends) if ends else t
        while len(chosen) < m_attach:
            idx = min(int(draw() * pool), pool - 1)
            x = ends[idx] if ends else idx
            if x not in chosen:
                chosen.append(x)
        for x in chosen:
            src.append(t)
            dst.append(x)
            ends += (t, x)
    return np.asarray(src, dtype=np.int64), np.asarray(dst, dtype=np.int64)
