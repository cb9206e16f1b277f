"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--n 75879] [--m 7] [--repeat 3]

Also times one full 15-A3F game on a preferential-attachment graph of
Epinions size, which must stay under 10 s single-threaded.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from xistrong import _fallback
from xistrong._backend import BACKEND
from xistrong._util import make_rng
from xistrong.game import GameConfig, play_game
from xistrong.ingest import BaSpec, generate_ba
from xistrong.protocols import ProtocolConfig

try:
    from xistrong import _kernels
except ImportError:  # extension not built
    _kernels = None


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--n", type=int, default=75_879)
    ap.add_argument("--m", type=int, default=7)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    impls = {"python": _fallback}
    if _kernels is not None:
        impls["cython"] = _kernels
    print(f"active backend: {BACKEND}; n={args.n}, m={args.m}, best of {args.repeat}")

    g = generate_ba(BaSpec(args.n, args.m, args.m + 1), make_rng(0))
    src, dst = g.edges()
    src = np.ascontiguousarray(src, dtype=np.int64)
    dst = np.ascontiguousarray(dst, dtype=np.int64)
    print(f"graph: {g.n} nodes, {g.edge_count} edges")

    print(f"{'kernel':<18}{'backend':<10}{'seconds':>10}")
    results = {}
    for name, mod in impls.items():
        t = best_of(lambda: mod.component_labels(g.n, src, dst), args.repeat)
        results[("component_labels", name)] = t
        print(f"{'component_labels':<18}{name:<10}{t:>10.4f}")
    for name, mod in impls.items():
        t = best_of(lambda: mod.ba_edges(args.n, args.m, args.m + 1, make_rng(1)), args.repeat)
        results[("ba_edges", name)] = t
        print(f"{'ba_edges':<18}{name:<10}{t:>10.4f}")
    if "cython" in impls:
        for kernel in ("component_labels", "ba_edges"):
            print(f"speed-up {kernel}: {results[(kernel, 'python')] / results[(kernel, 'cython')]:.1f}x")

    cfg = GameConfig(ProtocolConfig("a3f", 15), "targeted", 0.3, seed=1)
    t = best_of(lambda: play_game(g, cfg), args.repeat)
    print(f"full 15-A3F game, targeted 30%: {t:.3f} s ({'ok' if t < 10 else 'over'} vs 10 s budget)")


if __name__ == "__main__":
    main()
