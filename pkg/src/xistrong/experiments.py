"""Sweep harness: graph sources, figure presets, CSV/SVG output, theorem checks."""

from __future__ import annotations

import csv
import io
import itertools
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from ._util import derive_seed, make_rng
from .game import GameConfig, GameOutcome, MetricsOver, Strategy, measure, play_game
from .graph import Graph
from .ingest import (
    BaSpec,
    TheoremInstanceSpec,
    build_theorem_instance,
    generate_ba,
    load_npz,
    load_snap_edgelist,
)
from .protocols import ProtocolConfig, ProtocolKind, default_fat_count, run_a3f

SCHEMA = "xistrong.sweep/1"
DATA_DIR_ENV = "XISTRONG_DATA_DIR"
EPINIONS_FILES = ("soc-Epinions1.npz", "soc-Epinions1.txt.gz", "soc-Epinions1.txt")


class SourceError(ValueError):
    pass


def data_dir() -> Path:
    return Path(os.environ.get(DATA_DIR_ENV, Path.home() / ".cache" / "xistrong"))


def find_epinions() -> Path | None:
    for name in EPINIONS_FILES:
        path = data_dir() / name
        if path.exists():
            return path
    return None


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def parse_theorem(text: str) -> TheoremInstanceSpec:
    """``C,a,b,alpha,beta,gamma,n``"""
    vals = _floats(text)
    if len(vals) != 7:
        raise SourceError("theorem spec needs C,a,b,alpha,beta,gamma,n")
    C, a, b, alpha, beta, gamma, n = vals
    return TheoremInstanceSpec(int(n), C, a, b, alpha, beta, gamma)


def parse_ba(text: str) -> BaSpec:
    """``n,m,seed_size``"""
    vals = [int(x) for x in text.split(",")]
    if len(vals) != 3:
        raise SourceError("BA spec needs n,m,seed_size")
    return BaSpec(*vals)


def load_graph(source: str, seed: int = 0) -> Graph:
    """Resolve ``epinions``, ``ba:n,m,seed_size``, ``theorem:...`` or a file path."""
    try:
        if source.startswith("ba:"):
            return generate_ba(parse_ba(source[3:]), make_rng(derive_seed(seed, "graph", source)))
        if source.startswith("theorem:"):
            spec = parse_theorem(source[8:])
            return build_theorem_instance(spec, make_rng(derive_seed(seed, "graph", source))).graph
    except ValueError as exc:
        raise SourceError(str(exc)) from exc
    if source == "epinions":
        path = find_epinions()
        if path is None:
            raise SourceError(f"Epinions not found under {data_dir()} (set {DATA_DIR_ENV})")
    else:
        path = Path(source)
    if not path.exists():
        raise SourceError(f"no such graph file: {path}")
    if path.suffix == ".npz":
        return load_npz(path).graph
    return load_snap_edgelist(path).graph


def frange(start: float, stop: float, step: float) -> list[float]:
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + i * step, 10) for i in range(count)]


def parse_fractions(text: str) -> list[float]:
    """``0:0.9:0.1`` (inclusive range) or ``0,0.1,0.25``."""
    if ":" in text:
        start, stop, step = (float(x) for x in text.split(":"))
        return frange(start, stop, step)
    return _floats(text)


@dataclass(frozen=True)
class SweepSpec:
    graph_source: str
    protocols: tuple[ProtocolKind, ...] = (ProtocolKind.NONE,)
    m_values: tuple[int, ...] = (0,)
    q_values: tuple[float, ...] = (1.0,)
    strategy: Strategy = Strategy.RANDOM
    fractions: tuple[float, ...] = (0.0,)
    replicates: int = 10
    base_seed: int = 0
    metrics_over: tuple[MetricsOver, ...] = (MetricsOver.ALL,)
    fat_count: int | None = None
    participants_from_honest: bool = False
    walk_length: int = 2

    def __post_init__(self):
        object.__setattr__(self, "protocols", tuple(ProtocolKind(p) for p in self.protocols))
        object.__setattr__(self, "strategy", Strategy(self.strategy))
        object.__setattr__(self, "metrics_over", tuple(MetricsOver(x) for x in self.metrics_over))
        if self.replicates < 1:
            raise ValueError("replicates must be at least 1")
        if any(not 0 <= f <= 1 for f in self.fractions):
            raise ValueError("fractions must lie in [0, 1]")

    def points(self) -> list[tuple[ProtocolConfig, float]]:
        """Config points in emission order: protocol, m, q, then fraction."""
        out = []
        seen = set()
        for kind, m, q in itertools.product(self.protocols, self.m_values, self.q_values):
            if kind is ProtocolKind.NONE:
                m = 0
            proto = ProtocolConfig(kind, m, q, self.fat_count, self.walk_length)
            if (kind, m, q) in seen:
                continue
            seen.add((kind, m, q))
            out.extend((proto, f) for f in self.fractions)
        return out

    def seed_for(self, fraction: float, replicate: int) -> int:
        """Depends only on base seed, adversary, fraction and replicate, so every protocol
        at a given point faces the same corruption draw and participant draw."""
        return derive_seed(self.base_seed, self.strategy.value, f"{fraction:.6f}", replicate)


FIELDS = (
    "schema", "graph", "protocol", "m", "q", "fat_count", "adversary", "fraction",
    "replicate", "seed", "n_honest", "n_honest_participants",
    "frac_all", "frac_participants", "frac_nonparticipants", "xi",
    "messages", "edges_added", "edges_surviving",
)  # fmt: skip
FRACTION_FIELDS = {"q", "fraction", "frac_all", "frac_participants", "frac_nonparticipants", "xi"}


@dataclass
class SweepRow:
    graph: str
    protocol: str
    m: int
    q: float
    fat_count: int | str
    adversary: str
    fraction: float
    replicate: int
    seed: int
    outcome: GameOutcome
    wall_ms: float = 0.0
    schema: str = SCHEMA

    def record(self) -> dict[str, object]:
        o = self.outcome
        return {
            "schema": self.schema, "graph": self.graph, "protocol": self.protocol, "m": self.m,
            "q": self.q, "fat_count": self.fat_count, "adversary": self.adversary,
            "fraction": self.fraction, "replicate": self.replicate, "seed": self.seed,
            "n_honest": o.n_honest, "n_honest_participants": o.n_honest_participants,
            "frac_all": o.frac_all, "frac_participants": o.frac_participants,
            "frac_nonparticipants": o.frac_nonparticipants, "xi": o.xi,
            "messages": o.messages, "edges_added": o.edges_added, "edges_surviving": o.edges_surviving,
        }  # fmt: skip


def run_sweep(spec: SweepSpec, graph: Graph | None = None, workers: int = 1) -> list[SweepRow]:
    """Every (config point, replicate) game, in deterministic order regardless of ``workers``."""
    if graph is None:
        graph = load_graph(spec.graph_source, spec.base_seed)
    graph.edge_keys()  # warm the shared cache before threads read it
    fat_count = spec.fat_count or default_fat_count(graph.n)
    tasks = [
        (proto, frac, r) for proto, frac in spec.points() for r in range(spec.replicates)
    ]

    def run(task):
        proto, frac, r = task
        seed = spec.seed_for(frac, r)
        cfg = GameConfig(proto, spec.strategy, frac, seed, participants_from_honest=spec.participants_from_honest)
        t0 = time.perf_counter()
        outcome = play_game(graph, cfg)
        wall = (time.perf_counter() - t0) * 1000
        uses_fat = proto.kind is ProtocolKind.A3F
        return SweepRow(
            spec.graph_source, proto.kind.value, proto.m, proto.q,
            fat_count if uses_fat else "", spec.strategy.value, frac, r, seed, outcome, wall,
        )  # fmt: skip

    if workers <= 1:
        return [run(t) for t in tasks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run, tasks))


def _fmt(key: str, value: object) -> str:
    if key in FRACTION_FIELDS or isinstance(value, float):
        return "nan" if isinstance(value, float) and math.isnan(value) else f"{float(value):.6f}"
    return str(value)


def emit_csv(rows: Iterable[SweepRow], stream=None, timing: bool = False) -> bytes:
    """Header plus one line per row; fixed column order, 6-decimal fractions, LF endings."""
    fields = FIELDS + (("wall_ms",) if timing else ())
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fields)
    for row in rows:
        rec = row.record()
        if timing:
            rec["wall_ms"] = round(row.wall_ms, 3)
        writer.writerow([_fmt(k, rec[k]) for k in fields])
    data = buf.getvalue().encode("ascii")
    if stream is not None:
        stream.write(data)
    return data


def read_csv(source) -> list[dict[str, str]]:
    text = Path(source).read_text() if isinstance(source, (str, os.PathLike)) else source.read()
    if isinstance(text, bytes):
        text = text.decode("ascii")
    return list(csv.DictReader(io.StringIO(text)))


SUMMARY_METRICS = ("frac_all", "frac_participants", "frac_nonparticipants", "xi")
POINT_KEYS = ("graph", "protocol", "m", "q", "fat_count", "adversary", "fraction")


def summarize(records: Sequence[dict[str, object]]) -> list[dict[str, object]]:
    """Mean and sample stddev per config point (NaN replicates ignored)."""
    groups: dict[tuple, list] = {}
    for rec in records:
        key = tuple(str(_fmt(k, rec[k])) for k in POINT_KEYS)
        groups.setdefault(key, []).append(rec)
    out = []
    for key, recs in groups.items():
        summary: dict[str, object] = dict(zip(POINT_KEYS, key))
        summary["replicates"] = len(recs)
        for metric in SUMMARY_METRICS:
            vals = np.array([float(r[metric]) for r in recs])
            vals = vals[~np.isnan(vals)]
            summary[f"{metric}_mean"] = float(vals.mean()) if len(vals) else float("nan")
            summary[f"{metric}_std"] = float(vals.std(ddof=1)) if len(vals) > 1 else (0.0 if len(vals) else float("nan"))
        out.append(summary)
    return out


def emit_summary_csv(summary: Sequence[dict[str, object]], stream=None) -> bytes:
    fields = POINT_KEYS + ("replicates",) + tuple(
        f"{m}_{s}" for m in SUMMARY_METRICS for s in ("mean", "std")
    )
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fields)
    for rec in summary:
        writer.writerow([_fmt(k, rec[k]) if k.endswith(("_mean", "_std")) else rec[k] for k in fields])
    data = buf.getvalue().encode("ascii")
    if stream is not None:
        stream.write(data)
    return data


# ---------------------------------------------------------------- presets

RANDOM_FRACTIONS = tuple(frange(0.0, 0.9, 0.1))
TARGETED_FRACTIONS = tuple(frange(0.0, 0.3, 0.05))
M_SWEEP = (0, 1, 5, 10, 15)
PARTIAL_Q = (0.1, 0.25, 0.5)
ALL_METRICS = tuple(MetricsOver)


def _preset(kind, strategy, partial):
    return dict(
        protocols=(kind,),
        m_values=(15,) if partial else M_SWEEP,
        q_values=PARTIAL_Q if partial else (1.0,),
        strategy=strategy,
        fractions=RANDOM_FRACTIONS if strategy is Strategy.RANDOM else TARGETED_FRACTIONS,
        metrics_over=ALL_METRICS if partial else (MetricsOver.ALL,),
    )


PRESETS: dict[str, dict] = {
    "figure-1": _preset(ProtocolKind.TWO_SFF, Strategy.RANDOM, False),
    "figure-2": _preset(ProtocolKind.TWO_SFF, Strategy.RANDOM, True),
    "figure-3": _preset(ProtocolKind.A3F, Strategy.RANDOM, False),
    "figure-4": _preset(ProtocolKind.A3F, Strategy.RANDOM, True),
    "figure-5": _preset(ProtocolKind.TWO_SFF, Strategy.TARGETED, False),
    "figure-6": _preset(ProtocolKind.TWO_SFF, Strategy.TARGETED, True),
    "figure-7": _preset(ProtocolKind.A3F, Strategy.TARGETED, False),
    "figure-8": _preset(ProtocolKind.A3F, Strategy.TARGETED, True),
}


def preset_spec(name: str, graph_source: str = "epinions", **overrides) -> SweepSpec:
    if name not in PRESETS:
        raise KeyError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    return replace(SweepSpec(graph_source, **PRESETS[name]), **overrides)


# ---------------------------------------------------------------- plotting


@dataclass(frozen=True)
class AxesSpec:
    metrics_over: tuple[MetricsOver, ...] = (MetricsOver.ALL,)
    xlim: tuple[float, float] | None = None
    title: str = ""


METRIC_COLUMN = {
    MetricsOver.ALL: "frac_all",
    MetricsOver.PARTICIPANTS: "frac_participants",
    MetricsOver.NONPARTICIPANTS: "frac_nonparticipants",
}


def curve_label(protocol: str, m: int) -> str:
    if protocol == ProtocolKind.NONE.value or m == 0:
        return "no enrichment"
    return f"{m}-{protocol.upper()}"


def plot_series(records: Sequence[dict[str, object]], metrics_over: Sequence[MetricsOver]):
    """{q: {label: (x percent, mean y)}} with one curve per protocol, m and metric."""
    panels: dict[str, dict[str, tuple[list[float], list[float]]]] = {}
    for s in summarize(records):
        for metric in metrics_over:
            label = curve_label(str(s["protocol"]), int(s["m"]))
            if len(metrics_over) > 1:
                label += f" ({metric.value})"
            xs, ys = panels.setdefault(str(s["q"]), {}).setdefault(label, ([], []))
            xs.append(float(s["fraction"]) * 100)
            ys.append(float(s[f"{METRIC_COLUMN[metric]}_mean"]))
    return panels


def emit_plot(records: Sequence[dict[str, object]], axes: AxesSpec = AxesSpec(), stream=None) -> bytes:
    """Static SVG: fraction of honest nodes in the largest component vs % corrupted."""
    if not records:
        raise ValueError("nothing to plot")
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    matplotlib.rcParams["svg.hashsalt"] = "xistrong"
    panels = plot_series(records, axes.metrics_over)
    xlim = axes.xlim
    if xlim is None:
        xlim = (0, 30) if records[0]["adversary"] == Strategy.TARGETED.value else (0, 90)
    fig, axs = plt.subplots(len(panels), 1, figsize=(6, 3.2 * len(panels)), squeeze=False)
    for ax, (q, curves) in zip(axs[:, 0], sorted(panels.items(), key=lambda kv: float(kv[0]))):
        for label, (xs, ys) in curves.items():
            order = np.argsort(xs)
            ax.plot(np.asarray(xs)[order], np.asarray(ys)[order], marker="o", ms=3, label=label)
        ax.set_xlim(*xlim)
        ax.set_ylim(0, 1.02)
        ax.set_xlabel("corrupted nodes (%)")
        ax.set_ylabel("fraction in largest component")
        if len(panels) > 1 or float(q) != 1.0:
            ax.set_title(f"participation q = {float(q):g}")
        ax.legend(fontsize=7)
        ax.grid(alpha=0.3)
    if axes.title:
        fig.suptitle(axes.title)
    fig.tight_layout()
    buf = io.BytesIO()
    fig.savefig(buf, format="svg", metadata={"Date": None})
    plt.close(fig)
    data = buf.getvalue()
    if stream is not None:
        stream.write(data)
    return data


# ---------------------------------------------------------------- theorem checks


@dataclass
class TheoremReport:
    spec: TheoremInstanceSpec
    trials: int
    connected: int
    xis: list[float] = field(default_factory=list)
    slack: float = 0.02

    @property
    def connectivity_rate(self) -> float:
        return self.connected / self.trials

    @property
    def bound(self) -> float:
        return self.spec.strength_bound

    @property
    def bound_hits(self) -> int:
        return sum(x >= self.bound - self.slack for x in self.xis)

    @property
    def bound_rate(self) -> float:
        return self.bound_hits / self.trials

    def text(self) -> str:
        s = self.spec
        lines = [
            f"instance: n={s.n} C={s.C} a={s.a} b={s.b} alpha={s.alpha} beta={s.beta} gamma={s.gamma}",
            f"|W|={s.fat_size} |N_W|={s.nw_size} |V_alpha|={s.valpha_size} band={s.degree_band} rounds={s.rounds}",
            f"C*a={s.C * s.a:.4f} vs 1-alpha={1 - s.alpha:.4f} (thm1 regime: {s.thm1_regime})",
            f"C*b={s.C * s.b:.4f} vs gamma(1-alpha)={s.gamma * (1 - s.alpha):.4f} (thm2 regime: {s.thm2_regime})",
            f"trials={self.trials} connected={self.connected} rate={self.connectivity_rate:.3f}",
            f"xi: mean={np.mean(self.xis):.6f} min={np.min(self.xis):.6f} bound={self.bound:.6f} "
            f"hits(bound-{self.slack})={self.bound_hits} rate={self.bound_rate:.3f}",
        ]
        return "\n".join(lines)


def theorem_trial(spec: TheoremInstanceSpec, seed: int) -> GameOutcome:
    """Build an instance, run ceil(ln n)-A3F with fat list W, corrupt exactly W."""
    rng = make_rng(seed)
    inst = build_theorem_instance(spec, rng)
    result = run_a3f(inst.graph, inst.participants, inst.fat, spec.rounds, rng)
    return measure(inst.graph, result, inst.fat, inst.participants)


def run_theorem_check(spec: TheoremInstanceSpec, trials: int, base_seed: int = 0, workers: int = 1) -> TheoremReport:
    spec.validate()
    if trials < 1:
        raise ValueError("trials must be at least 1")
    seeds = [derive_seed(base_seed, "theorem", t) for t in range(trials)]
    if workers <= 1:
        outcomes = [theorem_trial(spec, s) for s in seeds]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(lambda s: theorem_trial(spec, s), seeds))
    connected = sum(o.largest_size == o.n_honest for o in outcomes)
    return TheoremReport(spec, trials, connected, [o.xi for o in outcomes])
