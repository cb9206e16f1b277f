"""Command-line driver: ``xistrong {ingest,sweep,theorem-check,privacy,plot}``."""

from __future__ import annotations

import argparse
import configparser
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from ._backend import BACKEND
from .experiments import (
    PRESETS,
    AxesSpec,
    SourceError,
    SweepSpec,
    data_dir,
    emit_csv,
    emit_plot,
    emit_summary_csv,
    parse_fractions,
    parse_theorem,
    preset_spec,
    read_csv,
    run_sweep,
    run_theorem_check,
    summarize,
)
from .game import GameConfig, MetricsOver, play_game
from .ingest import load_snap_edgelist, save_npz
from .privacy import PrivacyParams, dp_guarantee, noiseless_aggregation_plausible, paalec_params
from .protocols import ProtocolConfig


class CLIError(Exception):
    pass


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(",") if x.strip())


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(x) for x in text.split(",") if x.strip())


def _strs(text: str) -> tuple[str, ...]:
    return tuple(x.strip() for x in text.split(",") if x.strip())


def _add_graph_args(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--graph", help="SNAP edge list, .npz cache, or 'epinions' (looked up in the data dir)")
    g.add_argument("--ba", metavar="N,M,SEED_SIZE", help="preferential-attachment graph")
    g.add_argument("--theorem", metavar="C,a,b,alpha,beta,gamma,n", help="fat-set theorem instance")


def _graph_source(args) -> str | None:
    if args.ba:
        return f"ba:{args.ba}"
    if args.theorem:
        return f"theorem:{args.theorem}"
    return args.graph


def _add_game_args(p: argparse.ArgumentParser, sweep: bool) -> None:
    p.add_argument("--protocol", default=None, help="none, 2sff, a3f" + (" (comma list)" if sweep else ""))
    p.add_argument("--m", default=None, help="walks/queries per participant" + (" (comma list)" if sweep else ""))
    p.add_argument("--q", default=None, help="participation fraction" + (" (comma list)" if sweep else ""))
    p.add_argument("--adversary", choices=["random", "targeted"], default=None)
    p.add_argument("--fat-count", type=int, default=None, help="fat list size (default floor(log2 n))")
    p.add_argument("--seed", type=int, default=None, help="64-bit base seed")
    p.add_argument("--walk-length", type=int, default=2, help="reserved; only 2 is implemented")
    p.add_argument("--participants-from-honest", action="store_true", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="xistrong", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({BACKEND} kernels)")
    parser.add_argument("--config", help="INI file; keys in [xistrong] mirror long flags, flags win")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse a SNAP edge list and cache it as .npz")
    p.add_argument("path")
    p.add_argument("--out", help="cache path (default: <data dir>/<name>.npz)")
    p.add_argument("--no-cache", action="store_true")

    p = sub.add_parser("sweep", help="run a Monte-Carlo sweep and write CSV")
    _add_graph_args(p)
    _add_game_args(p, sweep=True)
    p.add_argument("--preset", choices=sorted(PRESETS), help="axes of a published figure (figure-1 .. figure-8)")
    p.add_argument("--fractions", help="corruption fractions: 'start:stop:step' or comma list")
    p.add_argument("--reps", type=int, default=None, help="replicates per point (default 10)")
    p.add_argument("--metrics-over", default=None, help="all,participants,nonparticipants (for plots)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--timing", action="store_true", help="add a wall_ms column (breaks byte-reproducibility)")
    p.add_argument("--out", help="CSV path (default stdout)")
    p.add_argument("--summary", help="per-point mean/stddev CSV (default <out>.summary.csv)")
    p.add_argument("--plot", help="also write an SVG plot here")

    p = sub.add_parser("theorem-check", help="empirical connectivity on fat-set instances")
    p.add_argument("--theorem", required=True, metavar="C,a,b,alpha,beta,gamma,n")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--slack", type=float, default=0.02)

    p = sub.add_parser("privacy", help="DP statements from a measured xi")
    p.add_argument("--run", help="sweep CSV to take xi from")
    p.add_argument("--where", action="append", default=[], metavar="COL=VALUE", help="filter rows of --run")
    _add_graph_args(p)
    _add_game_args(p, sweep=False)
    p.add_argument("--fraction", type=float, default=None, help="corruption fraction for a fresh game")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--sensitivity", type=float, default=1.0)
    p.add_argument("--s", type=float, required=True, help="group-size parameter of the aggregation protocol")
    p.add_argument("--group-threshold", type=int, default=None, help="for the noiseless-aggregation heuristic")
    p.add_argument("--format", choices=["text", "csv"], default="text")

    p = sub.add_parser("plot", help="SVG from a sweep CSV")
    p.add_argument("--run", required=True, help="sweep CSV")
    p.add_argument("--out", required=True, help="SVG path")
    p.add_argument("--metrics-over", default="all")
    p.add_argument("--xlim", help="xmin,xmax in percent")
    p.add_argument("--title", default="")
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    args = parser.parse_args(argv)
    if not args.config:
        return args
    cfg = configparser.ConfigParser()
    if not cfg.read(args.config):
        raise CLIError(f"cannot read config {args.config}")
    section = cfg["xistrong"] if cfg.has_section("xistrong") else {}
    values = {k.replace("-", "_"): v for k, v in section.items()}
    sub = parser._subparsers._group_actions[0].choices[args.command]  # type: ignore[union-attr]
    known = {a.dest: a for a in sub._actions}
    defaults = {}
    for key, raw in values.items():
        if key not in known:
            raise CLIError(f"unknown config key {key!r}")
        action = known[key]
        if isinstance(action, argparse._StoreTrueAction):
            defaults[key] = raw.strip().lower() in ("1", "true", "yes", "on")
        elif action.type is not None:
            defaults[key] = action.type(raw)
        else:
            defaults[key] = raw
    sub.set_defaults(**defaults)
    return parser.parse_args(argv)


def cmd_ingest(args) -> int:
    loaded = load_snap_edgelist(args.path)
    g = loaded.graph
    deg = g.degree_array()
    print(f"nodes\t{g.n}")
    print(f"edge_lines\t{loaded.edge_lines}")
    print(f"self_loops\t{loaded.self_loops}")
    print(f"undirected_edges\t{g.edge_count}")
    print(f"max_degree\t{int(deg.max()) if g.n else 0}")
    if not args.no_cache:
        out = Path(args.out) if args.out else data_dir() / (Path(args.path).name.split(".")[0] + ".npz")
        out.parent.mkdir(parents=True, exist_ok=True)
        save_npz(out, loaded)
        print(f"cache\t{out}")
    return 0


def _sweep_spec(args) -> SweepSpec:
    source = _graph_source(args)
    overrides = {}
    if args.protocol:
        overrides["protocols"] = _strs(args.protocol)
    if args.m:
        overrides["m_values"] = _ints(args.m)
    if args.q:
        overrides["q_values"] = _floats(args.q)
    if args.adversary:
        overrides["strategy"] = args.adversary
    if args.fractions:
        overrides["fractions"] = tuple(parse_fractions(args.fractions))
    if args.reps is not None:
        overrides["replicates"] = args.reps
    if args.seed is not None:
        overrides["base_seed"] = args.seed
    if args.metrics_over:
        overrides["metrics_over"] = _strs(args.metrics_over)
    if args.fat_count is not None:
        overrides["fat_count"] = args.fat_count
    if args.participants_from_honest:
        overrides["participants_from_honest"] = True
    overrides["walk_length"] = args.walk_length
    if args.preset:
        return preset_spec(args.preset, source or "epinions", **overrides)
    if source is None:
        raise CLIError("give --graph, --ba, --theorem or --preset")
    return SweepSpec(source, **overrides)


def _open_out(path: str | None):
    return open(path, "wb") if path else sys.stdout.buffer


def cmd_sweep(args) -> int:
    if args.walk_length != 2:
        raise CLIError("walks longer than 2 are reserved for a future extension")
    spec = _sweep_spec(args)
    rows = run_sweep(spec, workers=args.workers)
    out = _open_out(args.out)
    try:
        emit_csv(rows, out, timing=args.timing)
    finally:
        if args.out:
            out.close()
    records = [r.record() for r in rows]
    summary_path = args.summary or (f"{args.out}.summary.csv" if args.out else None)
    if summary_path:
        Path(summary_path).write_bytes(emit_summary_csv(summarize(records)))
    if args.plot:
        title = args.preset or ""
        Path(args.plot).write_bytes(emit_plot(records, AxesSpec(spec.metrics_over, title=title)))
    return 0


def cmd_theorem_check(args) -> int:
    spec = parse_theorem(args.theorem)
    report = run_theorem_check(spec, args.trials, args.seed, args.workers)
    report.slack = args.slack
    print(report.text())
    return 0


def _xi_from_run(args) -> tuple[float, int]:
    rows = read_csv(args.run)
    for cond in args.where:
        key, _, value = cond.partition("=")
        if not rows or key not in rows[0]:
            raise CLIError(f"unknown column in --where: {key}")
        rows = [r for r in rows if r[key] == value or _same_number(r[key], value)]
    if not rows:
        raise CLIError("no rows in --run match the --where filters")
    xis = np.array([float(r["xi"]) for r in rows])
    n_honest = int(np.mean([int(r["n_honest"]) for r in rows]))
    return float(np.nanmean(xis)), n_honest


def _same_number(a: str, b: str) -> bool:
    try:
        return math.isclose(float(a), float(b), abs_tol=1e-9)
    except ValueError:
        return False


def privacy_report(xi: float, n_honest: int, params: PrivacyParams, group_threshold: int | None, fmt: str) -> str:
    alpha, beta = paalec_params(params)
    member, anyone = dp_guarantee(params)
    plausible = None if group_threshold is None else noiseless_aggregation_plausible(xi, n_honest, group_threshold)
    if fmt == "csv":
        head = "xi,n_honest,paalec_alpha,paalec_beta,member_epsilon,member_delta,any_epsilon,any_delta,noiseless_plausible"
        vals = [f"{xi:.6f}", str(n_honest), repr(alpha), repr(beta), repr(member.epsilon), repr(member.delta),
                repr(anyone.epsilon), repr(anyone.delta), "" if plausible is None else str(plausible).lower()]  # fmt: skip
        return head + "\n" + ",".join(vals) + "\n"
    lines = [
        f"measured xi: {xi:.6f} (honest nodes: {n_honest})",
        f"PAALEC parameters: alpha = exp(eps/Delta) = {alpha!r}, beta = 2 ln(1/delta)/s = {beta!r}",
        f"{member.applies_to}: ({member.epsilon!r}, {member.delta!r})-DP",
        f"{anyone.applies_to}: ({anyone.epsilon!r}, {anyone.delta!r})-DP",
    ]
    if plausible is not None:
        lines.append(
            f"noiseless aggregation plausible (heuristic, largest component >= {group_threshold}): {plausible}"
        )
    return "\n".join(lines) + "\n"


def cmd_privacy(args) -> int:
    if args.run:
        xi, n_honest = _xi_from_run(args)
    else:
        source = _graph_source(args)
        if source is None:
            raise CLIError("privacy needs --run CSV or a graph to play a game on")
        from .experiments import load_graph

        g = load_graph(source, args.seed or 0)
        proto = ProtocolConfig(args.protocol or "none", int(args.m or 0), float(args.q or 1.0), args.fat_count)
        cfg = GameConfig(proto, args.adversary or "random", args.fraction or 0.0, args.seed or 0,
                         participants_from_honest=bool(args.participants_from_honest))  # fmt: skip
        outcome = play_game(g, cfg)
        xi, n_honest = outcome.xi, outcome.n_honest
    if math.isnan(xi):
        raise CLIError("measured xi is undefined (no honest nodes)")
    params = PrivacyParams(args.epsilon, args.delta, args.sensitivity, args.s, min(1.0, max(0.0, xi)))
    sys.stdout.write(privacy_report(xi, n_honest, params, args.group_threshold, args.format))
    return 0


def cmd_plot(args) -> int:
    records = read_csv(args.run)
    if not records:
        raise CLIError("run file has no rows")
    xlim = _floats(args.xlim) if args.xlim else None
    axes = AxesSpec(tuple(MetricsOver(x) for x in _strs(args.metrics_over)), xlim, args.title)
    Path(args.out).write_bytes(emit_plot(records, axes))
    return 0


COMMANDS = {
    "ingest": cmd_ingest,
    "sweep": cmd_sweep,
    "theorem-check": cmd_theorem_check,
    "privacy": cmd_privacy,
    "plot": cmd_plot,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = _apply_config(parser, argv)
        return COMMANDS[args.command](args)
    except (CLIError, SourceError, ValueError, KeyError, NotImplementedError, OSError) as exc:
        print(f"xistrong: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
