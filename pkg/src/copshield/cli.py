"""``copshield`` command line: solve, simulate, generate, experiment, bounds, verify.

Exit codes: 0 success or capture, 2 the robber survived (or a strategy made
an illegal move), 3 bad input, 4 a size or state budget was exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import os
import sys
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from fractions import Fraction
from pathlib import Path

from .bounds import bound_report, theorem1_exponent
from .errors import (BudgetExceededError, CopShieldError, DisconnectedError, DomainError, IllegalMoveError,
                     InvalidVertexError, PreconditionError, SizeLimitError)
from .game import GreedyRobber, RandomRobber, StationaryRobber, best_response_robber, run_game, verify_protection
from .generators import FAMILIES, GenerationError, generate
from .graph import Graph, ball, longest_geodesic, min_vertex_cover
from .io import GraphFormatError, format_edge_list, read_graph
from .solver import cop_number
from .strategies.base import Protector, stationary_protector
from .strategies.compose import compose_protection
from .strategies.epsilon import epsilon_strategy
from .strategies.guard import geodesic_protector
from .strategies.main import final_cop_protector, main_strategy, meyniel_vc_strategy
from .strategies.patrol import patrol_protector

log = logging.getLogger("copshield")

EXIT_OK, EXIT_SURVIVED, EXIT_INPUT, EXIT_BUDGET = 0, 2, 3, 4
STRATEGIES = ("geodesic", "patrol", "epsilon", "main", "meyniel")
ROBBERS = ("best", "greedy", "random", "stationary")
INPUT_ERRORS = (GraphFormatError, GenerationError, PreconditionError, DomainError, DisconnectedError,
                InvalidVertexError, OSError)
BUDGET_ERRORS = (BudgetExceededError, SizeLimitError)


class InputError(CopShieldError):
    pass


@dataclass
class ExperimentConfig:
    command: str
    graph: str | None = None
    family: str | None = None
    n: int = 0
    p: float = 0.3
    seed: int | None = None
    cols: int | None = None
    cover_size: int | None = None
    strategy: str = "meyniel"
    epsilon: str = "1"
    k: int | None = None
    d: int = 2
    s: int = 2
    alpha_override: float | None = None
    base_threshold: int | None = None
    cover_probability: float | None = None
    force_endgame: bool = False
    robber: str = "best"
    robber_seed: int = 0
    robber_start: int = 0
    horizon: int | None = None
    exact: bool = False

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "ExperimentConfig":
        names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in vars(args).items() if k in names})

    def validate(self) -> None:
        if (self.graph is None) == (self.family is None):
            raise InputError("give exactly one of --graph or --family")
        if self.family in ("gnp-connected", "star-forest-plus-cover") and self.seed is None:
            raise InputError(f"--family {self.family} needs --seed")
        if self.robber == "random" and self.robber_seed is None:
            raise InputError("--robber random needs --robber-seed")


@dataclass
class ResultRow:
    graph_id: str
    n: int
    m: int
    vc: int
    cop_number: int | None
    strategy: str
    robber: str
    budget: int
    captured: bool
    capture_step: int | None
    outcome: str
    log2_f: float | None = None
    theorem2_k: int | None = None
    theorem2_k_clamped: bool | None = None
    epsilon_c: int | None = None
    budget_bound: str | None = None
    flags: str = ""
    error: str = ""
    wall_time: float = 0.0

    def validate(self) -> None:
        if self.error:
            return
        if self.budget < 1:
            raise ValueError("budget must be at least 1")
        if self.captured != (self.outcome == "captured"):
            raise ValueError("captured flag disagrees with the outcome")


ROW_FIELDS = [f.name for f in fields(ResultRow)]


# ---------------------------------------------------------------------------
# graphs and strategies

def load_graph(cfg: ExperimentConfig) -> Graph:
    if cfg.graph is not None:
        g = read_graph(cfg.graph)
        if g.name is None:
            g = Graph(g.n, g.edges(), name=Path(cfg.graph).stem)
        return g
    return generate(cfg.family, n=cfg.n, p=cfg.p, seed=cfg.seed, cols=cfg.cols, cover_size=cfg.cover_size)


def _cover_posts(sub: Graph, sub_root) -> Protector:
    """Capture on a leftover component: a cop on every vertex of a minimum cover."""
    posts = tuple(sorted(min_vertex_cover(sub))) or (0,)
    return stationary_protector(sub, posts, frozenset(sub.vertices()), "base-case", sub_root)


@dataclass
class Built:
    protector: Protector
    vc: int
    k: int
    budget_bound: str | None = None


def build_strategy(g: Graph, cfg: ExperimentConfig) -> Built:
    """Capture strategy selected by ``cfg.strategy``.

    ``geodesic`` and ``patrol`` protect one set and then put cops on a
    minimum vertex cover of every remaining component; ``main`` runs the
    set-protection recursion on a minimum vertex cover with the given ``k``
    and ``d``; ``meyniel`` does the same with ``d = 2`` and ``k`` chosen by
    the closed form unless ``--k`` is given.
    """
    g.require_connected()
    x = min_vertex_cover(g)
    vc = len(x)
    root = tuple(g.vertices())
    name = cfg.strategy
    if name == "geodesic":
        outer = geodesic_protector(g, longest_geodesic(g), root)
        return Built(compose_protection(g, outer, _cover_posts), vc, cfg.k or 2)
    if name == "patrol":
        if not x:
            return Built(_cover_posts(g, root), vc, cfg.k or 2)
        s = cfg.s
        cap = max(max(len(ball(g, w, s - 1) & x) for w in g.vertices()), 1)
        hub = max(g.vertices(), key=lambda v: (len(ball(g, v, s) & x), -v))
        outer = patrol_protector(g, x, hub, s, cap, root)
        return Built(compose_protection(g, outer, _cover_posts), vc, cfg.k or 2)
    if name == "epsilon":
        res = epsilon_strategy(g, Fraction(cfg.epsilon))
        return Built(res.protector, vc, cfg.k or 2, str(res.bound))
    if name == "main":
        k = cfg.k or 2
        if not x:
            return Built(_cover_posts(g, root), vc, k)
        inner = main_strategy(g, x, k, cfg.d, alpha=cfg.alpha_override, base_threshold=cfg.base_threshold,
                              seed=cfg.seed or 0, force_endgame=cfg.force_endgame,
                              cover_probability=cfg.cover_probability)
        return Built(compose_protection(g, inner, final_cop_protector), vc, k)
    if name == "meyniel":
        res = meyniel_vc_strategy(g, k=cfg.k, alpha=cfg.alpha_override, base_threshold=cfg.base_threshold,
                                  seed=cfg.seed or 0, force_endgame=cfg.force_endgame,
                                  cover_probability=cfg.cover_probability)
        return Built(res.protector, vc, res.k)
    raise InputError(f"unknown strategy {name!r}")


def play(g: Graph, built: Built, cfg: ExperimentConfig):
    """Trace of the selected robber against the built strategy."""
    strat = built.protector.strategy
    if cfg.robber == "best":
        return best_response_robber(g, strat, horizon=cfg.horizon).trace
    robbers = {
        "greedy": lambda: GreedyRobber(),
        "random": lambda: RandomRobber(cfg.robber_seed),
        "stationary": lambda: StationaryRobber(g._check(cfg.robber_start)),
    }
    if cfg.robber not in robbers:
        raise InputError(f"unknown robber {cfg.robber!r}")
    return run_game(g, strat, robbers[cfg.robber](), horizon=cfg.horizon)


def run_job(cfg: ExperimentConfig, g: Graph | None = None):
    """One (graph, strategy, robber) job; returns ``(row, trace)``."""
    t0 = time.perf_counter()
    g = load_graph(cfg) if g is None else g
    gid = g.name or "graph"
    vc = len(min_vertex_cover(g))
    copn = cop_number(g) if cfg.exact else None
    built = build_strategy(g, cfg)
    trace = play(g, built, cfg)
    rep = bound_report(built.k, max(cfg.d, 2), max(vc, 2), Fraction(cfg.epsilon), vc=vc)
    row = ResultRow(
        graph_id=gid, n=g.n, m=g.m, vc=vc, cop_number=copn, strategy=cfg.strategy, robber=cfg.robber,
        budget=built.protector.budget, captured=trace.outcome == "captured", capture_step=trace.capture_step,
        outcome=trace.outcome, log2_f=rep.log2_f, theorem2_k=rep.theorem2_k,
        theorem2_k_clamped=rep.theorem2_k_clamped, epsilon_c=rep.epsilon_c, budget_bound=built.budget_bound,
        flags=";".join(built.protector.plan.all_flags()),
    )
    row.wall_time = round(time.perf_counter() - t0, 6)
    row.validate()
    return row, trace


def _failed_row(cfg: ExperimentConfig, exc: Exception) -> ResultRow:
    gid = Path(cfg.graph).stem if cfg.graph else f"{cfg.family}-n{cfg.n}-s{cfg.seed}"
    return ResultRow(gid, cfg.n, 0, 0, None, cfg.strategy, cfg.robber, 0, False, None, "error",
                     error=f"{type(exc).__name__}: {exc}")


def _batch_job(cfg: ExperimentConfig):
    try:
        return run_job(cfg)
    except (CopShieldError, ValueError, OSError) as exc:
        return _failed_row(cfg, exc), None


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=ROW_FIELDS, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: ("" if v is None else v) for k, v in asdict(row).items()})
    return buf.getvalue()


def write_atomic(path: str | os.PathLike, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


# ---------------------------------------------------------------------------
# commands

def cmd_solve(args) -> int:
    cfg = ExperimentConfig.from_args(args)
    cfg.validate()
    g = load_graph(cfg)
    cop = cop_number(g, k_max=args.k_max)
    vc = len(min_vertex_cover(g))
    print(f"graph={g.name or 'graph'} n={g.n} m={g.m}")
    print(f"cop={cop}")
    print(f"vc={vc}")
    if vc >= 1:
        print(f"theorem1_exponent={theorem1_exponent(vc)!r}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    cfg = ExperimentConfig.from_args(args)
    cfg.validate()
    row, trace = run_job(cfg)
    if args.trace_out:
        write_atomic(args.trace_out, trace.to_jsonl())
    text = rows_to_csv([row])
    if args.out:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if row.captured else EXIT_SURVIVED


def cmd_generate(args) -> int:
    cfg = ExperimentConfig.from_args(args)
    if cfg.family is None:
        raise InputError("generate needs --family")
    g = generate(cfg.family, n=cfg.n, p=cfg.p, seed=cfg.seed, cols=cfg.cols, cover_size=cfg.cover_size)
    text = format_edge_list(g)
    if args.out:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def experiment_configs(args) -> list[ExperimentConfig]:
    """Jobs in a fixed order: graph, then strategy, then robber."""
    base = ExperimentConfig.from_args(args)
    sources = []
    for path in args.graph or []:
        sources.append({"graph": path, "family": None})
    if args.family:
        for i in range(args.count):
            seed = None if args.seed is None else args.seed + i
            sources.append({"graph": None, "family": args.family, "seed": seed})
    jobs = []
    for src in sources:
        for strat in args.strategy or ["meyniel"]:
            for robber in args.robber or ["best"]:
                cfg = ExperimentConfig(**{**asdict(base), **src, "strategy": strat, "robber": robber})
                cfg.validate()
                jobs.append(cfg)
    return jobs


def cmd_experiment(args) -> int:
    jobs = experiment_configs(args)
    workers = args.jobs or os.cpu_count() or 1
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_batch_job, jobs))
    else:
        results = [_batch_job(cfg) for cfg in jobs]
    rows = [r for r, _ in results]
    if args.trace_out:
        out_dir = Path(args.trace_out)
        out_dir.mkdir(parents=True, exist_ok=True)
        for i, (row, trace) in enumerate(results):
            if trace is not None:
                write_atomic(out_dir / f"{i:05d}-{row.graph_id}-{row.strategy}-{row.robber}.jsonl", trace.to_jsonl())
    text = rows_to_csv(rows)
    if args.out:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    done = [r for r in rows if not r.error]
    rate = sum(r.captured for r in done) / len(done) if done else 1.0
    ratios = [r.budget / r.vc for r in done if r.vc]
    print(f"jobs={len(rows)} errors={len(rows) - len(done)} capture_rate={rate:.4f} "
          f"max_budget_over_vc={max(ratios, default=0.0):.4f}", file=sys.stderr)
    return EXIT_OK if rate == 1.0 else EXIT_SURVIVED


def cmd_bounds(args) -> int:
    if args.k is None or args.x is None:
        raise InputError("bounds needs --k and --x")
    rep = bound_report(args.k, args.d, args.x, Fraction(args.epsilon))
    sys.stdout.write(rep.to_text())
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = ExperimentConfig.from_args(args)
    cfg.validate()
    g = load_graph(cfg)
    built = build_strategy(g, cfg)
    cert = built.protector.certificate
    res = verify_protection(g, built.protector.strategy, cert)
    print(f"strategy={cfg.strategy} budget={cert.cop_budget} threshold={cert.threshold_step} "
          f"protected={len(cert.protected_set)} states={res.states} ok={res.ok}")
    if res.witness is not None and args.trace_out:
        write_atomic(args.trace_out, res.witness.to_jsonl())
    return EXIT_OK if res.ok else EXIT_SURVIVED


# ---------------------------------------------------------------------------
# parser

def _graph_flags(p: argparse.ArgumentParser, multi: bool = False) -> None:
    if multi:
        p.add_argument("--graph", action="append", help="edge-list or DIMACS file (repeatable)")
    else:
        p.add_argument("--graph", help="edge-list or DIMACS file")
    p.add_argument("--family", choices=FAMILIES)
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--p", type=float, default=0.3)
    p.add_argument("--seed", type=int)
    p.add_argument("--cols", type=int, help="second dimension for grid / complete-bipartite")
    p.add_argument("--cover-size", type=int, help="cover size for star-forest-plus-cover")


def _strategy_flags(p: argparse.ArgumentParser, multi: bool = False) -> None:
    if multi:
        p.add_argument("--strategy", action="append", choices=STRATEGIES)
    else:
        p.add_argument("--strategy", choices=STRATEGIES, default="meyniel")
    p.add_argument("--epsilon", default="1", help="fraction in (0, 1], e.g. 1/2")
    p.add_argument("--k", type=int)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--s", type=int, default=2, help="patrol radius")
    p.add_argument("--alpha-override", type=float)
    p.add_argument("--base-threshold", type=int)
    p.add_argument("--cover-probability", type=float,
                   help="cover-set sampling probability; disables the size bound")
    p.add_argument("--force-endgame", action="store_true")


def _robber_flags(p: argparse.ArgumentParser, multi: bool = False) -> None:
    if multi:
        p.add_argument("--robber", action="append", choices=ROBBERS)
    else:
        p.add_argument("--robber", choices=ROBBERS, default="best")
    p.add_argument("--robber-seed", type=int, default=0)
    p.add_argument("--robber-start", type=int, default=0, help="vertex for --robber stationary")
    p.add_argument("--horizon", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="copshield", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="exact cop number and vertex cover number")
    _graph_flags(p)
    p.add_argument("--k-max", type=int)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("simulate", help="play one strategy against one robber")
    _graph_flags(p)
    _strategy_flags(p)
    _robber_flags(p)
    p.add_argument("--out", help="CSV row (default: stdout)")
    p.add_argument("--trace-out", help="JSONL trace")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("generate", help="write a generated graph as an edge list")
    _graph_flags(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("experiment", help="graph x strategy x robber matrix to CSV")
    _graph_flags(p, multi=True)
    p.add_argument("--count", type=int, default=1, help="generated graphs, seeds seed..seed+count-1")
    _strategy_flags(p, multi=True)
    _robber_flags(p, multi=True)
    p.add_argument("--exact", action="store_true", help="also compute the exact cop number")
    p.add_argument("--jobs", type=int, help="worker processes (default: one per core)")
    p.add_argument("--out", help="CSV file (default: stdout)")
    p.add_argument("--trace-out", help="directory for per-job JSONL traces")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("bounds", help="evaluate the closed-form bounds")
    p.add_argument("--k", type=int)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--x", type=int)
    p.add_argument("--epsilon", default="1")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("verify", help="check a strategy's protection certificate exhaustively")
    _graph_flags(p)
    _strategy_flags(p)
    p.add_argument("--trace-out", help="JSONL witness when verification fails")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except BUDGET_ERRORS as exc:
        print(f"copshield: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except IllegalMoveError as exc:
        print(f"copshield: illegal move: {exc}", file=sys.stderr)
        return EXIT_SURVIVED
    except (InputError, *INPUT_ERRORS, ValueError) as exc:
        print(f"copshield: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
