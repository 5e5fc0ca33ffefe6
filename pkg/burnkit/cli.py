# =========================
# FILE: burnkit/cli.py
# =========================
"""
Command-line surface.

  solve     binary search with Gr (or Gr and GrP) from BFF bounds
  exact     exact burning number for small graphs
  validate  does a given sequence burn the graph; if not, who is left
  simulate  the fire step by step
  emit-ilp  PROP / CMCP / COV as an LP file
  decode    solver output back to a checked sequence
  gen       path / cycle / grid fixtures
  bench     one CSV row per manifest entry

Exit status: 0 ok, 1 bad input, 2 budget or time limit hit, 3 internal error.
"""

from __future__ import annotations

import argparse
import re
import time
import traceback
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from burnkit.burning import first_violation, format_trace, parse_sequence, simulate
from burnkit.cmcp import BudgetExceededError, SelectionError
from burnkit.config import Settings, load_settings
from burnkit.console import CONSOLE
from burnkit.exact import exact_solve
from burnkit.graph_core import (
    DisconnectedGraphError,
    DistanceOracle,
    Graph,
    GraphParseError,
    VertexRangeError,
    generate,
    load_graph,
    write_fixture,
)
from burnkit.heuristics import (
    SolveReport,
    TableRow,
    TimeLimitError,
    binary_search_solve,
    csv_header,
)
from burnkit.ilp import SolutionDecodeError, decode_solution, emit_cmcp, emit_cov, emit_prop, parse_solution_text, write_lp
from burnkit.schema import ModelKind, Strategy, TieBreak

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_LIMIT = 2
EXIT_INTERNAL = 3

INVALID_INPUT = (
    GraphParseError,
    DisconnectedGraphError,
    VertexRangeError,
    SolutionDecodeError,
    SelectionError,
    ValueError,
    OSError,
)
LIMITS = (BudgetExceededError, TimeLimitError)


@dataclass(frozen=True)
class RunConfig:
    command: str
    source: Optional[str] = None
    strategy: Strategy = "Gr"
    tie: TieBreak = TieBreak()
    settings: Settings = Settings()
    output: Optional[str] = None
    csv: bool = False
    largest_component: bool = False
    name: Optional[str] = None
    seq: Optional[str] = None
    model: Optional[ModelKind] = None
    param: Optional[int] = None
    sol: Optional[str] = None
    gen_kind: Optional[str] = None

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        settings = load_settings(
            memory_cap=args.memory_cap,
            threads=args.threads,
            exact_budget=getattr(args, "budget", None),
            time_limit=args.time_limit,
            quiet=True if args.quiet else None,
        )
        tie = TieBreak.seeded(args.seed) if args.seed is not None else TieBreak.parse(getattr(args, "tie", "smallest"))
        strategy = {"gr": "Gr", "grp": "GrP"}[getattr(args, "strategy", "gr")]
        param = getattr(args, "param", None)
        if args.command == "gen":
            param = args.n if args.n is not None else args.k
        model = getattr(args, "model", None)
        return cls(
            command=args.command,
            source=getattr(args, "graph", None) or getattr(args, "manifest", None),
            strategy=strategy,  # type: ignore[arg-type]
            tie=tie,
            settings=settings,
            output=getattr(args, "out", None),
            csv=getattr(args, "csv", False),
            largest_component=args.largest_component,
            name=getattr(args, "name", None),
            seq=getattr(args, "seq", None),
            model=model.upper() if model else None,  # type: ignore[arg-type]
            param=param,
            sol=getattr(args, "sol", None),
            gen_kind=getattr(args, "kind", None),
        )


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

_BYTES = re.compile(r"^\s*(\d+)\s*([kmgt]?)i?b?\s*$", re.I)


def parse_bytes(text: str) -> int:
    """`4294967296`, `512M`, `4G`, `4GiB`."""
    m = _BYTES.match(text)
    if not m:
        raise argparse.ArgumentTypeError(f"not a byte count: {text!r}")
    scale = {"": 1, "k": 1 << 10, "m": 1 << 20, "g": 1 << 30, "t": 1 << 40}[m.group(2).lower()]
    return int(m.group(1)) * scale


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=_positive_int, default=None, help="worker threads (env BURNKIT_THREADS)")
    common.add_argument("--memory-cap", type=parse_bytes, default=None,
                        help="distance-matrix budget, e.g. 4G (env BURNKIT_MEMORY_CAP)")
    common.add_argument("--time-limit", type=float, default=None, help="seconds per probe (env BURNKIT_TIME_LIMIT)")
    common.add_argument("--seed", type=int, default=None, help="shorthand for --tie seed:N")
    common.add_argument("--quiet", action="store_true", help="no progress chatter")
    common.add_argument("--largest-component", action="store_true",
                        help="keep only the largest connected component of the input")

    parser = argparse.ArgumentParser(prog="burnkit", description="Graph burning solvers and tooling.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", parents=[common], help="binary search with Gr / GrP")
    p.add_argument("graph")
    p.add_argument("--strategy", choices=["gr", "grp"], default="gr")
    p.add_argument("--tie", default="smallest", help="smallest | seed:N")
    p.add_argument("--csv", action="store_true", help="print one table row instead of text")
    p.add_argument("--name", default=None, help="row name (default: file stem)")

    p = sub.add_parser("exact", parents=[common], help="exact burning number")
    p.add_argument("graph")
    p.add_argument("--budget", type=_positive_int, default=None, help="search nodes (env BURNKIT_EXACT_BUDGET)")

    for command, text in (("validate", "check a burning sequence"), ("simulate", "step-by-step spread")):
        p = sub.add_parser(command, parents=[common], help=text)
        p.add_argument("graph")
        p.add_argument("--seq", required=True, help="file or literal, e.g. '1,3' or 'v2,v4'")

    p = sub.add_parser("emit-ilp", parents=[common], help="write an LP model")
    p.add_argument("graph")
    p.add_argument("--model", choices=["prop", "cmcp", "cov"], required=True)
    p.add_argument("--param", type=_positive_int, required=True, help="U for prop/cov, p for cmcp")
    p.add_argument("--out", default=None, help="LP file (default: stdout)")

    p = sub.add_parser("decode", parents=[common], help="read a solver solution")
    p.add_argument("graph")
    p.add_argument("--model", choices=["prop", "cmcp", "cov"], required=True)
    p.add_argument("--param", type=_positive_int, required=True)
    p.add_argument("--sol", required=True, help="solution file of 'name value' lines")

    p = sub.add_parser("gen", parents=[common], help="generate a fixture")
    p.add_argument("kind", choices=["path", "cycle", "grid"])
    size = p.add_mutually_exclusive_group(required=True)
    size.add_argument("--n", type=_positive_int, default=None, help="vertices (path, cycle)")
    size.add_argument("--k", type=_positive_int, default=None, help="side length (grid)")
    p.add_argument("--out", default=None, help="fixture file (default: stdout)")

    p = sub.add_parser("bench", parents=[common], help="CSV over a manifest of graphs")
    p.add_argument("manifest")
    return parser


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def _load(cfg: RunConfig) -> Graph:
    return load_graph(cfg.source, largest_component=cfg.largest_component)


def _oracle(graph: Graph, cfg: RunConfig) -> Tuple[DistanceOracle, float]:
    with CONSOLE.timed():
        t0 = time.perf_counter()
        oracle = DistanceOracle(graph, memory_cap=cfg.settings.memory_cap, threads=cfg.settings.threads)
        elapsed = time.perf_counter() - t0
    if oracle.mode != "full":
        CONSOLE.notice(f"⚠️ Distance matrix over the memory cap; answering distances on demand (n={graph.n})")
    return oracle, elapsed


def _row_name(cfg: RunConfig) -> str:
    if cfg.name:
        return cfg.name
    if cfg.source.startswith("gen:"):
        return cfg.source[4:].replace(":", "")
    return Path(cfg.source).stem


def _search(graph: Graph, oracle: DistanceOracle, cfg: RunConfig, strategy: Strategy) -> SolveReport:
    with CONSOLE.timed():
        return binary_search_solve(
            graph, oracle, strategy=strategy, tie=cfg.tie,
            threads=cfg.settings.threads, time_limit=cfg.settings.time_limit,
        )


def _solve(cfg: RunConfig) -> int:
    graph = _load(cfg)
    oracle, bfs_time = _oracle(graph, cfg)
    gr_report = _search(graph, oracle, cfg, "Gr")
    grp_report = _search(graph, oracle, cfg, "GrP") if cfg.strategy == "GrP" else None
    reports = [rep for rep in (gr_report, grp_report) if rep is not None]
    if cfg.csv:
        row = TableRow.from_reports(_row_name(cfg), graph, bfs_time, gr_report, grp_report)
        CONSOLE.result(row.to_csv())
    else:
        CONSOLE.result(f"graph: n={graph.n} m={graph.m}  bounds [{gr_report.lower}, {gr_report.upper}]"
                       f"  BFF {len(gr_report.bff_sequence)}")
        for rep in reports:
            stopped = f"  stopped at p={rep.timed_out_at}" if rep.timed_out else ""
            CONSOLE.result(f"{rep.probe_strategy}: {rep.describe(graph)}  ({rep.elapsed:.3f}s){stopped}")
    # A timed-out search still prints its best sequence.
    return EXIT_LIMIT if any(rep.timed_out for rep in reports) else EXIT_OK


def _exact(cfg: RunConfig) -> int:
    graph = _load(cfg)
    oracle, _ = _oracle(graph, cfg)
    result = exact_solve(graph, oracle, budget=cfg.settings.exact_budget)
    CONSOLE.result(result.describe(graph))
    return EXIT_OK


def _sequence_text(spec: str) -> str:
    path = Path(spec)
    return path.read_text(encoding="utf-8") if path.is_file() else spec


def _validate(cfg: RunConfig) -> int:
    graph = _load(cfg)
    oracle, _ = _oracle(graph, cfg)
    seq = parse_sequence(_sequence_text(cfg.seq), graph)
    miss = first_violation(oracle, seq)
    if miss is None:
        CONSOLE.result("true")
        return EXIT_OK
    CONSOLE.result(f"false: {miss.describe(graph)}")
    return EXIT_OK


def _simulate(cfg: RunConfig) -> int:
    graph = _load(cfg)
    seq = parse_sequence(_sequence_text(cfg.seq), graph)
    trace = simulate(graph, seq)
    for line in format_trace(trace, graph):
        CONSOLE.result(line)
    CONSOLE.result(f"complete: {'true' if trace.complete else 'false'}")
    return EXIT_OK


def _model(cfg: RunConfig, graph: Graph):
    if cfg.model == "PROP":
        return emit_prop(graph, cfg.param)
    oracle, _ = _oracle(graph, cfg)
    if cfg.model == "CMCP":
        return emit_cmcp(oracle, cfg.param)
    return emit_cov(oracle, cfg.param)


def _write_out(cfg: RunConfig, text: str) -> None:
    if cfg.output:
        Path(cfg.output).write_text(text, encoding="utf-8")
        CONSOLE.status(f"✅ Wrote {cfg.output}")
    else:
        CONSOLE.result(text.rstrip("\n"))


def _emit_ilp(cfg: RunConfig) -> int:
    graph = _load(cfg)
    model = _model(cfg, graph)
    variables, constraints = model.counts()
    CONSOLE.status(f"{model.kind}: {variables} binary variables, {constraints} constraints")
    _write_out(cfg, write_lp(model))
    return EXIT_OK


def _decode(cfg: RunConfig) -> int:
    graph = _load(cfg)
    model = _model(cfg, graph)
    assignment = parse_solution_text(Path(cfg.sol).read_text(encoding="utf-8"))
    seq = decode_solution(model, assignment)
    CONSOLE.result(f"{seq.format(graph.labels)}")
    CONSOLE.result(f"valid: true (length {len(seq)})")
    return EXIT_OK


def _gen(cfg: RunConfig) -> int:
    graph = generate(cfg.gen_kind, cfg.param)  # type: ignore[arg-type]
    _write_out(cfg, write_fixture(graph))
    return EXIT_OK


def parse_manifest(text: str, base: Path) -> List[Tuple[str, str]]:
    """Lines "name path_or_genspec"; relative paths are taken from the manifest's folder."""
    entries = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphParseError(f"expected 'name source', got {line!r}", line_no)
        name, source = parts
        if not source.startswith("gen:") and not Path(source).is_absolute():
            source = str(base / source)
        entries.append((name, source))
    return entries


def _bench_row(cfg: RunConfig, name: str, source: str) -> TableRow:
    """One CSV row. Whatever goes wrong stays inside this instance's row."""
    try:
        graph = load_graph(source, largest_component=cfg.largest_component)
        oracle, bfs_time = _oracle(graph, cfg)
    except INVALID_INPUT as e:
        CONSOLE.notice(f"⚠️ {name}: skipped ({e})")
        return TableRow(name=name)
    except Exception as e:  # noqa: BLE001
        CONSOLE.notice(f"❌ {name}: skipped ({type(e).__name__}: {e})")
        return TableRow(name=name)
    reports: List[Optional[SolveReport]] = []
    for strategy in ("Gr", "GrP"):
        try:
            reports.append(_search(graph, oracle, cfg, strategy))  # type: ignore[arg-type]
        except (TimeLimitError, BudgetExceededError) as e:
            CONSOLE.notice(f"⚠️ {name}: {strategy} not finished ({e})")
            reports.append(None)
        except Exception as e:  # noqa: BLE001
            CONSOLE.notice(f"❌ {name}: {strategy} failed ({type(e).__name__}: {e})")
            reports.append(None)
    return TableRow.from_reports(name, graph, bfs_time, reports[0], reports[1])


def _bench(cfg: RunConfig) -> int:
    manifest = Path(cfg.source)
    entries = parse_manifest(manifest.read_text(encoding="utf-8"), manifest.parent)
    CONSOLE.result(csv_header())
    for name, source in entries:
        CONSOLE.status(f"🔥 {name}")
        CONSOLE.result(_bench_row(cfg, name, source).to_csv())
    return EXIT_OK


COMMANDS = {
    "solve": _solve,
    "exact": _exact,
    "validate": _validate,
    "simulate": _simulate,
    "emit-ilp": _emit_ilp,
    "decode": _decode,
    "gen": _gen,
    "bench": _bench,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on bad usage; 2 is reserved for limits here.
        return EXIT_OK if not e.code else EXIT_INVALID

    debug = False
    try:
        cfg = RunConfig.from_args(args)
        debug = cfg.settings.debug
        CONSOLE.quiet = cfg.settings.quiet
        return COMMANDS[cfg.command](cfg)
    except LIMITS as e:
        CONSOLE.notice(f"⏱️ {e}")
        return EXIT_LIMIT
    except INVALID_INPUT as e:
        CONSOLE.notice(f"❌ {e}")
        return EXIT_INVALID
    except Exception as e:  # noqa: BLE001
        CONSOLE.notice(f"❌ Internal error: {type(e).__name__}: {e}")
        if debug:
            CONSOLE.notice(traceback.format_exc())
        return EXIT_INTERNAL
