# =========================
# FILE: burnkit/heuristics.py
# =========================
"""
Burning-sequence heuristics.

  bff                  farthest-first: keep lighting the vertex farthest from
                       every source so far; length <= 3 b(G) - 2
  gr                   greedy on the CMCP view with guess p: radius p-1 down
                       to 0, each time the ball with the most unburned vertices
  grp                  gr once per possible first vertex, stop at the first
                       that burns everything
  binary_search_solve  BFF bounds the answer, then gr/grp probes halve the
                       range

Gr keeps, per vertex, which still-unburned vertices sit within the current
radius. Each iteration shrinks that structure two ways: drop pairs now too
far apart for the smaller radius, drop columns the last pick just burned. With
the full distance matrix that is one boolean n x n array; the on-demand
oracle gets the same thing as per-vertex id/distance lists.
"""

from __future__ import annotations

import csv
import io
import time
from collections import deque
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from burnkit.console import CONSOLE
from burnkit.graph_core import DistanceOracle, Graph
from burnkit.parallel import first_accepted
from burnkit.schema import BurningSequence, Strategy, TieBreak, TiePicker


class TimeLimitError(RuntimeError):
    def __init__(self, limit_s: Optional[float] = None) -> None:
        self.limit_s = limit_s
        super().__init__(
            f"time limit of {limit_s:g}s exceeded" if limit_s else "time limit exceeded"
        )


def _check_deadline(deadline: Optional[float]) -> None:
    if deadline is not None and time.perf_counter() > deadline:
        raise TimeLimitError()


@dataclass(frozen=True)
class GuessLog:
    p: int
    burned_all: bool
    covered_count: int
    elapsed: float


@dataclass
class SolveReport:
    sequence: BurningSequence
    burned_all: bool
    covered_count: int
    strategy: Strategy
    per_guess_log: List[GuessLog] = field(default_factory=list)
    elapsed: float = 0.0
    first_vertex: Optional[int] = None
    runs: int = 1
    # Set by binary_search_solve only.
    probe_strategy: Optional[Strategy] = None
    bff_sequence: Optional[BurningSequence] = None
    bff_time: float = 0.0
    lower: Optional[int] = None
    upper: Optional[int] = None
    # Guess whose probe ran out of time; the search stopped there.
    timed_out_at: Optional[int] = None

    @property
    def timed_out(self) -> bool:
        return self.timed_out_at is not None

    @property
    def p(self) -> int:
        return len(self.sequence)

    def describe(self, graph: Optional[Graph] = None) -> str:
        labels = graph.labels if graph is not None else None
        status = "burns all" if self.burned_all else f"covers {self.covered_count}"
        return f"{self.strategy} length {self.p} ({status}): {self.sequence.format(labels)}"

    def to_row(self, name: str, graph: Graph, bfs_time: float) -> str:
        """CSV row with this report in the column its probing strategy owns."""
        grp_run = (self.probe_strategy or self.strategy) == "GrP"
        row = TableRow.from_reports(
            name, graph, bfs_time,
            gr_report=None if grp_run else self,
            grp_report=self if grp_run else None,
        )
        return row.to_csv()


# ---------------------------------------------------------------------------
# BFF
# ---------------------------------------------------------------------------

def bff(graph: Graph, oracle: DistanceOracle, start: int = 0) -> BurningSequence:
    """Burning farthest-first from `start`."""
    n = graph.n
    v = graph.check_vertex(start)
    seq = [v]
    queue = deque([v])
    burned = [False] * n
    burned[v] = True
    burned_total = 1
    dist = oracle.row(v).astype(np.int64)
    while burned_total < n:
        for _ in range(len(queue)):
            x = queue.popleft()
            for u in graph.adjacency[x]:
                if not burned[u]:
                    burned[u] = True
                    burned_total += 1
                    queue.append(u)
        v = int(np.argmax(dist))
        seq.append(v)
        queue.append(v)
        if not burned[v]:
            burned[v] = True
            burned_total += 1
        np.minimum(dist, oracle.row(v), out=dist)
    return BurningSequence(tuple(seq))


# ---------------------------------------------------------------------------
# Gr
# ---------------------------------------------------------------------------

def _choose(counts: np.ndarray, taken: Sequence[int], picker: TiePicker) -> int:
    counts = counts.copy()
    if taken:
        # A vertex already lit covers nothing new; never light it twice.
        counts[list(taken)] = -1
    top = counts.max()
    return int(picker.pick(np.flatnonzero(counts == top).tolist()))


def _gr_dense(oracle: DistanceOracle, p: int, first: Optional[int], picker: TiePicker,
              deadline: Optional[float]) -> Tuple[List[int], np.ndarray]:
    dist = oracle.matrix
    reach = dist <= (p - 1)
    uncovered = np.ones(oracle.n, dtype=bool)
    seq: List[int] = []
    for r in range(p - 1, -1, -1):
        _check_deadline(deadline)
        if r < p - 1:
            reach &= dist <= r
        if first is not None and r == p - 1:
            v = first
        else:
            v = _choose(reach.sum(axis=1), seq, picker)
        newly = reach[v].copy()
        reach[:, newly] = False
        uncovered &= ~newly
        seq.append(v)
    return seq, uncovered


def _gr_lists(oracle: DistanceOracle, p: int, first: Optional[int], picker: TiePicker,
              deadline: Optional[float]) -> Tuple[List[int], np.ndarray]:
    n = oracle.n
    members: List[np.ndarray] = []
    dists: List[np.ndarray] = []
    for v in range(n):
        ids, d = oracle.ball_with_distances(v, p - 1)
        members.append(ids)
        dists.append(d)
    uncovered = np.ones(n, dtype=bool)
    seq: List[int] = []
    for r in range(p - 1, -1, -1):
        _check_deadline(deadline)
        for v in range(n):
            keep = (dists[v] <= r) & uncovered[members[v]]
            members[v] = members[v][keep]
            dists[v] = dists[v][keep]
        if first is not None and r == p - 1:
            v = first
        else:
            counts = np.fromiter((len(m) for m in members), dtype=np.int64, count=n)
            v = _choose(counts, seq, picker)
        uncovered[members[v]] = False
        seq.append(v)
    return seq, uncovered


def gr(
    graph: Graph,
    oracle: DistanceOracle,
    p: int,
    first: Optional[int] = None,
    tie: TieBreak = TieBreak(),
    deadline: Optional[float] = None,
    salt: int = 0,
) -> SolveReport:
    """Greedy burning with guess p. `first`, when given, is the radius p-1 pick."""
    if p < 1:
        raise ValueError(f"p must be positive, got {p}")
    if p > graph.n:
        raise ValueError(f"p={p} exceeds the {graph.n} vertices available")
    if first is not None:
        first = graph.check_vertex(first)
    t0 = time.perf_counter()
    picker = tie.picker(salt)
    if oracle.matrix is not None:
        seq, uncovered = _gr_dense(oracle, p, first, picker, deadline)
    else:
        seq, uncovered = _gr_lists(oracle, p, first, picker, deadline)
    covered = graph.n - int(uncovered.sum())
    elapsed = time.perf_counter() - t0
    return SolveReport(
        sequence=BurningSequence(tuple(seq)),
        burned_all=covered == graph.n,
        covered_count=covered,
        strategy="Gr",
        per_guess_log=[GuessLog(p, covered == graph.n, covered, elapsed)],
        elapsed=elapsed,
        first_vertex=seq[0],
    )


def grp(
    graph: Graph,
    oracle: DistanceOracle,
    p: int,
    tie: TieBreak = TieBreak(),
    threads: int = 1,
    deadline: Optional[float] = None,
) -> SolveReport:
    """Gr from every first vertex in ascending order; the first success wins."""
    t0 = time.perf_counter()

    def run(v: int) -> SolveReport:
        return gr(graph, oracle, p, first=v, tie=tie, deadline=deadline, salt=v + 1)

    winner, results = first_accepted(
        run, list(range(graph.n)), accept=lambda rep: rep.burned_all, threads=threads,
    )
    if winner is not None:
        best = results[winner]
    else:
        # max() keeps the earliest on ties: smallest first vertex.
        best = max(results, key=lambda rep: rep.covered_count)
    elapsed = time.perf_counter() - t0
    return SolveReport(
        sequence=best.sequence,
        burned_all=best.burned_all,
        covered_count=best.covered_count,
        strategy="GrP",
        per_guess_log=[GuessLog(p, best.burned_all, best.covered_count, elapsed)],
        elapsed=elapsed,
        first_vertex=best.first_vertex,
        runs=len(results),
    )


# ---------------------------------------------------------------------------
# Binary search
# ---------------------------------------------------------------------------

def bff_bounds(bff_length: int) -> Tuple[int, int]:
    """(ceil((s + 2) / 3), s - 1): BFF never exceeds 3 b(G) - 2."""
    return -(-(bff_length + 2) // 3), bff_length - 1


def binary_search_solve(
    graph: Graph,
    oracle: DistanceOracle,
    strategy: Strategy = "Gr",
    tie: TieBreak = TieBreak(),
    threads: int = 1,
    time_limit: Optional[float] = None,
) -> SolveReport:
    """
    Shortest sequence among BFF and every successful probe.

    A probe that runs past `time_limit` ends the search: the report keeps
    the best sequence found up to then and records the guess in
    `timed_out_at`.
    """
    if strategy not in ("Gr", "GrP"):
        raise ValueError(f"binary search probes with Gr or GrP, not {strategy!r}")
    t0 = time.perf_counter()
    s0 = bff(graph, oracle, start=0)
    bff_time = time.perf_counter() - t0
    lower, upper = bff_bounds(len(s0))
    CONSOLE.status(f"🔥 BFF length {len(s0)}; searching p in [{lower}, {upper}]")

    best, best_strategy = s0, "BFF"
    log: List[GuessLog] = []
    timed_out_at: Optional[int] = None
    lo, hi = lower, upper
    while lo <= hi:
        p = (lo + hi) // 2
        deadline = time.perf_counter() + time_limit if time_limit else None
        try:
            if strategy == "Gr":
                rep = gr(graph, oracle, p, tie=tie, deadline=deadline)
            else:
                rep = grp(graph, oracle, p, tie=tie, threads=threads, deadline=deadline)
        except TimeLimitError:
            CONSOLE.notice(f"⏱️ p={p}: {TimeLimitError(time_limit)}; keeping length {len(best)}")
            timed_out_at = p
            break
        log.append(GuessLog(p, rep.burned_all, rep.covered_count, rep.elapsed))
        CONSOLE.status(
            f"  p={p}: {'✅ burns all' if rep.burned_all else f'❌ covers {rep.covered_count}'}"
            f" ({rep.elapsed:.3f}s)"
        )
        if rep.burned_all:
            hi = p - 1
            if len(rep.sequence) < len(best):
                best, best_strategy = rep.sequence, strategy
        else:
            lo = p + 1

    return SolveReport(
        sequence=best,
        burned_all=True,
        covered_count=graph.n,
        strategy=best_strategy,  # type: ignore[arg-type]
        per_guess_log=log,
        elapsed=time.perf_counter() - t0,
        probe_strategy=strategy,
        bff_sequence=s0,
        bff_time=bff_time,
        lower=lower,
        upper=upper,
        timed_out_at=timed_out_at,
    )


# ---------------------------------------------------------------------------
# Half-coverage lower bound
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LowerBoundCertificate:
    """Gr covered fewer than n/2 vertices with guess p, so p < b(G)."""

    p: int
    covered_count: int
    n: int

    def describe(self) -> str:
        return f"p < b(G): Gr covered {self.covered_count} < {self.n}/2 with p={self.p}"


def half_coverage_test(report: SolveReport, n: int) -> Optional[LowerBoundCertificate]:
    if 2 * report.covered_count < n:
        return LowerBoundCertificate(p=report.p, covered_count=report.covered_count, n=n)
    return None


# ---------------------------------------------------------------------------
# Table rows
# ---------------------------------------------------------------------------

TABLE_COLUMNS = (
    "name", "n", "m", "l", "s0", "t_bff", "t_bfs",
    "gr_size", "gr_time", "grp_size", "grp_time",
)


def _seconds(t: Optional[float]) -> str:
    return "-" if t is None else f"{t:.3f}"


@dataclass
class TableRow:
    """One line of the results table; missing cells print as '-'."""

    name: str
    n: Optional[int] = None
    m: Optional[int] = None
    lower: Optional[int] = None
    bff_size: Optional[int] = None
    bff_time: Optional[float] = None
    bfs_time: Optional[float] = None
    gr_size: Optional[int] = None
    gr_time: Optional[float] = None
    grp_size: Optional[int] = None
    grp_time: Optional[float] = None

    @classmethod
    def from_reports(
        cls,
        name: str,
        graph: Graph,
        bfs_time: float,
        gr_report: Optional[SolveReport] = None,
        grp_report: Optional[SolveReport] = None,
    ) -> "TableRow":
        row = cls(name=name, n=graph.n, m=graph.m, bfs_time=bfs_time)
        for rep in (gr_report, grp_report):
            if rep is not None and rep.bff_sequence is not None:
                row.lower = rep.lower
                row.bff_size = len(rep.bff_sequence)
                row.bff_time = rep.bff_time
        if gr_report is not None:
            row.gr_size, row.gr_time = gr_report.p, gr_report.elapsed
        if grp_report is not None:
            row.grp_size, row.grp_time = grp_report.p, grp_report.elapsed
        return row

    def cells(self) -> List[str]:
        def num(x: Optional[int]) -> str:
            return "-" if x is None else str(x)

        return [
            self.name, num(self.n), num(self.m), num(self.lower), num(self.bff_size),
            _seconds(self.bff_time), _seconds(self.bfs_time),
            num(self.gr_size), _seconds(self.gr_time),
            num(self.grp_size), _seconds(self.grp_time),
        ]

    def to_csv(self) -> str:
        buf = io.StringIO()
        csv.writer(buf, lineterminator="").writerow(self.cells())
        return buf.getvalue()


def csv_header() -> str:
    return ",".join(TABLE_COLUMNS)
