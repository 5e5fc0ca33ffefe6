# =========================
# FILE: burnkit/burning.py
# =========================
"""
What it means for a sequence to burn a graph.

Two views of the same thing, kept side by side so each checks the other:
  - the static one: every vertex v lies within p - i hops of some u_i
    (`is_burning_sequence`, `first_violation`);
  - the dynamic one: fire spreads one hop per step while a new source is lit
    each step (`simulate`).

Repeated vertices are allowed here (a sequence is any list of vertices); the
solvers are the ones that promise distinct entries.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from burnkit.graph_core import DistanceOracle, Graph, VertexRangeError
from burnkit.schema import BurningSequence


@dataclass(frozen=True)
class Violation:
    """An unburned vertex and the position (1-based) that came closest to it."""

    vertex: int
    position: int
    distance: int
    radius: int

    def describe(self, graph: Optional[Graph] = None) -> str:
        v = graph.label_of(self.vertex) if graph is not None else self.vertex
        return (
            f"vertex {v} unburned: closest source is position {self.position} "
            f"at distance {self.distance} > radius {self.radius}"
        )


@dataclass(frozen=True)
class BurnTrace:
    """steps[j] is the burned set after step j + 1."""

    steps: Tuple[FrozenSet[int], ...]
    complete: bool

    def newly_burned(self) -> List[List[int]]:
        out: List[List[int]] = []
        before: FrozenSet[int] = frozenset()
        for step in self.steps:
            out.append(sorted(step - before))
            before = step
        return out


def _check_sequence(n: int, seq: BurningSequence) -> None:
    if len(seq) == 0:
        raise ValueError("a burning sequence needs at least one vertex")
    for v in seq:
        if not (0 <= v < n):
            raise VertexRangeError(v, n)


def _coverage_slack(oracle: DistanceOracle, seq: BurningSequence) -> np.ndarray:
    """slack[i, v] = d(v, u_i) - (p - i); v is burned iff some slack <= 0."""
    _check_sequence(oracle.n, seq)
    rows = oracle.rows(list(seq)).astype(np.int64)
    radii = np.asarray(seq.radii(), dtype=np.int64)
    return rows - radii[:, None]


def is_burning_sequence(oracle: DistanceOracle, seq: BurningSequence) -> bool:
    slack = _coverage_slack(oracle, seq)
    return bool((slack <= 0).any(axis=0).all())


def burned_count(oracle: DistanceOracle, seq: BurningSequence) -> int:
    slack = _coverage_slack(oracle, seq)
    return int((slack <= 0).any(axis=0).sum())


def first_violation(oracle: DistanceOracle, seq: BurningSequence) -> Optional[Violation]:
    """Smallest unburned vertex with its nearest miss, or None when seq burns G."""
    slack = _coverage_slack(oracle, seq)
    unburned = np.flatnonzero(~(slack <= 0).any(axis=0))
    if unburned.size == 0:
        return None
    v = int(unburned[0])
    i = int(np.argmin(slack[:, v]))
    radius = len(seq) - (i + 1)
    return Violation(vertex=v, position=i + 1, distance=int(slack[i, v]) + radius, radius=radius)


def simulate(graph: Graph, seq: BurningSequence) -> BurnTrace:
    """Spread one hop per step; light u_j at step j."""
    _check_sequence(graph.n, seq)
    burned = np.zeros(graph.n, dtype=bool)
    frontier: List[int] = []
    steps: List[FrozenSet[int]] = []
    for u in seq:
        spread: List[int] = []
        for v in frontier:
            for w in graph.adjacency[v]:
                if not burned[w]:
                    burned[w] = True
                    spread.append(w)
        if not burned[u]:
            burned[u] = True
            spread.append(u)
        # Only the newly burned can ignite anything new next step.
        frontier = spread
        steps.append(frozenset(np.flatnonzero(burned).tolist()))
    return BurnTrace(steps=tuple(steps), complete=bool(burned.all()))


_POSITIONAL = re.compile(r"^v(\d+)$", re.I)


def parse_sequence(text: str, graph: Graph) -> BurningSequence:
    """
    "v2,v4" (1-based vertex names, as in the literature) or "1,3" (the
    file's own labels). Whitespace and a trailing newline are fine.
    """
    tokens = [t.strip() for t in text.replace("\n", ",").split(",") if t.strip()]
    if not tokens:
        raise ValueError("empty sequence")
    vertices = []
    for token in tokens:
        m = _POSITIONAL.match(token)
        if m:
            vertices.append(graph.check_vertex(int(m.group(1)) - 1))
            continue
        try:
            label = int(token)
        except ValueError:
            raise ValueError(f"not a vertex: {token!r}") from None
        vertices.append(graph.vertex_of_label(label))
    return BurningSequence(tuple(vertices))


def format_trace(trace: BurnTrace, graph: Optional[Graph] = None) -> List[str]:
    lines = []
    for j, fresh in enumerate(trace.newly_burned(), start=1):
        ids = [graph.label_of(v) if graph is not None else v for v in fresh]
        lines.append(f"step {j}: " + (" ".join(str(x) for x in ids) if ids else "-"))
    return lines
