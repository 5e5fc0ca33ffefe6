# =========================
# FILE: burnkit/graph_core.py
# =========================
"""
Graphs, their parsing and generation, and hop distances between vertices.

Vertex ids are contiguous from 0 everywhere past this module. Whatever ids the
input file used are kept as `labels` so reports can speak the file's language.

Benchmark edge lists are messy: self-loops, the same edge listed twice (once
per direction, or verbatim), the odd stray component. Loops and duplicates are
normalized away and counted. A second component is NOT: burning distances are
undefined across components, so that is an error unless the caller explicitly
asks for the largest component.
"""

from __future__ import annotations

import functools
import io
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import (
    Dict, FrozenSet, Iterable, Iterator, List, Literal, Optional, Sequence,
    TextIO, Tuple, Union,
)

import numpy as np

from burnkit.config import DEFAULT_MEMORY_CAP
from burnkit.console import CONSOLE
from burnkit.parallel import ordered_map

Indexing = Literal[0, 1, "auto"]
GeneratorKind = Literal["path", "cycle", "grid"]

COMMENT_PREFIXES = ("#", "%")


class GraphParseError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class DisconnectedGraphError(ValueError):
    def __init__(self, components: int) -> None:
        self.components = components
        super().__init__(
            f"graph has {components} connected components; burning needs a connected "
            "graph (use the largest-component option to keep only the biggest one)"
        )


class VertexRangeError(IndexError):
    def __init__(self, v: int, n: int) -> None:
        self.vertex = v
        super().__init__(f"vertex {v} out of range for a graph with {n} vertices")


@dataclass(frozen=True)
class Normalization:
    """What was silently fixed while building a graph."""

    self_loops: int = 0
    duplicates: int = 0
    dropped_vertices: int = 0

    @property
    def clean(self) -> bool:
        return not (self.self_loops or self.duplicates or self.dropped_vertices)

    def describe(self) -> str:
        parts = []
        if self.self_loops:
            parts.append(f"{self.self_loops} self-loop(s)")
        if self.duplicates:
            parts.append(f"{self.duplicates} duplicate edge(s)")
        if self.dropped_vertices:
            parts.append(f"{self.dropped_vertices} vertex(es) outside the largest component")
        return "dropped " + ", ".join(parts) if parts else "no normalization"


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple, undirected, connected. Adjacency lists are strictly ascending."""

    n: int
    m: int
    adjacency: Tuple[Tuple[int, ...], ...]
    labels: Optional[Tuple[int, ...]] = None
    normalization: Normalization = field(default_factory=Normalization)

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------
    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[Tuple[int, int]],
        labels: Optional[Sequence[int]] = None,
        largest_component: bool = False,
    ) -> "Graph":
        if n <= 0:
            raise GraphParseError("empty graph")
        neighbors: List[set] = [set() for _ in range(n)]
        loops = duplicates = 0
        for u, v in edges:
            if not (0 <= u < n):
                raise VertexRangeError(u, n)
            if not (0 <= v < n):
                raise VertexRangeError(v, n)
            if u == v:
                loops += 1
                continue
            if v in neighbors[u]:
                duplicates += 1
                continue
            neighbors[u].add(v)
            neighbors[v].add(u)

        components = _components(neighbors)
        dropped = 0
        if len(components) > 1:
            if not largest_component:
                raise DisconnectedGraphError(len(components))
            # Largest wins; among equals the one holding the smallest vertex.
            keep = max(components, key=lambda comp: (len(comp), -min(comp)))
            kept = sorted(keep)
            dropped = n - len(kept)
            remap = {old: new for new, old in enumerate(kept)}
            neighbors = [{remap[w] for w in neighbors[old]} for old in kept]
            if labels is not None:
                labels = [labels[old] for old in kept]
            else:
                labels = kept
            n = len(kept)

        adjacency = tuple(tuple(sorted(adj)) for adj in neighbors)
        m = sum(len(a) for a in adjacency) // 2
        return cls(
            n=n,
            m=m,
            adjacency=adjacency,
            labels=tuple(int(x) for x in labels) if labels is not None else None,
            normalization=Normalization(loops, duplicates, dropped),
        )

    # ------------------------------------------------------------------
    # Queries
    # ------------------------------------------------------------------
    def check_vertex(self, v: int) -> int:
        if not isinstance(v, (int, np.integer)) or not (0 <= v < self.n):
            raise VertexRangeError(v, self.n)
        return int(v)

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return self.adjacency[self.check_vertex(v)]

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def max_degree(self) -> int:
        return max(len(a) for a in self.adjacency)

    def edges(self) -> Iterator[Tuple[int, int]]:
        """Each edge once as (u, v) with u < v, lexicographic order."""
        for u, adj in enumerate(self.adjacency):
            for v in adj:
                if u < v:
                    yield u, v

    def label_of(self, v: int) -> int:
        v = self.check_vertex(v)
        return self.labels[v] if self.labels is not None else v

    @functools.cached_property
    def _label_index(self) -> Dict[int, int]:
        if self.labels is None:
            return {v: v for v in range(self.n)}
        return {label: v for v, label in enumerate(self.labels)}

    def vertex_of_label(self, label: int) -> int:
        try:
            return self._label_index[int(label)]
        except KeyError:
            raise VertexRangeError(label, self.n) from None


def _components(neighbors: Sequence[Iterable[int]]) -> List[List[int]]:
    n = len(neighbors)
    seen = [False] * n
    out: List[List[int]] = []
    for start in range(n):
        if seen[start]:
            continue
        seen[start] = True
        comp = [start]
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for w in neighbors[u]:
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    queue.append(w)
        out.append(comp)
    return out


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

def parse_edge_list(
    text: Union[str, TextIO],
    indexing: Indexing = "auto",
    comment_prefixes: Sequence[str] = COMMENT_PREFIXES,
    largest_component: bool = False,
) -> Graph:
    """
    Read "u v" lines into a Graph.

    The vertices are the distinct ids that appear in some edge, re-indexed
    0..k-1 in ascending id order. The ids themselves become `labels`, so
    gaps in the numbering are fine. `indexing` only says whether id 0 is
    legal: a 1-indexed file may not use it, `auto` accepts either.
    Columns past the second (weights) are ignored.
    """
    stream = io.StringIO(text) if isinstance(text, str) else text
    prefixes = tuple(comment_prefixes)
    raw: List[Tuple[int, int, int]] = []
    for line_no, line in enumerate(stream, start=1):
        stripped = line.strip()
        if not stripped or (prefixes and stripped.startswith(prefixes)):
            continue
        tokens = stripped.split()
        if len(tokens) < 2:
            raise GraphParseError(f"expected two vertex ids, got {stripped!r}", line_no)
        try:
            u, v = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise GraphParseError(f"non-integer vertex id in {stripped!r}", line_no) from None
        if u < 0 or v < 0:
            raise GraphParseError(f"negative vertex id in {stripped!r}", line_no)
        raw.append((u, v, line_no))

    if not raw:
        raise GraphParseError("empty input: no edges found")

    if indexing == "auto":
        base = 0 if any(u == 0 or v == 0 for u, v, _ in raw) else 1
    elif indexing in (0, 1):
        base = int(indexing)
    else:
        raise ValueError(f"indexing must be 0, 1 or 'auto', got {indexing!r}")

    if base == 1:
        for u, v, line_no in raw:
            if u == 0 or v == 0:
                raise GraphParseError("vertex id 0 in a 1-indexed edge list", line_no)

    ids = sorted({u for u, _, _ in raw} | {v for _, v, _ in raw})
    index = {label: i for i, label in enumerate(ids)}
    graph = Graph.from_edges(
        len(ids),
        ((index[u], index[v]) for u, v, _ in raw),
        labels=ids,
        largest_component=largest_component,
    )
    if not graph.normalization.clean:
        CONSOLE.notice(f"⚠️ Edge list normalized: {graph.normalization.describe()}")
    return graph


def write_fixture(graph: Graph) -> str:
    """Golden-file form: "n m", then each edge "u v" (0-based, u < v), sorted."""
    lines = [f"{graph.n} {graph.m}"]
    lines.extend(f"{u} {v}" for u, v in graph.edges())
    return "\n".join(lines) + "\n"


def parse_fixture(text: str) -> Graph:
    lines = [l.strip() for l in text.splitlines() if l.strip()]
    if not lines:
        raise GraphParseError("empty fixture")
    try:
        n, m = (int(t) for t in lines[0].split())
    except ValueError:
        raise GraphParseError("fixture header must be 'n m'", 1) from None
    edges = []
    for line_no, line in enumerate(lines[1:], start=2):
        try:
            u, v = (int(t) for t in line.split())
        except ValueError:
            raise GraphParseError(f"expected 'u v', got {line!r}", line_no) from None
        edges.append((u, v))
    if len(edges) != m:
        raise GraphParseError(f"header promises {m} edges, found {len(edges)}")
    graph = Graph.from_edges(n, edges)
    if graph.m != m:
        raise GraphParseError(f"fixture lists {m - graph.m} repeated edge(s)")
    return graph


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------

def generate(kind: GeneratorKind, param: int) -> Graph:
    """path P_n, cycle C_n (n >= 3) or the k x k grid (vertex r*k + c)."""
    if param < 1:
        raise ValueError(f"{kind} parameter must be >= 1, got {param}")
    if kind == "path":
        return Graph.from_edges(param, ((i, i + 1) for i in range(param - 1)))
    if kind == "cycle":
        if param < 3:
            raise ValueError(f"a cycle needs at least 3 vertices, got {param}")
        return Graph.from_edges(param, ((i, (i + 1) % param) for i in range(param)))
    if kind == "grid":
        k = param
        edges = []
        for r in range(k):
            for c in range(k):
                v = r * k + c
                if c + 1 < k:
                    edges.append((v, v + 1))
                if r + 1 < k:
                    edges.append((v, v + k))
        return Graph.from_edges(k * k, edges)
    raise ValueError(f"Unknown generator kind: {kind!r}")


def parse_generator_spec(spec: str) -> Tuple[str, int]:
    """`gen:path:25` -> ("path", 25)."""
    parts = spec.split(":")
    if len(parts) != 3 or parts[0] != "gen":
        raise ValueError(f"generator spec must look like gen:<kind>:<n>, got {spec!r}")
    try:
        return parts[1], int(parts[2])
    except ValueError:
        raise ValueError(f"generator parameter must be an integer in {spec!r}") from None


def load_graph(source: str, largest_component: bool = False) -> Graph:
    """A generator spec, a `.graph` fixture, or an edge-list file."""
    if source.startswith("gen:"):
        kind, param = parse_generator_spec(source)
        return generate(kind, param)  # type: ignore[arg-type]
    path = Path(source)
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".graph":
        return parse_fixture(text)
    if looks_like_fixture(text):
        CONSOLE.status(f"{path.name}: 'n m' header found, reading as a fixture")
        return parse_fixture(text)
    return parse_edge_list(text, largest_component=largest_component)


def looks_like_fixture(text: str) -> bool:
    """
    True when `text` is exactly what write_fixture produces: an "n m"
    header, then m strictly ascending "u v" lines with u < v < n.
    """
    lines = [l.split() for l in text.splitlines() if l.strip()]
    if not lines or any(len(tokens) != 2 for tokens in lines):
        return False
    try:
        rows = [(int(a), int(b)) for a, b in lines]
    except ValueError:
        return False
    (n, m), edges = rows[0], rows[1:]
    if n < 1 or len(edges) != m:
        return False
    if any(not (0 <= u < v < n) for u, v in edges):
        return False
    return all(a < b for a, b in zip(edges, edges[1:]))


# ---------------------------------------------------------------------------
# Distances
# ---------------------------------------------------------------------------

class DistanceOracle:
    """
    Hop distances d(u, v).

    full       n x n matrix filled by one BFS per source
    on-demand  truncated BFS per query, full rows cached (LRU) within the cap

    The mode is picked from memory_cap; callers never need to care which one
    they got, both answer every query identically.
    """

    def __init__(self, graph: Graph, memory_cap: int = DEFAULT_MEMORY_CAP, threads: int = 1) -> None:
        self.graph = graph
        self.n = graph.n
        self.memory_cap = memory_cap
        # Hop counts stay far below 2**16 in practice; long paths need more.
        self.dtype = np.uint16 if self.n < np.iinfo(np.uint16).max else np.uint32
        self.unreachable = int(np.iinfo(self.dtype).max)
        needed = self.n * self.n * np.dtype(self.dtype).itemsize
        self.mode = "full" if needed <= memory_cap else "on-demand"
        self.matrix: Optional[np.ndarray] = None
        if self.mode == "full":
            self.matrix = np.empty((self.n, self.n), dtype=self.dtype)
            ordered_map(self._fill_row, range(self.n), threads)
            self.matrix.setflags(write=False)
            self._cached_row = None
        else:
            row_bytes = max(1, self.n * np.dtype(self.dtype).itemsize)
            slots = int(min(max(1, memory_cap // row_bytes), 4096))
            self._cached_row = functools.lru_cache(maxsize=slots)(self._bfs_row)

    # -- BFS --------------------------------------------------------------
    def _bfs(self, source: int, cutoff: Optional[int] = None,
             target: Optional[int] = None) -> List[int]:
        """Level-synchronous BFS; entries past the cutoff stay unreachable."""
        adjacency = self.graph.adjacency
        dist = [self.unreachable] * self.n
        dist[source] = 0
        if target == source:
            return dist
        frontier = [source]
        level = 0
        while frontier and (cutoff is None or level < cutoff):
            level += 1
            nxt = []
            for u in frontier:
                for w in adjacency[u]:
                    if dist[w] == self.unreachable:
                        dist[w] = level
                        nxt.append(w)
                        if w == target:
                            return dist
            frontier = nxt
        return dist

    def _bfs_row(self, source: int) -> np.ndarray:
        row = np.asarray(self._bfs(source), dtype=self.dtype)
        row.setflags(write=False)
        return row

    def _fill_row(self, source: int) -> None:
        self.matrix[source] = self._bfs(source)

    # -- queries ----------------------------------------------------------
    def distance(self, u: int, v: int) -> int:
        u = self.graph.check_vertex(u)
        v = self.graph.check_vertex(v)
        if self.matrix is not None:
            return int(self.matrix[u, v])
        return int(self._bfs(u, target=v)[v])

    def row(self, v: int) -> np.ndarray:
        """Distances from v to every vertex (read-only)."""
        v = self.graph.check_vertex(v)
        if self.matrix is not None:
            return self.matrix[v]
        return self._cached_row(v)

    def rows(self, vertices: Sequence[int]) -> np.ndarray:
        return np.vstack([self.row(v) for v in vertices]) if len(vertices) else \
            np.empty((0, self.n), dtype=self.dtype)

    def ball(self, v: int, r: int) -> np.ndarray:
        """Sorted ids of N_r[v]."""
        ids, _ = self.ball_with_distances(v, r)
        return ids

    def ball_with_distances(self, v: int, r: int) -> Tuple[np.ndarray, np.ndarray]:
        v = self.graph.check_vertex(v)
        if r < 0:
            raise ValueError(f"radius must be nonnegative, got {r}")
        if self.matrix is not None:
            row = self.matrix[v]
        else:
            row = np.asarray(self._bfs(v, cutoff=r), dtype=self.dtype)
        ids = np.flatnonzero(row <= r)
        return ids, row[ids].astype(np.int64)

    def within(self, r: int) -> np.ndarray:
        """Boolean n x n matrix of d(u, v) <= r (full mode only)."""
        if self.matrix is None:
            raise RuntimeError("within() needs a full-mode oracle")
        return self.matrix <= r

    def eccentricity(self, v: int) -> int:
        return int(self.row(v).max())

    def diameter(self) -> int:
        if self.matrix is not None:
            return int(self.matrix.max())
        return max(self.eccentricity(v) for v in range(self.n))


def all_pairs_distances(graph: Graph, memory_cap: int = DEFAULT_MEMORY_CAP,
                        threads: int = 1) -> DistanceOracle:
    return DistanceOracle(graph, memory_cap=memory_cap, threads=threads)


def closed_neighborhood(oracle: DistanceOracle, v: int, r: int) -> FrozenSet[int]:
    """N_r[v]: every vertex within r hops of v, v included."""
    return frozenset(int(u) for u in oracle.ball(v, r))

