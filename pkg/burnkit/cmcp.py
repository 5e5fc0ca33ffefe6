# =========================
# FILE: burnkit/cmcp.py
# =========================
"""
Clustered maximum coverage: pick one subset from each of p clusters so the
union is as large as possible.

Graph burning is this problem in disguise. With a guess p, cluster k holds
the radius-k balls N_k[v] of every vertex, and a selection covering every
vertex is a burning sequence of length p (largest radius first). Those
instances never materialize their p*n balls as Python sets: subsets are
(center, radius) pairs answered by the distance oracle, turned into boolean
rows only when a solver asks for a whole cluster.

Solvers:
  greedy_cmcp  repeatedly take the (cluster, subset) pair with the most new
               elements; covers at least half the optimum
  exact_cmcp   exhaustive search over one-subset-per-cluster choices, pruned
               by a coverage bound, deterministic among equal optima
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from burnkit.config import DEFAULT_EXACT_BUDGET
from burnkit.graph_core import DistanceOracle
from burnkit.schema import BurningSequence, TieBreak


class BudgetExceededError(RuntimeError):
    def __init__(self, spent: int, budget: int, bounds: Optional[Tuple[int, int]] = None) -> None:
        self.spent = spent
        self.budget = budget
        self.bounds = bounds
        msg = f"exact search exceeded its budget of {budget:,} combinations"
        if bounds is not None:
            msg += f" (burning number known to lie in [{bounds[0]}, {bounds[1]}])"
        super().__init__(msg)


class SelectionError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Instances
# ---------------------------------------------------------------------------

class CoverageInstance:
    """Common surface of explicit and graph-derived instances."""

    universe_size: int

    @property
    def p(self) -> int:
        raise NotImplementedError

    def cluster_size(self, k: int) -> int:
        raise NotImplementedError

    def cluster_matrix(self, k: int) -> np.ndarray:
        """Boolean (cluster_size(k) x universe_size) membership matrix."""
        raise NotImplementedError

    def new_counts(self, k: int, covered: np.ndarray) -> np.ndarray:
        """How many still-uncovered elements each subset of cluster k holds."""
        return (self.cluster_matrix(k) & ~covered).sum(axis=1)

    def member_mask(self, k: int, j: int) -> np.ndarray:
        return self.cluster_matrix(k)[j]

    def subset(self, k: int, j: int) -> FrozenSet[int]:
        return frozenset(np.flatnonzero(self.cluster_matrix(k)[j]).tolist())


@dataclass(frozen=True, eq=False)
class CmcpInstance(CoverageInstance):
    """Free-standing instance with materialized subsets."""

    universe_size: int
    clusters: Tuple[Tuple[FrozenSet[int], ...], ...]
    _matrices: Dict[int, np.ndarray] = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self) -> None:
        clusters = tuple(tuple(frozenset(int(e) for e in s) for s in c) for c in self.clusters)
        object.__setattr__(self, "clusters", clusters)
        if not clusters:
            raise ValueError("a CMCP instance needs at least one cluster")
        for k, cluster in enumerate(clusters):
            if not cluster:
                raise ValueError(f"cluster {k} is empty")
            for subset in cluster:
                for e in subset:
                    if not (0 <= e < self.universe_size):
                        raise ValueError(
                            f"element {e} in cluster {k} outside universe of size {self.universe_size}"
                        )

    @property
    def p(self) -> int:
        return len(self.clusters)

    def cluster_size(self, k: int) -> int:
        return len(self.clusters[k])

    def cluster_matrix(self, k: int) -> np.ndarray:
        mat = self._matrices.get(k)
        if mat is None:
            mat = np.zeros((len(self.clusters[k]), self.universe_size), dtype=bool)
            for j, subset in enumerate(self.clusters[k]):
                mat[j, list(subset)] = True
            mat.setflags(write=False)
            self._matrices[k] = mat
        return mat

    def subset(self, k: int, j: int) -> FrozenSet[int]:
        return self.clusters[k][j]


@dataclass(frozen=True, eq=False)
class NeighborhoodInstance(CoverageInstance):
    """Cluster k = {N_k[v] : v in V}; subset j of any cluster is centered at vertex j."""

    oracle: DistanceOracle
    clusters_count: int
    _matrices: Dict[int, np.ndarray] = field(default_factory=dict, init=False, repr=False)

    @property
    def universe_size(self) -> int:  # type: ignore[override]
        return self.oracle.n

    @property
    def p(self) -> int:
        return self.clusters_count

    def cluster_size(self, k: int) -> int:
        self._check_cluster(k)
        return self.oracle.n

    def radius(self, k: int) -> int:
        self._check_cluster(k)
        return k

    def center(self, k: int, j: int) -> int:
        self._check_cluster(k)
        return self.oracle.graph.check_vertex(j)

    def cluster_matrix(self, k: int) -> np.ndarray:
        """
        Cached in full mode. An on-demand oracle builds the n x n matrix
        afresh on every call and keeps nothing; only the exact search asks.
        """
        self._check_cluster(k)
        if self.oracle.matrix is None:
            return np.vstack([self.oracle.row(v) <= k for v in range(self.oracle.n)])
        mat = self._matrices.get(k)
        if mat is None:
            mat = self.oracle.within(k)
            mat.setflags(write=False)
            self._matrices[k] = mat
        return mat

    def new_counts(self, k: int, covered: np.ndarray) -> np.ndarray:
        if self.oracle.matrix is not None:
            return super().new_counts(k, covered)
        self._check_cluster(k)
        uncovered = ~covered
        n = self.oracle.n
        return np.fromiter(
            (int(uncovered[self.oracle.ball(v, k)].sum()) for v in range(n)), dtype=np.int64, count=n,
        )

    def member_mask(self, k: int, j: int) -> np.ndarray:
        if self.oracle.matrix is not None:
            return super().member_mask(k, j)
        mask = np.zeros(self.oracle.n, dtype=bool)
        mask[self.oracle.ball(self.center(k, j), k)] = True
        return mask

    def subset(self, k: int, j: int) -> FrozenSet[int]:
        return frozenset(int(u) for u in self.oracle.ball(self.center(k, j), k))

    def _check_cluster(self, k: int) -> None:
        if not (0 <= k < self.clusters_count):
            raise IndexError(f"cluster {k} out of range (p={self.clusters_count})")


@dataclass(frozen=True)
class Selection:
    """chosen[k] indexes into cluster k."""

    chosen: Tuple[int, ...]
    covered: FrozenSet[int]
    gains: Tuple[int, ...] = ()
    picks: Tuple[Tuple[int, int], ...] = ()
    spent: int = 0
    instance: Optional[CoverageInstance] = field(default=None, repr=False, compare=False)

    @property
    def covered_count(self) -> int:
        return len(self.covered)


def _selection(instance: CoverageInstance, chosen: Sequence[int], **extra) -> Selection:
    covered = np.zeros(instance.universe_size, dtype=bool)
    for k, j in enumerate(chosen):
        covered |= instance.member_mask(k, j)
    return Selection(
        chosen=tuple(int(j) for j in chosen),
        covered=frozenset(np.flatnonzero(covered).tolist()),
        instance=instance,
        **extra,
    )


# ---------------------------------------------------------------------------
# Greedy
# ---------------------------------------------------------------------------

def greedy_cmcp(
    instance: CoverageInstance,
    tie: TieBreak = TieBreak(),
    cluster_order: Optional[Sequence[int]] = None,
) -> Selection:
    """
    One subset per cluster, each time the pair with the most uncovered elements.

    Candidates are listed cluster by cluster (in `cluster_order`, ascending by
    default), subsets ascending within a cluster; the tie policy sees them in
    that order.
    """
    p = instance.p
    order = list(range(p)) if cluster_order is None else [int(k) for k in cluster_order]
    if sorted(order) != list(range(p)):
        raise ValueError(f"cluster_order must be a permutation of 0..{p - 1}")

    picker = tie.picker()
    covered = np.zeros(instance.universe_size, dtype=bool)
    chosen: List[Optional[int]] = [None] * p
    gains: List[int] = []
    picks: List[Tuple[int, int]] = []
    remaining = list(order)
    while remaining:
        best = -1
        candidates: List[Tuple[int, int]] = []
        for k in remaining:
            new = instance.new_counts(k, covered)
            top = int(new.max())
            tied = [(k, int(j)) for j in np.flatnonzero(new == top)]
            if top > best:
                best, candidates = top, tied
            elif top == best:
                candidates.extend(tied)
        k, j = picker.pick(candidates)
        chosen[k] = j
        covered |= instance.member_mask(k, j)
        gains.append(best)
        picks.append((k, j))
        remaining.remove(k)

    return Selection(
        chosen=tuple(int(j) for j in chosen),
        covered=frozenset(np.flatnonzero(covered).tolist()),
        gains=tuple(gains),
        picks=tuple(picks),
        instance=instance,
    )


# ---------------------------------------------------------------------------
# Exact
# ---------------------------------------------------------------------------

class _ExactSearch:
    """
    Two depth-first passes.

    The first finds the optimum value, clusters with the largest subsets first.
    A node's bound is what it has covered plus, for every cluster still to
    choose, that cluster's best gain against the node's covered set; a branch
    survives only if its bound beats the incumbent.

    The second walks clusters in their own order, subsets ascending, and stops
    at the first choice reaching that value: the lexicographically smallest
    index vector among the optima. Identical subsets inside a cluster are
    explored once, under their smallest index.
    """

    def __init__(self, instance: CoverageInstance, budget: int) -> None:
        self.instance = instance
        self.budget = budget
        self.spent = 0
        p = instance.p
        self.reps: List[np.ndarray] = []
        self.mats: List[np.ndarray] = []
        for k in range(p):
            mat = instance.cluster_matrix(k)
            _, first = np.unique(mat, axis=0, return_index=True)
            keep = np.sort(first)
            self.reps.append(keep)
            self.mats.append(mat[keep])
        sizes = [int(m.sum(axis=1).max()) for m in self.mats]
        self.order = sorted(range(p), key=lambda k: -sizes[k])
        self.ceiling = min(instance.universe_size, sum(sizes))
        self.best_count = -1
        self._choice = [0] * p

    def run(self) -> Tuple[List[int], int]:
        empty = np.zeros(self.instance.universe_size, dtype=bool)
        self._visit(0, empty, 0)
        self._reach(0, empty, 0)
        return list(self._choice), self.best_count

    def _charge(self, amount: int) -> None:
        self.spent += amount
        if self.spent > self.budget:
            raise BudgetExceededError(self.spent, self.budget)

    def _visit(self, depth: int, acc: np.ndarray, count: int) -> bool:
        """Returns True once nothing better than the incumbent can exist."""
        k = self.order[depth]
        mat = self.mats[k]
        gains = (mat & ~acc).sum(axis=1)
        self._charge(len(gains))

        if depth == len(self.order) - 1:
            self.best_count = max(self.best_count, count + int(gains.max()))
            return self.best_count >= self.ceiling

        rest = 0
        for k2 in self.order[depth + 1:]:
            rest += int((self.mats[k2] & ~acc).sum(axis=1).max())
        for j in range(len(gains)):
            if count + int(gains[j]) + rest <= self.best_count:
                continue
            if self._visit(depth + 1, acc | mat[j], count + int(gains[j])):
                return True
        return False

    def _reach(self, k: int, acc: np.ndarray, count: int) -> bool:
        """First choice, in natural order, whose coverage reaches best_count."""
        mat = self.mats[k]
        gains = (mat & ~acc).sum(axis=1)
        self._charge(len(gains))
        rest = 0
        for k2 in range(k + 1, len(self.mats)):
            rest += int((self.mats[k2] & ~acc).sum(axis=1).max())
        for j in range(len(gains)):
            total = count + int(gains[j])
            if total + rest < self.best_count:
                continue
            self._choice[k] = int(self.reps[k][j])
            if k == len(self.mats) - 1 or self._reach(k + 1, acc | mat[j], total):
                return True
        return False


def exact_cmcp(instance: CoverageInstance, max_combinations: int = DEFAULT_EXACT_BUDGET) -> Selection:
    """Maximum coverage, exactly. Raises BudgetExceededError past the budget."""
    search = _ExactSearch(instance, max_combinations)
    choice, _ = search.run()
    return _selection(instance, choice, spent=search.spent)


# ---------------------------------------------------------------------------
# Graph burning <-> CMCP
# ---------------------------------------------------------------------------

def gbp_to_cmcp(oracle: DistanceOracle, p: int) -> NeighborhoodInstance:
    if p < 1:
        raise ValueError(f"p must be positive, got {p}")
    return NeighborhoodInstance(oracle=oracle, clusters_count=p)


def selection_to_sequence(selection: Selection, p: int) -> BurningSequence:
    """The center picked from cluster p-1 burns first, the one from cluster 0 last."""
    instance = selection.instance
    if not isinstance(instance, NeighborhoodInstance):
        raise SelectionError("selection does not come from a graph-burning instance")
    if instance.p != p or len(selection.chosen) != p:
        raise SelectionError(f"selection has {len(selection.chosen)} clusters, expected {p}")
    return BurningSequence(tuple(instance.center(k, selection.chosen[k]) for k in reversed(range(p))))


def mcp_as_cmcp(universe_size: int, subsets: Sequence[Iterable[int]], p: int) -> CmcpInstance:
    """Plain maximum coverage (at most p subsets) as p identical clusters."""
    cluster = tuple(frozenset(s) for s in subsets)
    return CmcpInstance(universe_size=universe_size, clusters=tuple(cluster for _ in range(p)))


def parse_cmcp_instance(text: Union[str, io.TextIOBase]) -> CmcpInstance:
    """
    Line 1 "universe_size p"; then per cluster a line "s" followed by s lines
    of space-separated element ids ("-" for an empty subset). Blank lines and
    '#' comments are skipped.
    """
    raw = text if isinstance(text, str) else text.read()
    lines = [l.split("#", 1)[0].strip() for l in raw.splitlines()]
    lines = [l for l in lines if l]
    it = iter(lines)

    def take() -> str:
        try:
            return next(it)
        except StopIteration:
            raise ValueError("unexpected end of CMCP instance") from None

    header = take().split()
    if len(header) != 2:
        raise ValueError("CMCP header must be 'universe_size p'")
    universe_size, p = int(header[0]), int(header[1])
    clusters = []
    for _ in range(p):
        count = int(take())
        subsets = []
        for _ in range(count):
            line = take()
            subsets.append(frozenset() if line == "-" else frozenset(int(t) for t in line.split()))
        clusters.append(tuple(subsets))
    return CmcpInstance(universe_size=universe_size, clusters=tuple(clusters))
