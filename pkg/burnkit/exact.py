# =========================
# FILE: burnkit/exact.py
# =========================
"""
Exact burning numbers for small graphs.

b(G) is the smallest p whose CMCP instance (cluster k = the radius-k balls)
can be covered completely. Coverage is monotone in p (prepending any vertex to
a burning sequence keeps it burning), so a binary search over p works, and
BFF narrows the range before any exhaustive search starts: b(G) lies in
[ceil((s + 2) / 3), s] for a BFF sequence of length s.

Paths and cycles have the closed form ceil(sqrt(n)), which the tests use to
check the search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Tuple

from burnkit.cmcp import BudgetExceededError, exact_cmcp, gbp_to_cmcp, selection_to_sequence
from burnkit.config import DEFAULT_EXACT_BUDGET
from burnkit.console import CONSOLE
from burnkit.graph_core import DistanceOracle, Graph
from burnkit.heuristics import bff, bff_bounds
from burnkit.schema import BurningSequence


@dataclass
class ExactResult:
    burning_number: int
    sequence: BurningSequence
    probes: List[Tuple[int, int]] = field(default_factory=list)  # (p, max coverage)
    budget_spent: int = 0

    def describe(self, graph: Graph) -> str:
        return f"b={self.burning_number}: {self.sequence.format(graph.labels)}"


def exact_solve(graph: Graph, oracle: DistanceOracle, budget: int = DEFAULT_EXACT_BUDGET) -> ExactResult:
    """Binary search on p with exhaustive CMCP at every probe."""
    best = bff(graph, oracle, start=0)
    lo, hi = bff_bounds(len(best))
    probes: List[Tuple[int, int]] = []
    spent = 0
    while lo <= hi:
        p = (lo + hi) // 2
        try:
            selection = exact_cmcp(gbp_to_cmcp(oracle, p), max_combinations=budget - spent)
        except BudgetExceededError as e:
            raise BudgetExceededError(spent + e.spent, budget, bounds=(lo, len(best))) from None
        spent += selection.spent
        probes.append((p, selection.covered_count))
        CONSOLE.status(f"  p={p}: max coverage {selection.covered_count}/{graph.n}")
        if selection.covered_count == graph.n:
            best = selection_to_sequence(selection, p)
            hi = p - 1
        else:
            lo = p + 1
    return ExactResult(burning_number=len(best), sequence=best, probes=probes, budget_spent=spent)


def path_cycle_burning_number(n: int) -> int:
    """ceil(sqrt(n)) in integers: b(P_n) = b(C_n)."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    return math.isqrt(n - 1) + 1
