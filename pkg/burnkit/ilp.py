# =========================
# FILE: burnkit/ilp.py
# =========================
"""
Integer programs for graph burning, written as LP files for an external
MILP solver, and the way back from a solver's answer to a sequence.

  PROP  fire propagation step by step: s_i_j lights v_i at step j, b_i_j says
        v_i burns by step j, x_j is 1 while step j leaves something unburned.
        Minimizes sum x_j + 1.
  CMCP  one fixed guess p as clustered maximum coverage: x_i_j picks N_{i-1}[v_j]
        from cluster i, b_j says v_j is covered. Maximizes sum b_j.
  COV   the same clusters for radii 0..U-1, each optional, every vertex
        covered, clusters used as a prefix. Minimizes the number of picks.

Vertices and steps are 1-based in variable names (v_1 is vertex 0).

The step-0 terms of PROP (nothing burns before step 1) and the row-0 term of
COV (a virtual cluster that is always used) are constants, so they are folded
into the right-hand sides instead of becoming variables. The counts returned
by IlpModel.counts() are therefore exactly 2Un+U / 2Un+U, pn+n / p+n and
Un+n / 2U+n+1.

No solver is embedded. Anything that reads CPLEX LP files (HiGHS, CBC, SCIP,
Gurobi, CPLEX) can solve what write_lp produces; parse_solution_text reads the
"name value" lines those solvers write back.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Literal, Mapping, Optional, Sequence, Tuple

from burnkit.burning import first_violation
from burnkit.graph_core import DistanceOracle, Graph
from burnkit.schema import BurningSequence, ModelKind

Relation = Literal["<=", "=", ">="]
Term = Tuple[int, str]

BINARY_TOLERANCE = 1e-6
LINE_WIDTH = 78


class SolutionDecodeError(ValueError):
    pass


@dataclass(frozen=True)
class LinearConstraint:
    name: str
    terms: Tuple[Term, ...]
    relation: Relation
    rhs: int


@dataclass
class IlpModel:
    kind: ModelKind
    sense: Literal["min", "max"]
    objective: Tuple[Term, ...]
    variables: Tuple[str, ...]
    constraints: List[LinearConstraint]
    n: int
    param: int  # U for PROP/COV, p for CMCP
    objective_constant: int = 0
    graph: Optional[Graph] = field(default=None, repr=False, compare=False)

    def counts(self) -> Tuple[int, int]:
        """(binary variables, constraints)."""
        return len(self.variables), len(self.constraints)

    def objective_value(self, assignment: Mapping[str, float]) -> float:
        return sum(c * assignment.get(name, 0.0) for c, name in self.objective) + self.objective_constant


def _s(i: int, j: int) -> str:
    return f"s_{i}_{j}"


def _b2(i: int, j: int) -> str:
    return f"b_{i}_{j}"


def _x2(i: int, j: int) -> str:
    return f"x_{i}_{j}"


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------

def emit_prop(graph: Graph, U: int) -> IlpModel:
    if U < 1:
        raise ValueError(f"U must be positive, got {U}")
    n = graph.n
    steps = range(1, U + 1)
    verts = range(1, n + 1)
    variables = (
        [_s(i, j) for j in steps for i in verts]
        + [_b2(i, j) for j in steps for i in verts]
        + [f"x_{j}" for j in steps]
    )
    constraints: List[LinearConstraint] = []
    for j in steps:
        for i in verts:
            constraints.append(LinearConstraint(
                f"unburned_{i}_{j}", ((1, f"x_{j}"), (1, _b2(i, j))), ">=", 1,
            ))
    for j in steps:
        for i in verts:
            terms: List[Term] = [(1, _b2(i, j)), (-1, _s(i, j))]
            if j > 1:
                # N[v_i] includes v_i: burned vertices stay burned.
                closed = (i - 1,) + graph.neighbors(i - 1)
                terms += [(-1, _b2(k + 1, j - 1)) for k in sorted(closed)]
            constraints.append(LinearConstraint(f"spread_{i}_{j}", tuple(terms), "<=", 0))
    for j in steps:
        constraints.append(LinearConstraint(
            f"source_{j}", tuple((1, _s(i, j)) for i in verts), "=", 1,
        ))
    return IlpModel(
        kind="PROP",
        sense="min",
        objective=tuple((1, f"x_{j}") for j in steps),
        objective_constant=1,
        variables=tuple(variables),
        constraints=constraints,
        n=n,
        param=U,
        graph=graph,
    )


def _coverage_rows(oracle: DistanceOracle, clusters: int) -> List[LinearConstraint]:
    """b_j <= sum over clusters i of the picks whose ball of radius i-1 holds v_j."""
    rows = []
    for j in range(1, oracle.n + 1):
        terms: List[Term] = [(1, f"b_{j}")]
        for i in range(1, clusters + 1):
            terms += [(-1, _x2(i, int(k) + 1)) for k in oracle.ball(j - 1, i - 1)]
        rows.append(LinearConstraint(f"cover_{j}", tuple(terms), "<=", 0))
    return rows


def _cluster_variables(n: int, clusters: int) -> List[str]:
    return [_x2(i, j) for i in range(1, clusters + 1) for j in range(1, n + 1)] + \
        [f"b_{j}" for j in range(1, n + 1)]


def emit_cmcp(oracle: DistanceOracle, p: int) -> IlpModel:
    if p < 1:
        raise ValueError(f"p must be positive, got {p}")
    n = oracle.n
    constraints = [
        LinearConstraint(f"pick_{i}", tuple((1, _x2(i, j)) for j in range(1, n + 1)), "=", 1)
        for i in range(1, p + 1)
    ]
    constraints += _coverage_rows(oracle, p)
    return IlpModel(
        kind="CMCP",
        sense="max",
        objective=tuple((1, f"b_{j}") for j in range(1, n + 1)),
        variables=tuple(_cluster_variables(n, p)),
        constraints=constraints,
        n=n,
        param=p,
        graph=oracle.graph,
    )


def emit_cov(oracle: DistanceOracle, U: int) -> IlpModel:
    if U < 1:
        raise ValueError(f"U must be positive, got {U}")
    n = oracle.n
    verts = range(1, n + 1)
    constraints: List[LinearConstraint] = []
    for i in range(1, U + 1):
        terms: List[Term] = [(1, _x2(i, j)) for j in verts]
        rhs = 1  # the virtual row 0 always holds exactly one pick
        if i > 1:
            terms += [(-1, _x2(i - 1, j)) for j in verts]
            rhs = 0
        constraints.append(LinearConstraint(f"prefix_{i}", tuple(terms), "<=", rhs))
    for i in range(1, U + 1):
        constraints.append(LinearConstraint(
            f"atmost_{i}", tuple((1, _x2(i, j)) for j in verts), "<=", 1,
        ))
    constraints += _coverage_rows(oracle, U)
    constraints.append(LinearConstraint("all", tuple((1, f"b_{j}") for j in verts), "=", n))
    return IlpModel(
        kind="COV",
        sense="min",
        objective=tuple((1, _x2(i, j)) for i in range(1, U + 1) for j in verts),
        variables=tuple(_cluster_variables(n, U)),
        constraints=constraints,
        n=n,
        param=U,
        graph=oracle.graph,
    )


# ---------------------------------------------------------------------------
# LP text
# ---------------------------------------------------------------------------

def _expression(terms: Sequence[Term]) -> List[str]:
    tokens = []
    for idx, (coef, name) in enumerate(terms):
        sign = "-" if coef < 0 else "+"
        mag = abs(coef)
        body = name if mag == 1 else f"{mag} {name}"
        if idx == 0:
            tokens.append(body if sign == "+" else f"- {body}")
        else:
            tokens.append(f"{sign} {body}")
    return tokens


def _wrap(head: str, tokens: Sequence[str]) -> List[str]:
    """Fill lines up to LINE_WIDTH; continuation lines are indented."""
    lines: List[str] = []
    line = head
    for token in tokens:
        if len(line) + 1 + len(token) > LINE_WIDTH and line.strip():
            lines.append(line)
            line = "   " + token
        else:
            line = f"{line} {token}"
    lines.append(line)
    return lines


def write_lp(model: IlpModel) -> str:
    """CPLEX LP text; the same model always gives the same bytes."""
    param = "U" if model.kind in ("PROP", "COV") else "p"
    out = [f"\\ burnkit {model.kind} model: n={model.n} {param}={model.param}"]
    if model.objective_constant:
        out.append(f"\\ objective constant: +{model.objective_constant}")
    out.append("Maximize" if model.sense == "max" else "Minimize")
    out += _wrap(" obj:", _expression(model.objective))
    out.append("Subject To")
    for c in model.constraints:
        out += _wrap(f" {c.name}:", _expression(c.terms) + [f"{c.relation} {c.rhs}"])
    out.append("Binaries")
    out += _wrap("", model.variables)
    out.append("End")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Solutions
# ---------------------------------------------------------------------------

_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_.\[\]]*$")


def parse_solution_text(text: str) -> Dict[str, float]:
    """
    Collect "name value" pairs. Anything else (headers, status words, objective
    lines, comments) is skipped; a dual-values block ends the primal section.
    """
    values: Dict[str, float] = {}
    for raw in text.splitlines():
        if "dual solution" in raw.lower():
            break
        line = raw.split("#", 1)[0].strip()
        parts = line.split()
        if len(parts) < 2 or not _NAME.match(parts[0]):
            continue
        try:
            value = float(parts[1])
        except ValueError:
            continue
        values.setdefault(parts[0], value)
    return values


def _binary(assignment: Mapping[str, float], name: str) -> int:
    if name not in assignment:
        raise SolutionDecodeError(f"solution has no value for {name}")
    value = float(assignment[name])
    rounded = round(value)
    if abs(value - rounded) > BINARY_TOLERANCE or rounded not in (0, 1):
        raise SolutionDecodeError(f"{name} = {value} is not binary")
    return int(rounded)


def _row_picks(assignment: Mapping[str, float], name, n: int) -> List[int]:
    return [j - 1 for j in range(1, n + 1) if _binary(assignment, name(j))]


def _decode_prop(model: IlpModel, assignment: Mapping[str, float]) -> List[int]:
    seq = []
    for j in range(1, model.param + 1):
        picks = _row_picks(assignment, lambda i: _s(i, j), model.n)
        if len(picks) != 1:
            raise SolutionDecodeError(f"step {j} lights {len(picks)} vertices, expected 1")
        seq.append(picks[0])
        if all(_binary(assignment, _b2(i, j)) for i in range(1, model.n + 1)):
            break
    return seq


def _decode_clusters(model: IlpModel, assignment: Mapping[str, float]) -> List[int]:
    rows: List[Optional[int]] = []
    for i in range(1, model.param + 1):
        picks = _row_picks(assignment, lambda j: _x2(i, j), model.n)
        if len(picks) > 1 or (model.kind == "CMCP" and not picks):
            raise SolutionDecodeError(f"cluster {i} has {len(picks)} picks, expected 1")
        rows.append(picks[0] if picks else None)
    # The largest radius burns first.
    seq = [v for v in reversed(rows) if v is not None]
    if not seq:
        raise SolutionDecodeError("solution selects no vertex")
    return seq


def decode_solution(
    model: IlpModel,
    assignment: Mapping[str, float],
    oracle: Optional[DistanceOracle] = None,
) -> BurningSequence:
    """Read the burning sequence out of a solver assignment and check it burns the graph."""
    if model.kind == "PROP":
        vertices = _decode_prop(model, assignment)
    else:
        vertices = _decode_clusters(model, assignment)
    seq = BurningSequence(tuple(vertices))
    if oracle is None:
        if model.graph is None:
            raise SolutionDecodeError("model carries no graph to validate against")
        oracle = DistanceOracle(model.graph)
    miss = first_violation(oracle, seq)
    if miss is not None:
        raise SolutionDecodeError(f"decoded sequence {seq.format()} does not burn the graph: "
                                  f"{miss.describe(oracle.graph)}")
    return seq
