"""
Checks for clustered maximum coverage and the graph-burning reduction (burnkit/cmcp.py).

Run: pytest test_cmcp.py
"""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from burnkit.cmcp import (
    BudgetExceededError,
    CmcpInstance,
    NeighborhoodInstance,
    SelectionError,
    exact_cmcp,
    gbp_to_cmcp,
    greedy_cmcp,
    mcp_as_cmcp,
    parse_cmcp_instance,
    selection_to_sequence,
)
from burnkit.graph_core import DistanceOracle
from burnkit.heuristics import gr
from burnkit.schema import TieBreak
from conftest import connected_graphs


def _block(start):
    return frozenset(range(start, start + 5))


# Three clusters offer a private block or a block someone else also covers;
# three singleton clusters hold exactly those shared blocks.
TIGHT = CmcpInstance(
    universe_size=30,
    clusters=(
        (_block(0), _block(15)),
        (_block(5), _block(20)),
        (_block(10), _block(25)),
        (_block(15),),
        (_block(20),),
        (_block(25),),
    ),
)
TIGHT_ADVERSARY = TieBreak.adversarial([(0, 1), (1, 1), (2, 1)])


def test_tight_instance_greedy_gets_half():
    selection = greedy_cmcp(TIGHT, TIGHT_ADVERSARY)
    assert selection.covered_count == 15
    assert selection.gains == (5, 5, 5, 0, 0, 0)
    assert selection.picks[:3] == ((0, 1), (1, 1), (2, 1))


def test_tight_instance_exact_gets_all():
    selection = exact_cmcp(TIGHT)
    assert selection.covered_count == 30
    assert selection.chosen == (0, 0, 0, 0, 0, 0)


def test_tight_instance_smallest_ties_are_lucky():
    assert greedy_cmcp(TIGHT).covered_count == 30


# (universe, clusters, exact optimum)
SMALL = [
    (3, [[{0}, {1}], [{0}, {2}]],                    2),
    (4, [[{0, 1}, {2}], [{0, 1}, {3}], [{2, 3}]],    4),
    (5, [[set()], [{4}]],                            1),
    (6, [[{0, 1, 2}, {3, 4, 5}], [{0, 1, 2}]],       6),
]


@pytest.mark.parametrize("universe,clusters,optimum", SMALL)
def test_small_instances(universe, clusters, optimum):
    instance = CmcpInstance(universe, tuple(tuple(frozenset(s) for s in c) for c in clusters))
    exact = exact_cmcp(instance)
    assert exact.covered_count == optimum
    assert greedy_cmcp(instance).covered_count * 2 >= optimum


def test_exact_prefers_smallest_index_among_equals():
    instance = CmcpInstance(3, ((frozenset({0, 1}), frozenset({0, 1}), frozenset({2})),))
    assert exact_cmcp(instance).chosen == (0,)


def test_exact_budget():
    with pytest.raises(BudgetExceededError) as info:
        exact_cmcp(TIGHT, max_combinations=3)
    assert info.value.budget == 3
    assert info.value.spent > 3


@pytest.mark.parametrize("universe,clusters", [
    (3, ()),
    (3, ((),)),
    (3, ((frozenset({3}),),)),
])
def test_invalid_instances(universe, clusters):
    with pytest.raises(ValueError):
        CmcpInstance(universe, clusters)


def test_cluster_order_must_be_a_permutation():
    with pytest.raises(ValueError):
        greedy_cmcp(TIGHT, cluster_order=[0, 1, 2])


def test_mcp_special_case():
    instance = mcp_as_cmcp(4, [{0, 1}, {1, 2}, {3}], p=2)
    assert instance.p == 2
    assert exact_cmcp(instance).covered_count == 3
    assert greedy_cmcp(instance).covered_count == 3


def test_parse_instance():
    text = """
    # universe p
    6 2
    2
    0 1 2
    3 4
    1
    -   # nothing
    """
    instance = parse_cmcp_instance(text)
    assert (instance.universe_size, instance.p) == (6, 2)
    assert instance.subset(0, 1) == frozenset({3, 4})
    assert instance.subset(1, 0) == frozenset()
    assert exact_cmcp(instance).covered_count == 3


@pytest.mark.parametrize("text", ["", "6\n", "6 2\n1\n0\n", "6 1\nx\n"])
def test_parse_instance_rejects(text):
    with pytest.raises(ValueError):
        parse_cmcp_instance(text)


# ---- the reduction ----

def test_p4_reduction(p4_oracle):
    instance = gbp_to_cmcp(p4_oracle, 2)
    assert instance.subset(1, 1) == frozenset({0, 1, 2})
    assert instance.subset(0, 3) == frozenset({3})
    exact = exact_cmcp(instance)
    assert exact.covered_count == 4
    # Optimal choices are (0, 2) and (3, 1); the smaller index vector wins.
    assert exact.chosen == (0, 2)
    assert selection_to_sequence(exact, 2).vertices == (2, 0)
    greedy = greedy_cmcp(instance)
    assert greedy.chosen == (3, 1)
    assert selection_to_sequence(greedy, 2).vertices == (1, 3)


def test_p4_one_cluster_is_not_enough(p4_oracle):
    assert exact_cmcp(gbp_to_cmcp(p4_oracle, 1)).covered_count == 1


def test_selection_to_sequence_rejects(p4_oracle):
    with pytest.raises(SelectionError):
        selection_to_sequence(exact_cmcp(TIGHT), 6)
    with pytest.raises(SelectionError):
        selection_to_sequence(exact_cmcp(gbp_to_cmcp(p4_oracle, 2)), 3)
    with pytest.raises(ValueError):
        gbp_to_cmcp(p4_oracle, 0)


def test_on_demand_instance_matches_full(karate):
    full = greedy_cmcp(gbp_to_cmcp(DistanceOracle(karate), 3))
    lazy = greedy_cmcp(gbp_to_cmcp(DistanceOracle(karate, memory_cap=0), 3))
    assert full.chosen == lazy.chosen
    assert full.covered == lazy.covered


def test_on_demand_greedy_keeps_no_cluster_matrices(karate, monkeypatch):
    expected = greedy_cmcp(gbp_to_cmcp(DistanceOracle(karate), 3))
    instance = gbp_to_cmcp(DistanceOracle(karate, memory_cap=0), 3)
    monkeypatch.setattr(NeighborhoodInstance, "cluster_matrix", lambda self, k: pytest.fail("matrix built"))
    selection = greedy_cmcp(instance)
    assert selection.chosen == expected.chosen
    assert selection.covered == expected.covered
    assert instance._matrices == {}


def test_on_demand_rows_match_full(karate):
    full = gbp_to_cmcp(DistanceOracle(karate), 3)
    lazy = gbp_to_cmcp(DistanceOracle(karate, memory_cap=0), 3)
    covered = full.member_mask(2, 0)
    for k in range(3):
        assert list(lazy.new_counts(k, covered)) == list(full.new_counts(k, covered))
        for j in (0, 16, 33):
            assert list(lazy.member_mask(k, j)) == list(full.member_mask(k, j))


# ---- properties ----

@st.composite
def instances(draw):
    universe = draw(st.integers(1, 12))
    p = draw(st.integers(1, 4))
    subset = st.frozensets(st.integers(0, universe - 1), max_size=universe)
    clusters = tuple(
        tuple(draw(st.lists(subset, min_size=1, max_size=4))) for _ in range(p)
    )
    return CmcpInstance(universe, clusters)


@st.composite
def instances_with_ties(draw):
    instance = draw(instances())
    keys = [(k, j) for k in range(instance.p) for j in range(instance.cluster_size(k))]
    policy = draw(st.sampled_from(["smallest", "seeded", "adversarial"]))
    if policy == "seeded":
        tie = TieBreak.seeded(draw(st.integers(0, 2 ** 16)))
    elif policy == "adversarial":
        tie = TieBreak.adversarial(draw(st.permutations(keys)))
    else:
        tie = TieBreak.smallest()
    return instance, tie


@settings(max_examples=600, deadline=None)
@given(instances_with_ties())
def test_greedy_covers_at_least_half(case):
    instance, tie = case
    greedy = greedy_cmcp(instance, tie)
    exact = exact_cmcp(instance)
    assert greedy.covered_count * 2 >= exact.covered_count
    assert greedy.covered_count <= exact.covered_count
    assert sum(greedy.gains) == greedy.covered_count
    assert len(greedy.chosen) == instance.p


@settings(max_examples=200, deadline=None)
@given(instances())
def test_exact_is_optimal_by_enumeration(instance):
    best, first = -1, None
    for choice in itertools.product(*(range(instance.cluster_size(k)) for k in range(instance.p))):
        covered = set()
        for k, j in enumerate(choice):
            covered |= instance.subset(k, j)
        if len(covered) > best:
            best, first = len(covered), choice
    exact = exact_cmcp(instance)
    assert exact.covered_count == best
    assert exact.chosen == first


@settings(max_examples=150, deadline=None)
@given(connected_graphs(max_n=10), st.integers(1, 4))
def test_gr_is_greedy_with_largest_radius_first(graph, p):
    if p > graph.n:
        p = graph.n
    oracle = DistanceOracle(graph)
    selection = greedy_cmcp(gbp_to_cmcp(oracle, p), cluster_order=list(reversed(range(p))))
    assert gr(graph, oracle, p).covered_count == selection.covered_count


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__]))
