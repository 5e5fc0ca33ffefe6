"""
Checks for BFF, Gr, GrP and the binary-search driver (burnkit/heuristics.py).

Run: pytest test_heuristics.py

Expected sizes for karate and the grids are the ones these procedures are
known to reach; the P25 and C25 failures are traced by hand from the tie order.
"""

import time

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from burnkit import heuristics
from burnkit.burning import is_burning_sequence
from burnkit.exact import exact_solve
from burnkit.graph_core import DistanceOracle, Graph, generate, load_graph
from burnkit.heuristics import (
    TimeLimitError,
    bff,
    bff_bounds,
    binary_search_solve,
    csv_header,
    gr,
    grp,
    half_coverage_test,
)
from burnkit.schema import TieBreak
from conftest import DATASETS, FIXTURES, connected_graphs

# ---- BFF ----

# (generator, param) for the exhaustive small set
SMALL_FAMILIES = (
    [("path", n) for n in range(1, 17)]
    + [("cycle", n) for n in range(3, 17)]
    + [("grid", k) for k in range(1, 5)]
)


def test_bff_karate(karate, karate_oracle):
    seq = bff(karate, karate_oracle, start=0)
    assert seq.vertices == (0, 14, 9, seq[3])
    assert len(seq) == 4
    assert is_burning_sequence(karate_oracle, seq)
    assert bff_bounds(len(seq)) == (2, 3)


def test_bff_single_vertex():
    graph = generate("path", 1)
    assert bff(graph, DistanceOracle(graph)).vertices == (0,)


@pytest.mark.parametrize("kind,param", SMALL_FAMILIES)
def test_bff_guarantee_on_small_families(kind, param):
    graph = generate(kind, param)
    oracle = DistanceOracle(graph)
    seq = bff(graph, oracle)
    assert is_burning_sequence(oracle, seq)
    assert seq.is_distinct()
    assert len(seq) <= 3 * exact_solve(graph, oracle).burning_number - 2


@settings(max_examples=200, deadline=None)
@given(connected_graphs(max_n=12))
def test_bff_guarantee_on_random_graphs(graph):
    oracle = DistanceOracle(graph)
    seq = bff(graph, oracle)
    assert is_burning_sequence(oracle, seq)
    assert len(seq) <= 3 * exact_solve(graph, oracle).burning_number - 2


# ---- Gr ----

def test_gr_karate(karate, karate_oracle):
    report = gr(karate, karate_oracle, 3)
    assert report.burned_all
    assert len(report.sequence) == 3
    assert is_burning_sequence(karate_oracle, report.sequence)
    assert gr(karate, karate_oracle, 2).covered_count == 19


def _complete(n):
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


@pytest.mark.parametrize("n", [2, 3, 6])
def test_gr_complete_graph(n):
    graph = _complete(n)
    report = gr(graph, DistanceOracle(graph), 2)
    assert report.burned_all
    assert report.sequence.is_distinct()


# (graph family, p, tie, burned_all, covered)
GR_TIES = [
    (("path", 25),  5, TieBreak.smallest(),                True,  25),
    (("path", 25),  5, TieBreak.adversarial([11, 20, 3]),  False, 23),
    (("cycle", 25), 5, TieBreak.smallest(),                True,  25),
    (("cycle", 25), 5, TieBreak.adversarial([0, 10, 17]),  False, 24),
]


@pytest.mark.parametrize("family,p,tie,burned_all,covered", GR_TIES)
def test_gr_depends_on_ties(family, p, tie, burned_all, covered):
    graph = generate(*family)
    for oracle in (DistanceOracle(graph), DistanceOracle(graph, memory_cap=0)):
        report = gr(graph, oracle, p, tie=tie)
        assert report.burned_all is burned_all
        assert report.covered_count == covered
        assert is_burning_sequence(oracle, report.sequence) is burned_all


def test_gr_path_adversarial_sequence():
    graph = generate("path", 25)
    report = gr(graph, DistanceOracle(graph), 5, tie=TieBreak.adversarial([11, 20, 3]))
    assert report.sequence.vertices == (11, 20, 3, 0, 6)


def test_gr_first_vertex(karate, karate_oracle):
    report = gr(karate, karate_oracle, 3, first=0)
    assert report.sequence[0] == 0
    assert report.first_vertex == 0
    assert report.burned_all


@pytest.mark.parametrize("p", [0, -1, 35])
def test_gr_rejects_p(karate, karate_oracle, p):
    with pytest.raises(ValueError):
        gr(karate, karate_oracle, p)


def test_gr_deadline(karate, karate_oracle):
    with pytest.raises(TimeLimitError):
        gr(karate, karate_oracle, 3, deadline=time.perf_counter() - 1)


def test_gr_seeded_is_reproducible(karate, karate_oracle):
    tie = TieBreak.seeded(7)
    a = gr(karate, karate_oracle, 3, tie=tie)
    b = gr(karate, karate_oracle, 3, tie=tie)
    assert a.sequence == b.sequence


@settings(max_examples=150, deadline=None)
@given(connected_graphs(max_n=10), st.integers(1, 5), st.integers(0, 1000))
def test_gr_sequences_are_distinct_and_honest(graph, p, seed):
    p = min(p, graph.n)
    oracle = DistanceOracle(graph)
    report = gr(graph, oracle, p, tie=TieBreak.seeded(seed))
    assert len(report.sequence) == p
    assert report.sequence.is_distinct()
    assert report.burned_all == is_burning_sequence(oracle, report.sequence)


# ---- GrP ----

# (graph family, p, burned_all)
GRP_CASES = [
    (("grid", 10), 6, True),
    (("path", 4),  1, False),
    (("path", 25), 5, True),
]


@pytest.mark.parametrize("family,p,burned_all", GRP_CASES)
def test_grp(family, p, burned_all):
    graph = generate(*family)
    oracle = DistanceOracle(graph)
    report = grp(graph, oracle, p)
    assert report.burned_all is burned_all
    assert report.strategy == "GrP"
    if not burned_all:
        assert report.runs == graph.n
    else:
        assert is_burning_sequence(oracle, report.sequence)


def test_grp_karate_stops_at_first_success(karate, karate_oracle):
    report = grp(karate, karate_oracle, 3)
    assert report.burned_all
    assert report.first_vertex == 0
    assert report.runs == 1


def test_grp_failure_keeps_smallest_best_first_vertex():
    graph = generate("path", 4)
    report = grp(graph, DistanceOracle(graph), 1)
    assert report.covered_count == 1
    assert report.first_vertex == 0


@pytest.mark.parametrize("family,p", [(("path", 25), 4), (("grid", 6), 4), (("cycle", 17), 4)])
def test_grp_threads_do_not_change_the_answer(family, p):
    graph = generate(*family)
    oracle = DistanceOracle(graph)
    one = grp(graph, oracle, p, threads=1)
    many = grp(graph, oracle, p, threads=4)
    assert (one.sequence, one.runs, one.covered_count) == (many.sequence, many.runs, many.covered_count)


@settings(max_examples=100, deadline=None)
@given(connected_graphs(max_n=10), st.integers(1, 4))
def test_grp_never_worse_than_gr(graph, p):
    p = min(p, graph.n)
    oracle = DistanceOracle(graph)
    assert grp(graph, oracle, p).covered_count >= gr(graph, oracle, p).covered_count


# ---- binary search ----

def test_binary_search_karate(karate, karate_oracle):
    report = binary_search_solve(karate, karate_oracle, "Gr")
    assert len(report.sequence) == 3
    assert report.strategy == "Gr"
    assert (report.lower, report.upper) == (2, 3)
    assert len(report.bff_sequence) == 4
    assert [(g.p, g.burned_all, g.covered_count) for g in report.per_guess_log] == [
        (2, False, 19), (3, True, 34),
    ]
    assert len(binary_search_solve(karate, karate_oracle, "GrP").sequence) == 3


def test_binary_search_single_vertex():
    graph = generate("path", 1)
    report = binary_search_solve(graph, DistanceOracle(graph))
    assert report.sequence.vertices == (0,)
    assert report.strategy == "BFF"
    assert report.per_guess_log == []


# (grid side, strategy, expected length)
GRIDS = [
    (10, "GrP", 6),
    (10, "Gr",  7),
]


@pytest.mark.parametrize("k,strategy,length", GRIDS)
def test_binary_search_grid(k, strategy, length):
    graph = generate("grid", k)
    oracle = DistanceOracle(graph)
    report = binary_search_solve(graph, oracle, strategy)
    assert is_burning_sequence(oracle, report.sequence)
    assert len(report.sequence) <= length


@pytest.mark.slow
def test_binary_search_grid_20():
    graph = generate("grid", 20)
    oracle = DistanceOracle(graph)
    assert len(binary_search_solve(graph, oracle, "GrP", threads=4).sequence) <= 10
    assert len(binary_search_solve(graph, oracle, "Gr").sequence) <= 11


# Real-world graphs up to 1133 vertices: (name, n, b(G), BFF size, Gr size, GrP size).
# Only karate ships with the repo; the rest are read from datasets/<name>.txt.
SMALL_BENCHMARKS = [
    ("karate",           34,   3,  4,  3,  3),
    ("chesapeake",       39,   3,  3,  3,  3),
    ("dolphins",         62,   4,  6,  4,  4),
    ("rt-retweet",       96,   5,  6,  5,  5),
    ("polbooks",         105,  4,  5,  4,  4),
    ("adjnoun",          112,  4,  5,  4,  4),
    ("ia-infect-hyper",  113,  3,  3,  3,  3),
    ("C125-9",           125,  3,  3,  3,  3),
    ("ia-enron-only",    143,  4,  5,  4,  4),
    ("c-fat200-1",       200,  7,  7,  7,  7),
    ("c-fat200-2",       200,  5,  5,  5,  5),
    ("c-fat200-5",       200,  3,  3,  3,  3),
    ("sphere",           258,  7,  9,  7,  7),
    ("DD244",            291,  7,  11, 7,  7),
    ("ca-netscience",    379,  6,  8,  7,  6),
    ("infect-dublin",    410,  5,  6,  5,  5),
    ("c-fat500-1",       500,  9,  11, 9,  9),
    ("c-fat500-2",       500,  7,  8,  7,  7),
    ("c-fat500-5",       500,  5,  5,  5,  5),
    ("bio-diseasome",    516,  7,  13, 7,  7),
    ("web-polblogs",     643,  5,  8,  6,  5),
    ("DD687",            725,  7,  10, 8,  8),
    ("rt-twitter-copen", 761,  7,  9,  7,  7),
    ("DD68",             775,  9,  14, 10, 9),
    ("ia-crime-moreno",  829,  7,  8,  7,  7),
    ("DD199",            841,  12, 16, 13, 12),
    ("soc-wiki-Vote",    889,  6,  8,  6,  6),
    ("DD349",            897,  12, 18, 13, 12),
    ("DD497",            903,  10, 16, 12, 11),
    ("socfb-Reed98",     962,  4,  5,  4,  4),
    ("lattice3D",        1000, 10, 12, 10, 10),
    ("bal-bin-tree-9",   1023, 10, 10, 10, 10),
    ("delaunay-n10",     1024, 9,  11, 10, 9),
    ("stufe",            1036, 12, 15, 12, 12),
    ("lattice2D",        1089, 13, 19, 14, 13),
    ("bal-ter-tree-6",   1093, 7,  7,  7,  7),
    ("email-univ",       1133, 5,  6,  5,  5),
]


def _benchmark_graph(name):
    path = FIXTURES / f"{name}.txt"
    if not path.is_file():
        path = DATASETS / f"{name}.txt"
    if not path.is_file():
        return None
    return load_graph(str(path), largest_component=True)


@pytest.mark.slow
def test_grp_reproduces_the_small_benchmark_sizes():
    present = [(row, _benchmark_graph(row[0])) for row in SMALL_BENCHMARKS]
    present = [(row, graph) for row, graph in present if graph is not None]
    matches = 0
    for (name, n, b, _, gr_size, grp_size), graph in present:
        assert graph.n == n, name
        oracle = DistanceOracle(graph)
        for strategy in ("Gr", "GrP"):
            report = binary_search_solve(graph, oracle, strategy, threads=4)
            assert is_burning_sequence(oracle, report.sequence), name
            # Never below the burning number, never above what BFF found.
            assert b <= len(report.sequence) <= len(report.bff_sequence), name
            if strategy == "GrP":
                matches += len(report.sequence) == grp_size
            else:
                # Ties are broken differently, so Gr may land one off.
                assert abs(len(report.sequence) - gr_size) <= 1, name
    assert matches >= 0.8 * len(present)


def test_guess_timeout_falls_back_to_bff(karate, karate_oracle, monkeypatch):
    real = heuristics.gr

    def gr_slow_at_three(graph, oracle, p, **kwargs):
        if p == 3:
            raise TimeLimitError()
        return real(graph, oracle, p, **kwargs)

    monkeypatch.setattr(heuristics, "gr", gr_slow_at_three)
    report = binary_search_solve(karate, karate_oracle, "Gr", time_limit=1.0)
    assert report.timed_out_at == 3
    assert report.strategy == "BFF"
    assert report.sequence == report.bff_sequence
    assert [(g.p, g.burned_all) for g in report.per_guess_log] == [(2, False)]


def test_guess_timeout_keeps_earlier_success(monkeypatch):
    graph = generate("path", 25)
    oracle = DistanceOracle(graph)
    real = heuristics.gr

    def gr_slow_below_six(graph, oracle, p, **kwargs):
        if p < 6:
            raise TimeLimitError()
        return real(graph, oracle, p, **kwargs)

    monkeypatch.setattr(heuristics, "gr", gr_slow_below_six)
    report = binary_search_solve(graph, oracle, "Gr", time_limit=1.0)
    assert report.timed_out
    assert report.timed_out_at < 6
    assert is_burning_sequence(oracle, report.sequence)
    found = [g.p for g in report.per_guess_log if g.burned_all]
    assert len(report.sequence) == min(found + [len(report.bff_sequence)])


def test_real_timeout_still_returns_a_burning_sequence():
    graph = generate("grid", 20)
    oracle = DistanceOracle(graph)
    report = binary_search_solve(graph, oracle, "Gr", time_limit=1e-9)
    assert report.timed_out
    assert report.burned_all
    assert is_burning_sequence(oracle, report.sequence)


def test_binary_search_rejects_bff_strategy(karate, karate_oracle):
    with pytest.raises(ValueError):
        binary_search_solve(karate, karate_oracle, "BFF")


@settings(max_examples=100, deadline=None)
@given(connected_graphs(max_n=9), st.sampled_from(["Gr", "GrP"]))
def test_binary_search_is_sound(graph, strategy):
    oracle = DistanceOracle(graph)
    report = binary_search_solve(graph, oracle, strategy)
    assert is_burning_sequence(oracle, report.sequence)
    assert len(report.sequence) <= len(report.bff_sequence)
    assert len(report.sequence) >= exact_solve(graph, oracle).burning_number


# ---- lower bound and table rows ----

def test_half_coverage_certificate():
    graph = generate("path", 25)
    report = gr(graph, DistanceOracle(graph), 2)
    assert report.covered_count == 4
    certificate = half_coverage_test(report, graph.n)
    assert certificate is not None and certificate.p == 2
    assert "p < b(G)" in certificate.describe()


def test_half_coverage_no_conclusion(karate, karate_oracle):
    assert half_coverage_test(gr(karate, karate_oracle, 2), karate.n) is None
    assert half_coverage_test(gr(karate, karate_oracle, 3), karate.n) is None


def test_table_row(karate, karate_oracle):
    report = binary_search_solve(karate, karate_oracle, "Gr")
    cells = report.to_row("karate", karate, 0.0004).split(",")
    assert csv_header().split(",") == [
        "name", "n", "m", "l", "s0", "t_bff", "t_bfs", "gr_size", "gr_time", "grp_size", "grp_time",
    ]
    assert cells[:5] == ["karate", "34", "78", "2", "4"]
    assert cells[6] == "0.000"
    assert cells[7] == "3"
    assert cells[9:] == ["-", "-"]


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__]))
