import numpy as np
import pytest

from oracles import modularity_bruteforce
from sugeno_louvain.exceptions import DimensionMismatch, ParseError
from sugeno_louvain.fuzzy import FuzzyVector, TrapezoidalFuzzySet
from sugeno_louvain.graph import (
    MEFVFG,
    Partition,
    WeightedGraph,
    contract,
    degree,
    read_edge_list,
    read_matrix_csv,
    read_partition,
    write_edge_list,
    write_matrix_csv,
    write_partition,
)
from sugeno_louvain.louvain import modularity


def random_graph(rng, n, density=0.4, loops=False):
    w = rng.uniform(0.1, 2.0, (n, n)) * (rng.random((n, n)) < density)
    w = np.triu(w, k=0 if loops else 1)
    return WeightedGraph(w + np.triu(w, 1).T)


def test_validation():
    with pytest.raises(DimensionMismatch):
        WeightedGraph(np.zeros((2, 3)))
    with pytest.raises(ValueError):
        WeightedGraph([[0, 1], [2, 0]])
    with pytest.raises(ValueError):
        WeightedGraph([[0, -1], [-1, 0]])
    with pytest.raises(ValueError):
        WeightedGraph([[0, np.inf], [np.inf, 0]])


def test_weights_are_read_only_and_degrees_cached():
    g = WeightedGraph.from_edges(3, [(0, 1), (1, 2, 2.5)])
    with pytest.raises(ValueError):
        g.weights[0, 1] = 3
    assert degree(g, 1) == 3.5
    assert g.total_weight == 7.0
    assert list(g.neighbors(1)) == [0, 2]


def test_self_loop_counted_once_in_degree():
    g = WeightedGraph([[2.0, 1.0], [1.0, 0.0]])
    assert g.degree(0) == 3.0
    assert list(g.neighbors(0)) == [1]


def test_partition_canonical_labels():
    p = Partition([5, 5, 2, 9, 2])
    assert list(p.assignment) == [0, 0, 1, 2, 1]
    assert p == Partition(["x", "x", "y", "z", "y"])
    assert p.n_communities == 3 and len(p) == 3
    assert p.as_sets() == {frozenset({0, 1}), frozenset({2, 4}), frozenset({3})}
    assert list(p.sizes()) == [2, 2, 1]
    assert hash(p) == hash(Partition([1, 1, 0, 7, 0]))


def test_partition_constructors():
    assert Partition.from_sizes([2, 3]) == Partition([0, 0, 1, 1, 1])
    assert Partition.from_communities([[2, 3], [0, 1]]) == Partition([0, 0, 1, 1])
    with pytest.raises(ValueError):
        Partition.from_communities([[0, 1], [1]])
    with pytest.raises(ValueError):
        Partition.from_communities([[0]], n=2)
    assert Partition.singletons(3).n_communities == 3


def test_contract_preserves_weight_and_modularity():
    rng = np.random.default_rng(2)
    for _ in range(50):
        n = int(rng.integers(3, 15))
        g = random_graph(rng, n, loops=True)
        if g.total_weight == 0:
            continue
        p = Partition(rng.integers(0, 4, n))
        c = contract(g, p)
        assert c.n == p.n_communities
        assert c.total_weight == pytest.approx(g.total_weight)
        # internal weight of each community sits on the diagonal
        for k, members in enumerate(p.communities):
            assert c.weights[k, k] == pytest.approx(g.weights[np.ix_(members, members)].sum())
        q_fine = modularity_bruteforce(g.weights, p.assignment)
        assert modularity(c, Partition.singletons(c.n)) == pytest.approx(q_fine, abs=1e-12)


def test_contract_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        contract(WeightedGraph(np.eye(3)), Partition([0, 1]))


def test_mefvfg_validation():
    g = WeightedGraph.from_edges(2, [(0, 1)])
    vec = FuzzyVector([TrapezoidalFuzzySet(0, 1, 2, 3)] * 2)
    assert MEFVFG(g, [vec]).ps == [1.0]
    with pytest.raises(DimensionMismatch):
        MEFVFG(g, [FuzzyVector([TrapezoidalFuzzySet(0, 1, 2, 3)])])
    with pytest.raises(DimensionMismatch):
        MEFVFG(g, [vec], [0.5, 0.5])
    with pytest.raises(ValueError):
        MEFVFG(g, [vec], [0.0])
    with pytest.raises(ValueError):
        MEFVFG(g, [])


def test_edge_list_round_trip(tmp_path):
    rng = np.random.default_rng(4)
    g = random_graph(rng, 9)
    path = tmp_path / "g.edges"
    write_edge_list(g, path)
    assert read_edge_list(path) == g


def test_edge_list_isolated_tail_nodes(tmp_path):
    path = tmp_path / "g.edges"
    path.write_text("# nodes: 5\n0 1\n# a comment\n\n1 2 0.5\n")
    g = read_edge_list(path)
    assert g.n == 5 and g.weights[1, 2] == 0.5
    assert read_edge_list(path, n=7).n == 7


@pytest.mark.parametrize(
    "body, lineno",
    [("0 1\n1\n", 2), ("0 1\n1 0\n", 2), ("0 x\n", 1), ("0 1 -2\n", 1), ("-1 0\n", 1), ("# nodes: q\n", 1)],
)
def test_edge_list_errors(tmp_path, body, lineno):
    path = tmp_path / "bad.edges"
    path.write_text(body)
    with pytest.raises(ParseError) as err:
        read_edge_list(path)
    assert err.value.lineno == lineno


def test_partition_round_trip(tmp_path):
    p = Partition([0, 1, 1, 2, 0])
    path = tmp_path / "p.part"
    write_partition(p, path)
    assert read_partition(path) == p


@pytest.mark.parametrize("body", ["", "0 0\n0 1\n", "0 0\n2 1\n", "0\n", "a 0\n"])
def test_partition_errors(tmp_path, body):
    path = tmp_path / "bad.part"
    path.write_text(body)
    with pytest.raises(ParseError):
        read_partition(path)


def test_matrix_csv_round_trip(tmp_path):
    w = np.random.default_rng(1).random((4, 4))
    path = tmp_path / "m.csv"
    write_matrix_csv(w, path)
    np.testing.assert_array_equal(read_matrix_csv(path), w)
    path.write_text("0,1\n1.0\n")
    with pytest.raises(ParseError):
        read_matrix_csv(path)
