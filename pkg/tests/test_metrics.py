import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sklearn.metrics import normalized_mutual_info_score

from oracles import nmi_reference
from sugeno_louvain.exceptions import NodeSetMismatch
from sugeno_louvain.graph import Partition
from sugeno_louvain.metrics import contingency, entropy, mutual_information, nmi


def test_identical_and_relabelled():
    x = Partition([0, 0, 1, 1, 2])
    assert nmi(x, x) == 1.0
    assert nmi([0, 0, 1, 1, 2], [7, 7, 3, 3, 9]) == 1.0


def test_crossing_fixture_is_exactly_zero():
    assert nmi([0, 0, 1, 1], [0, 1, 0, 1]) == 0.0
    assert mutual_information([0, 0, 1, 1], [0, 1, 0, 1]) == 0.0


def test_trivial_partitions():
    assert nmi([0, 0, 0], [0, 0, 0]) == 1.0
    assert nmi([0, 0, 0], [0, 1, 2]) == 0.0
    assert entropy([0, 0, 0]) == 0.0
    assert entropy([0, 1, 2, 3]) == pytest.approx(math.log(4))


def test_mismatch():
    with pytest.raises(NodeSetMismatch):
        nmi([0, 1], [0, 1, 2])


def test_contingency_marginals():
    t = contingency([0, 0, 1, 1, 1], [0, 1, 1, 1, 0])
    assert t.n == 5
    np.testing.assert_array_equal(t.counts, [[1, 1], [1, 2]])
    np.testing.assert_array_equal(t.rows, [2, 3])
    np.testing.assert_array_equal(t.cols, [2, 3])


def test_random_pairs_against_references():
    rng = np.random.default_rng(0)
    for _ in range(1000):
        n = int(rng.integers(1, 60))
        x = rng.integers(0, rng.integers(1, 8), n)
        y = rng.integers(0, rng.integers(1, 8), n)
        s = nmi(x, y)
        assert 0.0 <= s <= 1.0
        assert s == nmi(y, x)
        assert s == pytest.approx(nmi_reference(x, y), abs=1e-12)
        if len(set(x)) > 1 or len(set(y)) > 1:
            sk = normalized_mutual_info_score(x, y, average_method="arithmetic")
            assert s == pytest.approx(sk, abs=1e-10)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 5), st.integers(0, 5)), min_size=1, max_size=80))
def test_symmetry_and_range(pairs):
    x, y = zip(*pairs)
    s = nmi(x, y)
    assert s == nmi(y, x)
    assert 0.0 <= s <= 1.0
