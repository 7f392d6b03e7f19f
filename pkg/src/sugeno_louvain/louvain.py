"""Duo Louvain and the fuzzy Sugeno-Louvain detection pipelines.

Duo Louvain is Louvain with two matrices: candidate moves for a node come
from its neighbours in the adjacency ``A``, while modularity gains are
evaluated on a second weight matrix ``M``. Both matrices are contracted in
lockstep between levels.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .exceptions import DimensionMismatch, EmptyGraph
from .fuzzy import FuzzyVector
from .graph import MEFVFG, Partition, WeightedGraph, contract
from .measure import build_measure
from .synergy import aggregate_matrices, combine, synergy_matrix_additive, synergy_matrix_general

__all__ = [
    "modularity",
    "delta_q",
    "LouvainState",
    "duo_louvain",
    "fuzzy_sugeno_louvain",
    "additive_sugeno_louvain",
    "DuoLouvain",
    "FuzzySugenoLouvain",
]

DEFAULT_MIN_GAIN = 1e-12


def _as_graph(g) -> WeightedGraph:
    return g if isinstance(g, WeightedGraph) else WeightedGraph(g)


def modularity(g: WeightedGraph, p: Partition) -> float:
    """Newman-Girvan modularity of ``p`` on the weighted graph ``g``."""
    g = _as_graph(g)
    if g.total_weight <= 0:
        raise EmptyGraph("modularity is undefined on a graph with no weight")
    if p.n != g.n:
        raise DimensionMismatch(f"partition covers {p.n} nodes, graph has {g.n}")
    two_m = g.total_weight
    coarse = contract(g, p)
    inside = np.trace(coarse.weights) / two_m
    expected = np.sum((coarse.degrees / two_m) ** 2)
    return float(inside - expected)


class LouvainState:
    """Mutable bookkeeping for one Duo Louvain run.

    Holds the current level's ``A`` and ``M`` graphs, the community label of
    each level node, per-community degree totals on ``M``, and the map from
    original nodes to level nodes.
    """

    def __init__(self, a: WeightedGraph, m: WeightedGraph, seed=None,
                 reshuffle: bool = False, min_gain: float = DEFAULT_MIN_GAIN):
        a, m = _as_graph(a), _as_graph(m)
        if a.n != m.n:
            raise DimensionMismatch(f"A has {a.n} nodes but M has {m.n}")
        if m.total_weight <= 0:
            raise EmptyGraph("M carries no weight; modularity gains are undefined")
        self.m_original = m
        self.rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
        self.reshuffle = reshuffle
        self.min_gain = min_gain
        self.node_map = np.arange(a.n)
        self.level = 0
        self.passes = 0
        self.moves = 0
        self.level_modularity: list[float] = []
        self._enter_level(a, m)

    def _enter_level(self, a: WeightedGraph, m: WeightedGraph) -> None:
        self.a, self.m = a, m
        self.labels = np.arange(a.n)
        self.community_degree = m.degrees.copy()
        self._neighbors = [a.neighbors(i) for i in range(a.n)]

    @property
    def partition(self) -> Partition:
        """Current partition of the original nodes."""
        return Partition(self.labels[self.node_map])

    def _gains(self, i: int, targets: np.ndarray) -> np.ndarray:
        m = self.m
        two_m = m.total_weight
        k_i = m.degrees[i]
        own = self.labels[i]
        row = m.weights[i]
        to_own = row[self.labels == own].sum() - row[i]
        to_targets = np.array([row[self.labels == c].sum() for c in targets])
        own_rest = self.community_degree[own] - k_i
        gains = (2.0 * (to_targets - to_own) / two_m
                 - 2.0 * k_i * (self.community_degree[targets] - own_rest) / two_m ** 2)
        gains[targets == own] = 0.0
        return gains

    def delta_q(self, i: int, target: int) -> float:
        """Exact change in modularity on ``M`` from moving level node ``i`` into community ``target``."""
        return float(self._gains(i, np.array([target]))[0])

    def move(self, i: int, target: int) -> None:
        k_i = self.m.degrees[i]
        self.community_degree[self.labels[i]] -= k_i
        self.community_degree[target] += k_i
        self.labels[i] = target

    def _best_move(self, i: int):
        nb = self._neighbors[i]
        if nb.size == 0:
            return None, 0.0
        own = self.labels[i]
        candidates = np.unique(self.labels[nb])
        candidates = candidates[candidates != own]
        if candidates.size == 0:
            return None, 0.0
        m = self.m
        two_m = m.total_weight
        k_i = m.degrees[i]
        links = np.bincount(self.labels, weights=m.weights[i], minlength=m.n)
        to_own = links[own] - m.weights[i, i]
        own_rest = self.community_degree[own] - k_i
        gains = (2.0 * (links[candidates] - to_own) / two_m
                 - 2.0 * k_i * (self.community_degree[candidates] - own_rest) / two_m ** 2)
        # argmax keeps the first maximum, i.e. the smallest community id
        best = int(np.argmax(gains))
        return int(candidates[best]), float(gains[best])

    def local_moving(self) -> bool:
        """Phase 1 sweeps until a full pass makes no move. Returns whether anything moved."""
        order = self.rng.permutation(self.a.n)
        moved_any = False
        while True:
            self.passes += 1
            moved = False
            for i in order:
                target, gain = self._best_move(i)
                if target is not None and gain > self.min_gain:
                    self.move(i, target)
                    self.moves += 1
                    moved = True
            if not moved:
                break
            moved_any = True
            if self.reshuffle:
                order = self.rng.permutation(self.a.n)
        return moved_any

    def aggregate(self) -> bool:
        """Phase 2: contract both graphs. Returns False once the node count stops shrinking."""
        found = Partition(self.labels)
        self.level_modularity.append(modularity(self.m, found))
        self.node_map = found.assignment[self.node_map]
        if found.n_communities == self.a.n:
            self.labels = np.arange(self.a.n)
            return False
        self.level += 1
        self._enter_level(contract(self.a, found), contract(self.m, found))
        return True

    def run(self) -> Partition:
        while True:
            self.local_moving()
            if not self.aggregate():
                return self.partition


def delta_q(state: LouvainState, i: int, target: int) -> float:
    return state.delta_q(i, target)


def duo_louvain(a, m, seed=None, *, reshuffle: bool = False,
                min_gain: float = DEFAULT_MIN_GAIN, return_state: bool = False):
    """Partition the nodes of ``a`` by maximising modularity on ``m``.

    Nodes are visited in one seeded random order per level (a fresh order on
    every pass when ``reshuffle`` is set). A node joins the neighbouring
    community with the largest gain if that gain exceeds ``min_gain``; ties go
    to the smallest community id. Nodes without neighbours in ``a`` stay
    alone.
    """
    state = LouvainState(a, m, seed=seed, reshuffle=reshuffle, min_gain=min_gain)
    part = state.run()
    return (part, state) if return_state else part


def _defuzzified_rows(vectors, defuzz="centroid") -> np.ndarray:
    if isinstance(vectors, FuzzyVector):
        vectors = [vectors]
    rows = [v.defuzzified(defuzz) if isinstance(v, FuzzyVector) else np.asarray(v, dtype=float)
            for v in vectors]
    return np.atleast_2d(np.array(rows, dtype=float))


def _exact_synergy(rows, ps, phi, aggregation) -> WeightedGraph:
    # at p = 1 the closed form is the same matrix, without the size cap
    mats = [synergy_matrix_additive(row, phi) if p == 1.0
            else synergy_matrix_general(build_measure(row, p=p), phi)
            for row, p in zip(rows, ps)]
    return aggregate_matrices(mats, aggregation)


def additive_sugeno_louvain(a, vectors, phi="min", aggregation="max", gamma=0.0, seed=None,
                            *, reshuffle=False, return_matrices=False):
    """1-additive multi-dimensional Sugeno-Louvain.

    ``vectors`` holds ``r`` rows of defuzzified node values. Each row yields a
    synergy matrix from the closed-form Shapley shares; the matrices are merged
    with ``aggregation`` and blended with ``a`` as ``gamma*A + (1-gamma)*F``
    before running Duo Louvain.
    """
    a = _as_graph(a)
    rows = _defuzzified_rows(vectors)
    if rows.shape[1] != a.n:
        raise DimensionMismatch(f"vectors have {rows.shape[1]} entries, graph has {a.n} nodes")
    f = aggregate_matrices([synergy_matrix_additive(row, phi) for row in rows], aggregation)
    m = combine(a, f, gamma)
    part = duo_louvain(a, m, seed, reshuffle=reshuffle)
    return (part, f, m) if return_matrices else part


def fuzzy_sugeno_louvain(g: MEFVFG, phi="min", aggregation="max", gamma=0.0, seed=None,
                         *, defuzz="centroid", reshuffle=False, return_matrices=False):
    """Multi-dimensional fuzzy Sugeno-Louvain with exact Shapley values.

    Builds one lambda-measure per fuzzy vector (with its own ``p``), turns each
    into a synergy matrix, aggregates, blends with the adjacency and runs Duo
    Louvain. Exact Shapley enumeration limits graphs to 16 nodes.
    """
    f = _exact_synergy(_defuzzified_rows(g.fuzzy_vectors, defuzz), g.ps, phi, aggregation)
    m = combine(g.graph, f, gamma)
    part = duo_louvain(g.graph, m, seed, reshuffle=reshuffle)
    return (part, f, m) if return_matrices else part


class DuoLouvain(ClusterMixin, BaseEstimator):
    """Duo Louvain clustering on a square adjacency matrix.

    ``fit(X, M=None)``: ``X`` is the adjacency used for neighbourhoods and
    ``M`` the matrix on which modularity is evaluated (defaults to ``X``,
    which is plain Louvain).

    Attributes
    ----------
    labels_ : ndarray of shape (n,)
    partition_ : Partition
    modularity_ : float
        Modularity of ``partition_`` on ``M``.
    n_levels_ : int
    """

    def __init__(self, random_state=None, reshuffle=False, min_gain=DEFAULT_MIN_GAIN):
        self.random_state = random_state
        self.reshuffle = reshuffle
        self.min_gain = min_gain

    def fit(self, X, y=None, M=None):
        X = check_array(X, ensure_min_samples=1)
        a = WeightedGraph(X)
        m = a if M is None else WeightedGraph(check_array(M))
        part, state = duo_louvain(a, m, self.random_state, reshuffle=self.reshuffle,
                                  min_gain=self.min_gain, return_state=True)
        self.partition_ = part
        self.labels_ = part.assignment.copy()
        self.modularity_ = modularity(m, part)
        self.n_levels_ = state.level + 1
        self.n_features_in_ = a.n
        return self


class FuzzySugenoLouvain(ClusterMixin, BaseEstimator):
    """Community detection from an adjacency matrix plus soft node information.

    ``fit(X, vectors=...)`` takes the ``n x n`` adjacency ``X`` and either an
    ``r x n`` array of defuzzified values or a list of :class:`FuzzyVector`.
    With every ``p`` equal to 1 the 1-additive closed form is used; otherwise
    Shapley values are enumerated exactly (``n <= 16``).

    Parameters
    ----------
    gamma : float in [0, 1], default=0.0
        Weight of the adjacency in ``M = gamma*A + (1-gamma)*F``.
    phi : {"min", "max", "mean"}, default="min"
        Pairwise aggregator of the two Shapley marginals.
    aggregation : {"max", "min", "mean"}, default="max"
        Element-wise aggregator across characteristics.
    p : float or sequence of float, default=1.0
        Measure parameter per characteristic.
    defuzz : {"centroid", "mom"} or callable, default="centroid"
    random_state : int, Generator or None
    reshuffle : bool, default=False
    """

    def __init__(self, gamma=0.0, phi="min", aggregation="max", p=1.0, defuzz="centroid",
                 random_state=None, reshuffle=False):
        self.gamma = gamma
        self.phi = phi
        self.aggregation = aggregation
        self.p = p
        self.defuzz = defuzz
        self.random_state = random_state
        self.reshuffle = reshuffle

    def fit(self, X, y=None, vectors=None):
        if vectors is None:
            raise ValueError("FuzzySugenoLouvain.fit needs node information via vectors=")
        X = check_array(X)
        a = WeightedGraph(X)
        if isinstance(vectors, FuzzyVector):
            vectors = [vectors]
        r = len(vectors)
        ps = list(np.broadcast_to(np.asarray(self.p, dtype=float), (r,)))
        rows = _defuzzified_rows(vectors, self.defuzz)
        if rows.shape[1] != a.n:
            raise DimensionMismatch(f"vectors have {rows.shape[1]} entries, graph has {a.n} nodes")
        f = _exact_synergy(rows, ps, self.phi, self.aggregation)
        m = combine(a, f, self.gamma)
        part = duo_louvain(a, m, self.random_state, reshuffle=self.reshuffle)
        self.partition_ = part
        self.labels_ = part.assignment.copy()
        self.synergy_ = f.weights.copy()
        self.mixed_ = m.weights.copy()
        self.modularity_ = modularity(m, part)
        self.n_features_in_ = a.n
        return self

    def score(self, X=None, y=None):
        """Modularity of the fitted partition on the blended matrix."""
        check_is_fitted(self, "partition_")
        return self.modularity_

