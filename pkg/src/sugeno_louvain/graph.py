"""Dense weighted graphs, partitions, community contraction and file formats."""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .exceptions import DimensionMismatch, ParseError
from .fuzzy import FuzzyVector

__all__ = [
    "WeightedGraph",
    "Partition",
    "MEFVFG",
    "contract",
    "degree",
    "read_edge_list",
    "write_edge_list",
    "read_partition",
    "write_partition",
    "read_matrix_csv",
    "write_matrix_csv",
]


class WeightedGraph:
    """Undirected graph stored as a dense symmetric nonnegative matrix.

    Self-loops sit on the diagonal and are counted once, so the degree of a
    node is its row sum and ``total_weight`` (2m) is the sum of all entries.
    """

    def __init__(self, weights, copy: bool = True):
        w = np.array(weights, dtype=float, copy=copy)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise DimensionMismatch(f"weights must be square, got shape {w.shape}")
        if not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite")
        if np.any(w < 0):
            raise ValueError("weights must be nonnegative")
        if not np.allclose(w, w.T, rtol=1e-10, atol=1e-12):
            raise ValueError("weights must be symmetric")
        w = 0.5 * (w + w.T)
        w.setflags(write=False)
        self.weights = w
        self.degrees = w.sum(axis=1)
        self.degrees.setflags(write=False)
        self.total_weight = float(w.sum())

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    @classmethod
    def from_edges(cls, n: int, edges) -> "WeightedGraph":
        w = np.zeros((n, n))
        for edge in edges:
            u, v = int(edge[0]), int(edge[1])
            wt = float(edge[2]) if len(edge) > 2 else 1.0
            w[u, v] = wt
            w[v, u] = wt
        return cls(w, copy=False)

    def neighbors(self, i: int) -> np.ndarray:
        """Nodes sharing a positive-weight edge with ``i`` (``i`` itself excluded)."""
        nb = np.flatnonzero(self.weights[i] > 0)
        return nb[nb != i]

    def degree(self, i: int) -> float:
        return float(self.degrees[i])

    def __eq__(self, other):
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return self.weights.shape == other.weights.shape and np.array_equal(self.weights, other.weights)

    def __repr__(self):
        return f"WeightedGraph(n={self.n}, total_weight={self.total_weight:g})"


def degree(g: WeightedGraph, i: int) -> float:
    return g.degree(i)


class Partition:
    """Assignment of nodes ``0..n-1`` to communities.

    Labels are renumbered densely in order of first appearance, so two
    partitions with the same blocks compare equal regardless of labelling.
    """

    def __init__(self, assignment):
        raw = np.asarray(assignment)
        if raw.ndim != 1:
            raise ValueError("assignment must be one-dimensional")
        _, first, inverse = np.unique(raw, return_index=True, return_inverse=True)
        # rank unique labels by first appearance
        order = np.argsort(first, kind="stable")
        rank = np.empty_like(order)
        rank[order] = np.arange(len(order))
        labels = rank[inverse.ravel()].astype(np.int64)
        labels.setflags(write=False)
        self.assignment = labels

    @classmethod
    def singletons(cls, n: int) -> "Partition":
        return cls(np.arange(n))

    @classmethod
    def from_communities(cls, communities: Sequence, n: int | None = None) -> "Partition":
        if n is None:
            n = sum(len(c) for c in communities)
        labels = np.full(n, -1, dtype=np.int64)
        for cid, members in enumerate(communities):
            for node in members:
                if labels[node] != -1:
                    raise ValueError(f"node {node} appears in more than one community")
                labels[node] = cid
        if np.any(labels < 0):
            missing = np.flatnonzero(labels < 0).tolist()
            raise ValueError(f"nodes {missing} are not assigned")
        return cls(labels)

    @classmethod
    def from_sizes(cls, sizes: Sequence[int]) -> "Partition":
        """Contiguous blocks: the first ``sizes[0]`` nodes, then the next ``sizes[1]``, ..."""
        return cls(np.repeat(np.arange(len(sizes)), sizes))

    @property
    def n(self) -> int:
        return len(self.assignment)

    @property
    def n_communities(self) -> int:
        return int(self.assignment.max()) + 1 if self.n else 0

    @property
    def communities(self) -> list[np.ndarray]:
        order = np.argsort(self.assignment, kind="stable")
        bounds = np.cumsum(np.bincount(self.assignment, minlength=self.n_communities))[:-1]
        return np.split(order, bounds)

    def as_sets(self) -> set[frozenset]:
        return {frozenset(c.tolist()) for c in self.communities}

    def sizes(self) -> np.ndarray:
        return np.bincount(self.assignment, minlength=self.n_communities)

    def __eq__(self, other):
        if not isinstance(other, Partition):
            return NotImplemented
        return np.array_equal(self.assignment, other.assignment)

    def __hash__(self):
        return hash(self.assignment.tobytes())

    def __len__(self):
        return self.n_communities

    def __repr__(self):
        return f"Partition({[c.tolist() for c in self.communities]})"


@dataclass
class MEFVFG:
    """A crisp graph plus ``r`` fuzzy vectors, each with its own ``p`` parameter."""

    graph: WeightedGraph
    fuzzy_vectors: list[FuzzyVector]
    ps: list[float] = field(default_factory=list)

    def __post_init__(self):
        if not self.fuzzy_vectors:
            raise ValueError("at least one fuzzy vector is required")
        if not self.ps:
            self.ps = [1.0] * len(self.fuzzy_vectors)
        if len(self.ps) != len(self.fuzzy_vectors):
            raise DimensionMismatch("need one p per fuzzy vector")
        for k, vec in enumerate(self.fuzzy_vectors):
            if len(vec) != self.graph.n:
                raise DimensionMismatch(f"fuzzy vector {k} has {len(vec)} entries, graph has {self.graph.n} nodes")
        for p in self.ps:
            if not 0.0 < p <= 1.0:
                raise ValueError(f"p must lie in (0, 1], got {p}")

    @property
    def r(self) -> int:
        return len(self.fuzzy_vectors)


def contract(g: WeightedGraph, p: Partition) -> WeightedGraph:
    """Collapse each community into one node.

    Off-diagonal entries sum the weights between two communities; the diagonal
    holds the total internal weight (both ordered pairs plus self-loops), which
    keeps the total weight and modularity unchanged.
    """
    if p.n != g.n:
        raise DimensionMismatch(f"partition covers {p.n} nodes, graph has {g.n}")
    onehot = np.zeros((g.n, p.n_communities))
    onehot[np.arange(g.n), p.assignment] = 1.0
    return WeightedGraph(onehot.T @ g.weights @ onehot, copy=False)


# -- file formats -----------------------------------------------------------

def _content_lines(path):
    with Path(path).open() as fh:
        for lineno, line in enumerate(fh, start=1):
            yield lineno, line.strip()


def read_edge_list(path, n: int | None = None) -> WeightedGraph:
    """Read ``u v [w]`` lines (0-based ids, default weight 1, ``#`` comments).

    The node count is the largest of ``n``, a ``# nodes: N`` header comment
    and the largest id seen plus one.
    """
    edges = []
    declared = 0
    seen = set()
    for lineno, line in _content_lines(path):
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("nodes:"):
                try:
                    declared = int(body.split(":", 1)[1])
                except ValueError:
                    raise ParseError(f"bad node count comment {line!r}", path, lineno) from None
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise ParseError(f"expected 'u v [w]', got {line!r}", path, lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
            w = float(parts[2]) if len(parts) == 3 else 1.0
        except ValueError:
            raise ParseError(f"non-numeric field in {line!r}", path, lineno) from None
        if u < 0 or v < 0:
            raise ParseError("node ids must be nonnegative", path, lineno)
        if w < 0 or not np.isfinite(w):
            raise ParseError(f"invalid weight {w}", path, lineno)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ParseError(f"duplicate edge {key}", path, lineno)
        seen.add(key)
        edges.append((u, v, w))
    size = max([n or 0, declared] + [max(u, v) + 1 for u, v, _ in edges])
    if size == 0:
        raise ParseError("graph has no nodes", path)
    return WeightedGraph.from_edges(size, edges)


def write_edge_list(g: WeightedGraph, path) -> None:
    iu, ju = np.nonzero(np.triu(g.weights))
    with Path(path).open("w") as fh:
        fh.write(f"# nodes: {g.n}\n")
        for u, v in zip(iu.tolist(), ju.tolist()):
            w = float(g.weights[u, v])
            if w == 1.0:
                fh.write(f"{u} {v}\n")
            else:
                fh.write(f"{u} {v} {w!r}\n")


def read_partition(path) -> Partition:
    """Read ``node community`` lines; every node 0..n-1 must appear once."""
    by_node = {}
    for lineno, line in _content_lines(path):
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected 'node community', got {line!r}", path, lineno)
        try:
            node = int(parts[0])
        except ValueError:
            raise ParseError(f"bad node id {parts[0]!r}", path, lineno) from None
        if node in by_node:
            raise ParseError(f"node {node} listed twice", path, lineno)
        by_node[node] = parts[1]
    if not by_node:
        raise ParseError("partition file is empty", path)
    n = len(by_node)
    if sorted(by_node) != list(range(n)):
        raise ParseError(f"node ids must be exactly 0..{n - 1}", path)
    return Partition([by_node[i] for i in range(n)])


def write_partition(p: Partition, path) -> None:
    with Path(path).open("w") as fh:
        for node, cid in enumerate(p.assignment.tolist()):
            fh.write(f"{node} {cid}\n")


def write_matrix_csv(g: WeightedGraph | np.ndarray, path) -> None:
    """Dense CSV with a header row of node ids."""
    w = g.weights if isinstance(g, WeightedGraph) else np.asarray(g)
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(range(w.shape[1]))
        for row in w:
            writer.writerow(repr(float(x)) for x in row)


def read_matrix_csv(path) -> np.ndarray:
    with Path(path).open(newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ParseError("matrix file is empty", path)
    ncol = len(rows[0])
    out = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != ncol:
            raise ParseError(f"expected {ncol} columns, got {len(row)}", path, lineno)
        try:
            out.append([float(x) for x in row])
        except ValueError:
            raise ParseError("non-numeric entry", path, lineno) from None
    return np.array(out).reshape(len(out), ncol)
