"""Entropy, mutual information and NMI between partitions (natural log)."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import NodeSetMismatch
from .graph import Partition

__all__ = ["ContingencyTable", "contingency", "entropy", "mutual_information", "nmi"]


def _labels(p) -> np.ndarray:
    return p.assignment if isinstance(p, Partition) else Partition(p).assignment


@dataclass(frozen=True)
class ContingencyTable:
    counts: np.ndarray

    @property
    def n(self) -> int:
        return int(self.counts.sum())

    @property
    def rows(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @property
    def cols(self) -> np.ndarray:
        return self.counts.sum(axis=0)


def contingency(x, y) -> ContingencyTable:
    lx, ly = _labels(x), _labels(y)
    if len(lx) != len(ly):
        raise NodeSetMismatch(f"partitions cover {len(lx)} and {len(ly)} nodes")
    if len(lx) == 0:
        raise ValueError("partitions are empty")
    counts = np.zeros((lx.max() + 1, ly.max() + 1), dtype=np.int64)
    np.add.at(counts, (lx, ly), 1)
    return ContingencyTable(counts)


def _entropy_of_counts(counts: np.ndarray) -> float:
    counts = counts[counts > 0]
    prob = counts / counts.sum()
    return -math.fsum(prob * np.log(prob))


def entropy(p) -> float:
    """Shannon entropy of the community-size distribution."""
    labels = _labels(p)
    if len(labels) == 0:
        raise ValueError("partition is empty")
    return _entropy_of_counts(np.bincount(labels))


def mutual_information(x, y) -> float:
    table = contingency(x, y)
    n = table.n
    nz = table.counts > 0
    joint = table.counts[nz] / n
    px = np.broadcast_to((table.rows / n)[:, None], table.counts.shape)[nz]
    py = np.broadcast_to((table.cols / n)[None, :], table.counts.shape)[nz]
    # fsum is correctly rounded, so the result does not depend on term order
    return max(math.fsum(joint * np.log(joint / (px * py))), 0.0)


def nmi(x, y) -> float:
    """``2 MI(X, Y) / (H(X) + H(Y))``.

    Partitions with the same blocks score exactly 1, including two
    single-community partitions. If only one of them is trivial the score is 0.
    """
    table = contingency(x, y)
    if np.all((table.counts > 0).sum(axis=1) == 1) and np.all((table.counts > 0).sum(axis=0) == 1):
        # same blocks under a relabelling
        return 1.0
    hx = _entropy_of_counts(table.rows)
    hy = _entropy_of_counts(table.cols)
    if hx + hy == 0.0:
        return 1.0
    score = 2.0 * mutual_information(x, y) / (hx + hy)
    return float(min(max(score, 0.0), 1.0))
