"""Synergy matrices from Shapley marginals, their aggregation, and the A/F blend."""
from __future__ import annotations

from typing import Callable, Sequence

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array

from .exceptions import DimensionMismatch, GammaOutOfRange, NonPositiveDensity
from .graph import WeightedGraph
from .measure import SugenoLambdaMeasure, build_measure, shapley_exact

__all__ = [
    "PAIRWISE",
    "OWA",
    "synergy_marginals",
    "synergy_matrix_additive",
    "synergy_matrix_general",
    "aggregate_matrices",
    "combine",
    "SynergyTransformer",
]

PAIRWISE: dict[str, Callable[[np.ndarray, np.ndarray], np.ndarray]] = {
    "min": np.minimum,
    "max": np.maximum,
    "mean": lambda x, y: 0.5 * (x + y),
}

OWA: dict[str, Callable[..., np.ndarray]] = {
    "max": lambda stack: stack.max(axis=0),
    "min": lambda stack: stack.min(axis=0),
    "mean": lambda stack: stack.mean(axis=0),
}


def _pairwise(phi):
    if callable(phi):
        return phi
    try:
        return PAIRWISE[phi]
    except KeyError:
        raise ValueError(f"unknown pairwise aggregator {phi!r}; choose from {sorted(PAIRWISE)}") from None


def _weights(g) -> np.ndarray:
    return g.weights if isinstance(g, WeightedGraph) else np.asarray(g, dtype=float)


def _check_values(values) -> np.ndarray:
    vals = np.asarray(values, dtype=float)
    if vals.ndim != 1 or len(vals) < 2:
        raise ValueError("need a 1-D vector of at least two values")
    if not np.all(vals > 0):
        raise NonPositiveDensity("defuzzified values must be strictly positive")
    return vals


def synergy_marginals(values) -> np.ndarray:
    """Signed marginals ``Sh_i - Sh_i^j`` of the 1-additive measure, row ``i`` column ``j``.

    Entries are never positive: dropping ``j`` raises every other share.
    The diagonal is zero.
    """
    vals = _check_values(values)
    total = vals.sum()
    share = vals / total
    # share of i once j has left the game
    share_without = vals[:, None] / (total - vals[None, :])
    out = share[:, None] - share_without
    np.fill_diagonal(out, 0.0)
    return out


def _assemble(marginals: np.ndarray, phi) -> WeightedGraph:
    mag = np.abs(marginals)
    f = _pairwise(phi)(mag, mag.T)
    f = np.array(f, dtype=float)
    np.fill_diagonal(f, 0.0)
    return WeightedGraph(f, copy=False)


def synergy_matrix_additive(values, phi="min") -> WeightedGraph:
    """Synergy matrix of the 1-additive measure built from defuzzified ``values``.

    ``F[i, j] = phi(|Sh_i - Sh_i^j|, |Sh_j - Sh_j^i|)`` with the closed-form
    Shapley shares; zero diagonal.
    """
    return _assemble(synergy_marginals(values), phi)


def synergy_matrix_general(m: SugenoLambdaMeasure, phi="min") -> WeightedGraph:
    """Synergy matrix from exact Shapley values of an arbitrary lambda-measure.

    ``Sh_i^j`` is the Shapley value of ``i`` in the measure rebuilt, with the
    same ``p``, on the nodes other than ``j``. Needs ``2 * n`` exact Shapley
    evaluations, so ``n`` is capped like :func:`shapley_exact`.
    """
    n = m.n
    full = shapley_exact(m)
    marginals = np.zeros((n, n))
    everyone = np.arange(n)
    for j in range(n):
        rest = everyone[everyone != j]
        if len(rest) == 1:
            # a lone player holds the whole unit
            marginals[rest, j] = full[rest] - 1.0
            continue
        # densities are proportional to the defuzzified values
        sub = build_measure(m.densities[rest], p=m.p)
        marginals[rest, j] = full[rest] - shapley_exact(sub)
    return _assemble(marginals, phi)


def aggregate_matrices(mats: Sequence, op="max") -> WeightedGraph:
    """Element-wise OWA (max, min or mean) across per-characteristic matrices."""
    if len(mats) == 0:
        raise ValueError("nothing to aggregate")
    arrays = [_weights(m) for m in mats]
    shape = arrays[0].shape
    for k, arr in enumerate(arrays):
        if arr.shape != shape:
            raise DimensionMismatch(f"matrix {k} has shape {arr.shape}, expected {shape}")
    if callable(op):
        fn = op
    elif op in OWA:
        fn = OWA[op]
    else:
        raise ValueError(f"unknown matrix aggregator {op!r}; choose from {sorted(OWA)}")
    return WeightedGraph(fn(np.stack(arrays)), copy=False)


def combine(a, f, gamma: float) -> WeightedGraph:
    """``gamma * A + (1 - gamma) * F``."""
    if not 0.0 <= gamma <= 1.0:
        raise GammaOutOfRange(f"gamma must lie in [0, 1], got {gamma}")
    wa, wf = _weights(a), _weights(f)
    if wa.shape != wf.shape:
        raise DimensionMismatch(f"A has shape {wa.shape} but F has shape {wf.shape}")
    if gamma == 0.0:
        return WeightedGraph(wf)
    if gamma == 1.0:
        return WeightedGraph(wa)
    return WeightedGraph(gamma * wa + (1.0 - gamma) * wf, copy=False)


class SynergyTransformer(TransformerMixin, BaseEstimator):
    """Turn an ``r x n`` array of defuzzified values into the aggregated ``n x n`` synergy matrix.

    Each row is one characteristic. Rows go through the 1-additive synergy
    construction with ``phi`` and the resulting matrices are merged with
    ``aggregation``.

    Parameters
    ----------
    phi : {"min", "max", "mean"} or callable, default="min"
    aggregation : {"max", "min", "mean"} or callable, default="max"
    """

    def __init__(self, phi="min", aggregation="max"):
        self.phi = phi
        self.aggregation = aggregation

    def fit(self, X, y=None):
        X = check_array(X, ensure_min_features=2)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X) -> np.ndarray:
        X = check_array(X, ensure_min_features=2)
        if hasattr(self, "n_features_in_") and X.shape[1] != self.n_features_in_:
            raise DimensionMismatch(f"expected {self.n_features_in_} nodes, got {X.shape[1]}")
        mats = [synergy_matrix_additive(row, self.phi) for row in X]
        return aggregate_matrices(mats, self.aggregation).weights.copy()
