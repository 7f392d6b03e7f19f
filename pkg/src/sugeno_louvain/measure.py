"""Sugeno lambda-measures built from defuzzified node values, and their Shapley values."""
from __future__ import annotations

import math
from fractions import Fraction
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .exceptions import GroundSetTooLarge, NonPositiveDensity, RootNotFound
from .fuzzy import FuzzyVector

__all__ = [
    "SugenoLambdaMeasure",
    "build_measure",
    "solve_lambda",
    "coalition_value",
    "shapley_exact",
    "shapley_additive",
    "MAX_EXACT_PLAYERS",
]

MAX_EXACT_PLAYERS = 16


@dataclass(frozen=True, eq=False)
class SugenoLambdaMeasure:
    """Singleton densities plus the lambda solving ``1 + lam = prod(1 + lam * mu_i)``."""

    densities: np.ndarray
    lam: float
    p: float = 1.0

    def __post_init__(self):
        dens = np.array(self.densities, dtype=float)
        dens.setflags(write=False)
        object.__setattr__(self, "densities", dens)

    @property
    def n(self) -> int:
        return len(self.densities)

    @property
    def is_additive(self) -> bool:
        return self.lam == 0.0

    def __call__(self, coalition) -> float:
        return coalition_value(self, coalition)

    def residual(self) -> float:
        """``prod(1 + lam*mu_i) - 1 - lam`` evaluated exactly on the stored floats."""
        return float(_exact_residual(self.densities, self.lam))


def _as_values(values, defuzz) -> np.ndarray:
    if isinstance(values, FuzzyVector):
        return values.defuzzified(defuzz)
    return np.asarray(values, dtype=float)


def _exact_residual(mu, lam: float) -> Fraction:
    lam_q = Fraction(lam)
    prod = Fraction(1)
    for m in mu:
        prod *= 1 + lam_q * Fraction(float(m))
    return prod - 1 - lam_q


def _nearest_root_float(mu, lam: float) -> float:
    """The double closest to the root, by exact-sign bisection over float bit patterns.

    g is convex with g(0) = 0 and g'(0) < 0, so on (0, inf) its sign alone
    says which side of the root a point lies on.
    """
    def bits(x):
        return int(np.float64(x).view(np.int64))

    def value(k):
        return float(np.int64(k).view(np.float64))

    k = bits(lam)
    if _exact_residual(mu, lam) > 0:
        hi, step = k, 1
        while True:
            lo = max(bits(np.nextafter(0.0, 1.0)), hi - step)
            if _exact_residual(mu, value(lo)) <= 0 or lo == bits(np.nextafter(0.0, 1.0)):
                break
            hi, step = lo, step * 2
    else:
        lo, step = k, 1
        while True:
            hi = lo + step
            if _exact_residual(mu, value(hi)) > 0:
                break
            lo, step = hi, step * 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _exact_residual(mu, value(mid)) > 0:
            hi = mid
        else:
            lo = mid
    r_lo, r_hi = abs(_exact_residual(mu, value(lo))), abs(_exact_residual(mu, value(hi)))
    return value(lo) if r_lo <= r_hi else value(hi)


def solve_lambda(densities, tol: float = 1e-15, max_doublings: int = 200) -> float:
    """Unique positive root of ``prod(1 + lam*mu_i) - 1 - lam`` for ``sum(mu) < 1``.

    Brackets in log space (doubling from 1e-12), bisects, polishes with
    Newton steps on the polynomial form, and finally moves to the adjacent
    float whose exact residual is smallest.
    """
    mu = np.asarray(densities, dtype=float)
    if mu.sum() >= 1.0:
        raise ValueError("a positive lambda root needs densities summing below 1")

    def h(lam):
        # log form: same root, no overflow for large lam
        return float(np.sum(np.log1p(lam * mu)) - math.log1p(lam))

    lo, hi = 1e-12, 1.0
    if h(lo) >= 0.0:
        raise RootNotFound("densities too close to additive to bracket lambda")
    for _ in range(max_doublings):
        if h(hi) > 0.0:
            break
        lo, hi = hi, hi * 2.0
    else:
        raise RootNotFound("could not bracket lambda")

    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if h(mid) > 0.0:
            hi = mid
        else:
            lo = mid
        if hi - lo <= tol * max(1.0, hi):
            break
    lam = 0.5 * (lo + hi)

    for _ in range(8):
        terms = 1.0 + lam * mu
        prod = float(np.prod(terms))
        g = prod - 1.0 - lam
        dg = prod * float(np.sum(mu / terms)) - 1.0
        if dg == 0.0:
            break
        step = g / dg
        new = lam - step
        if not (lo * 0.5 < new < hi * 2.0):
            break
        lam = new
        if abs(step) <= 1e-16 * max(1.0, lam):
            break
    return _nearest_root_float(mu, lam)


def build_measure(values, p: float = 1.0, defuzz="centroid") -> SugenoLambdaMeasure:
    """Sugeno lambda-measure with densities ``p * D_i / sum(D)``.

    ``values`` is either a :class:`FuzzyVector` (defuzzified with ``defuzz``)
    or a sequence of already defuzzified positive reals.
    """
    vals = _as_values(values, defuzz)
    if vals.ndim != 1 or len(vals) < 2:
        raise ValueError("need a 1-D vector of at least two values")
    if not 0.0 < p <= 1.0:
        raise ValueError(f"p must lie in (0, 1], got {p}")
    if np.any(~np.isfinite(vals)) or np.any(vals <= 0.0):
        bad = int(np.flatnonzero(~(vals > 0.0))[0])
        raise NonPositiveDensity(f"defuzzified value of node {bad} is {vals[bad]}, must be > 0")
    densities = p * vals / vals.sum()
    lam = 0.0 if p == 1.0 else solve_lambda(densities)
    return SugenoLambdaMeasure(densities, lam, p)


def _mask(m: SugenoLambdaMeasure, coalition) -> np.ndarray:
    arr = np.asarray(coalition)
    if arr.dtype == bool:
        if arr.shape != (m.n,):
            raise ValueError("boolean coalition mask must have length n")
        return arr
    mask = np.zeros(m.n, dtype=bool)
    mask[arr.astype(int).ravel()] = True
    return mask


def coalition_value(m: SugenoLambdaMeasure, coalition) -> float:
    """Measure of a node subset (index iterable or boolean mask)."""
    mask = _mask(m, list(coalition) if not isinstance(coalition, np.ndarray) else coalition)
    mu = m.densities[mask]
    if mu.size == 0:
        return 0.0
    if m.lam == 0.0:
        return float(mu.sum())
    return float(np.expm1(np.sum(np.log1p(m.lam * mu))) / m.lam)


def _subset_values(mu: np.ndarray, lam: float) -> np.ndarray:
    """Measure of every subset of ``mu``'s index set, indexed by bitmask."""
    k = len(mu)
    size = 1 << k
    acc = np.zeros(size)
    logs = mu if lam == 0.0 else np.log1p(lam * mu)
    for i in range(k):
        step = 1 << i
        # masks with bit i set = masks without it plus bit i
        acc.reshape(-1, 2 * step)[:, step:] = acc.reshape(-1, 2 * step)[:, :step] + logs[i]
    if lam == 0.0:
        return acc
    return np.expm1(acc) / lam


def shapley_exact(m: SugenoLambdaMeasure, ground: Iterable[int] | None = None) -> np.ndarray:
    """Shapley values of the game ``(ground, m restricted to ground)``.

    Enumerates all ``2**len(ground)`` coalitions; the result is ordered like
    ``ground`` (default: all nodes in index order).
    """
    players = np.arange(m.n) if ground is None else np.asarray(list(ground), dtype=int)
    k = len(players)
    if k > MAX_EXACT_PLAYERS:
        raise GroundSetTooLarge(
            f"exact Shapley values over {k} players exceed the cap of {MAX_EXACT_PLAYERS}; "
            "use the 1-additive closed form instead"
        )
    if k == 0:
        return np.zeros(0)
    values = _subset_values(m.densities[players], m.lam)
    masks = np.arange(1 << k)
    sizes = np.zeros(1 << k, dtype=int)
    for i in range(k):
        sizes += (masks >> i) & 1
    fact = [math.factorial(s) for s in range(k + 1)]
    weight_by_size = np.array([fact[s] * fact[k - s - 1] / fact[k] for s in range(k)])
    out = np.empty(k)
    for i in range(k):
        without = masks[((masks >> i) & 1) == 0]
        marginal = values[without | (1 << i)] - values[without]
        out[i] = np.dot(weight_by_size[sizes[without]], marginal)
    return out


def shapley_additive(values, i: int, excluded: int | None = None) -> float:
    """Shapley value of node ``i`` under the 1-additive measure from ``values``.

    With ``excluded=j`` the game is played on all nodes except ``j``.
    """
    vals = np.asarray(values, dtype=float)
    if excluded is not None and excluded == i:
        raise ValueError("a node cannot be excluded from its own game")
    total = vals.sum()
    if excluded is not None:
        total -= vals[excluded]
    return float(vals[i] / total)
