"""Independent reference implementations used only by the tests.

Nothing here imports the package's numerical code; each oracle recomputes
its quantity from the defining formula by brute force.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np


# -- fuzzy sets ---------------------------------------------------------------

def trapezoid_membership(a, b, c, d, x):
    x = np.asarray(x, dtype=float)
    up = np.ones_like(x) if b == a else np.clip((x - a) / (b - a), 0.0, 1.0)
    down = np.ones_like(x) if d == c else np.clip((d - x) / (d - c), 0.0, 1.0)
    out = np.minimum(up, down)
    return np.where((x < a) | (x > d), 0.0, out)


def numeric_centroid(a, b, c, d, points=1_000_000):
    """Centre of area by the composite trapezoid rule.

    The grid holds ``points`` nodes spread over ``[a, b]``, ``[b, c]`` and
    ``[c, d]`` in proportion to their lengths, so every kink is a node.
    """
    pieces = [(lo, hi) for lo, hi in ((a, b), (b, c), (c, d)) if hi > lo]
    span = d - a
    xs = [np.linspace(lo, hi, max(3, int(points * (hi - lo) / span))) for lo, hi in pieces]
    x = np.unique(np.concatenate(xs))
    y = trapezoid_membership(a, b, c, d, x)
    return float(np.trapezoid(x * y, x) / np.trapezoid(y, x))


# -- Sugeno measures ----------------------------------------------------------

def lambda_measure_value(densities, lam, members):
    """Measure of a coalition via the product form ``(prod(1 + lam*mu) - 1) / lam``."""
    mu = [densities[i] for i in members]
    if not mu:
        return 0.0
    if lam == 0.0:
        return math.fsum(mu)
    prod = 1.0
    for m in mu:
        prod *= 1.0 + lam * m
    return (prod - 1.0) / lam


@lru_cache(maxsize=None)
def all_permutations(n: int) -> np.ndarray:
    """Every permutation of ``range(n)`` as rows, built by insertion."""
    perms = np.zeros((1, 0), dtype=np.int8)
    for k in range(n):
        blocks = []
        for pos in range(k + 1):
            blocks.append(np.insert(perms, pos, k, axis=1))
        perms = np.concatenate(blocks)
    return perms


def shapley_by_permutations(densities, lam, chunk=200_000):
    """Average marginal contribution over all n! arrival orders."""
    mu = np.asarray(densities, dtype=float)
    n = len(mu)
    perms = all_permutations(n)
    total = np.zeros(n)
    for start in range(0, len(perms), chunk):
        block = perms[start:start + chunk].astype(np.intp)
        if lam == 0.0:
            running = np.cumsum(mu[block], axis=1)
        else:
            running = np.cumprod(1.0 + lam * mu[block], axis=1)
            running = (running - 1.0) / lam
        before = np.concatenate([np.zeros((len(block), 1)), running[:, :-1]], axis=1)
        total += np.bincount(block.ravel(), weights=(running - before).ravel(), minlength=n)
    return total / len(perms)


# -- graphs -------------------------------------------------------------------

def modularity_bruteforce(w, labels):
    """``(1/2m) * sum_ij [w_ij - k_i k_j / 2m] * delta(c_i, c_j)`` with explicit loops."""
    w = np.asarray(w, dtype=float)
    n = len(w)
    k = w.sum(axis=1)
    two_m = w.sum()
    q = 0.0
    for i in range(n):
        for j in range(n):
            if labels[i] == labels[j]:
                q += w[i, j] - k[i] * k[j] / two_m
    return q / two_m


def set_partitions(n: int):
    """Every partition of ``range(n)`` as a restricted growth string."""
    labels = [0] * n

    def rec(i, top):
        if i == n:
            yield tuple(labels)
            return
        for c in range(top + 2):
            labels[i] = c
            yield from rec(i + 1, max(top, c))

    if n == 0:
        yield ()
        return
    labels[0] = 0
    yield from rec(1, 0)


def bell(n: int) -> int:
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
    return row[0]


# -- samplers -----------------------------------------------------------------

def low_density(x, a, b):
    x = np.asarray(x, dtype=float)
    h = 2.0 / (a + b)
    tail = h * (b - x) / (b - a)
    return np.where((x < 0) | (x > b), 0.0, np.where(x <= a, h, tail))


def high_density(x, c, d):
    x = np.asarray(x, dtype=float)
    h = 2.0 / ((1.0 - c) + (1.0 - d))
    rise = h * (x - c) / (d - c)
    return np.where((x < c) | (x > 1.0), 0.0, np.where(x <= d, rise, h))


def low_cdf_closed(x, a, b):
    """Distribution function of the low density, piecewise closed form."""
    x = np.clip(np.asarray(x, dtype=float), 0.0, b)
    knee = 2.0 * a / (a + b)
    return np.where(x <= a, 2.0 * x / (a + b),
                    knee + ((x - b) ** 2 - (a - b) ** 2) / ((a + b) * (a - b)))


def high_cdf_closed(x, c, d):
    x = np.clip(np.asarray(x, dtype=float), c, 1.0)
    s = (1.0 - d) + (1.0 - c)
    return np.where(x <= d, (x - c) ** 2 / (s * (d - c)), ((x - d) + (x - c)) / s)


def ks_statistic(samples, cdf):
    """Two-sided one-sample Kolmogorov-Smirnov distance."""
    xs = np.sort(np.asarray(samples, dtype=float))
    n = len(xs)
    f = cdf(xs)
    above = np.arange(1, n + 1) / n - f
    below = f - np.arange(0, n) / n
    return float(max(above.max(), below.max()))


# -- partitions ---------------------------------------------------------------

def nmi_reference(x, y):
    """NMI from explicit probability sums with natural logs."""
    x, y = list(x), list(y)
    n = len(x)
    px, py, pxy = {}, {}, {}
    for u, v in zip(x, y):
        px[u] = px.get(u, 0) + 1
        py[v] = py.get(v, 0) + 1
        pxy[(u, v)] = pxy.get((u, v), 0) + 1
    hx = -sum(c / n * math.log(c / n) for c in px.values())
    hy = -sum(c / n * math.log(c / n) for c in py.values())
    mi = sum(c / n * math.log((c / n) / ((px[u] / n) * (py[v] / n))) for (u, v), c in pxy.items())
    if hx + hy == 0:
        return 1.0
    return 2 * mi / (hx + hy)
