"""Trapezoidal fuzzy sets and defuzzification.

A trapezoid ``(a, b, c, d)`` has membership rising linearly on ``[a, b]``,
equal to one on ``[b, c]`` and falling linearly on ``[c, d]``.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from .exceptions import ParseError, ZeroArea

__all__ = [
    "TrapezoidalFuzzySet",
    "FuzzyVector",
    "membership",
    "defuzzify",
    "centroid",
    "mean_of_max",
    "read_fuzzy_vector",
    "read_linguistic_terms",
]


@dataclass(frozen=True)
class TrapezoidalFuzzySet:
    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        vals = (self.a, self.b, self.c, self.d)
        if not all(np.isfinite(v) for v in vals):
            raise ValueError(f"trapezoid coordinates must be finite, got {vals}")
        if not (self.a <= self.b <= self.c <= self.d):
            raise ValueError(f"trapezoid requires a <= b <= c <= d, got {vals}")

    def __call__(self, x):
        return membership(self, x)

    @property
    def area(self) -> float:
        return 0.5 * ((self.d - self.a) + (self.c - self.b))

    def shift(self, t: float) -> "TrapezoidalFuzzySet":
        return TrapezoidalFuzzySet(self.a + t, self.b + t, self.c + t, self.d + t)


def membership(fs: TrapezoidalFuzzySet, x):
    """Membership degree of ``x`` (scalar or array) in ``fs``.

    Degenerate edges (``a == b`` or ``c == d``) behave as steps that take the
    value 1 on the flat side.
    """
    x_arr = np.asarray(x, dtype=float)
    a, b, c, d = fs.a, fs.b, fs.c, fs.d
    out = np.zeros_like(x_arr)
    core = (x_arr >= b) & (x_arr <= c)
    out[core] = 1.0
    if b > a:
        rise = (x_arr >= a) & (x_arr < b)
        out[rise] = (x_arr[rise] - a) / (b - a)
    if d > c:
        fall = (x_arr > c) & (x_arr <= d)
        out[fall] = (d - x_arr[fall]) / (d - c)
    if out.ndim == 0:
        return float(out)
    return out


def centroid(fs: TrapezoidalFuzzySet) -> float:
    """Centre of area of the membership function, in closed form."""
    a, b, c, d = fs.a, fs.b, fs.c, fs.d
    denom = 3.0 * ((c + d) - (a + b))
    if denom <= 0.0:
        raise ZeroArea(f"trapezoid {fs} has zero area; use its point value {a}")
    num = (c * c + c * d + d * d) - (a * a + a * b + b * b)
    # Clamp against rounding so the result always lies in the support.
    return float(min(max(num / denom, a), d))


def mean_of_max(fs: TrapezoidalFuzzySet) -> float:
    return 0.5 * (fs.b + fs.c)


DEFUZZIFIERS: dict[str, Callable[[TrapezoidalFuzzySet], float]] = {
    "centroid": centroid,
    "mom": mean_of_max,
}


def defuzzify(fs: TrapezoidalFuzzySet, method: str | Callable = "centroid") -> float:
    fn = DEFUZZIFIERS[method] if isinstance(method, str) else method
    return fn(fs)


class FuzzyVector(Sequence):
    """One fuzzy set per node, indexed 0..n-1."""

    def __init__(self, entries: Iterable[TrapezoidalFuzzySet]):
        self.entries = tuple(entries)
        if not self.entries:
            raise ValueError("a fuzzy vector needs at least one entry")
        for i, fs in enumerate(self.entries):
            if not isinstance(fs, TrapezoidalFuzzySet):
                raise TypeError(f"entry {i} is not a TrapezoidalFuzzySet")
            if fs.d <= 0:
                raise ValueError(f"entry {i} has support ending at {fs.d} <= 0")

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __repr__(self):
        return f"FuzzyVector({list(self.entries)!r})"

    def defuzzified(self, method="centroid") -> np.ndarray:
        return np.array([defuzzify(fs, method) for fs in self.entries])


def _read_rows(path):
    path = Path(path)
    with path.open(newline="") as fh:
        rows = [(i, row) for i, row in enumerate(csv.reader(fh), start=1)
                if row and any(cell.strip() for cell in row)]
    if not rows:
        raise ParseError("file is empty", path)
    return path, rows


def _parse_trapezoid(cells, path, lineno):
    try:
        vals = [float(v) for v in cells]
    except ValueError:
        raise ParseError(f"non-numeric trapezoid coordinates {cells}", path, lineno) from None
    try:
        return TrapezoidalFuzzySet(*vals)
    except ValueError as exc:
        raise ParseError(str(exc), path, lineno) from None


def read_linguistic_terms(path) -> dict[str, TrapezoidalFuzzySet]:
    """Read a ``label,a,b,c,d`` dictionary of named trapezoids."""
    path, rows = _read_rows(path)
    lineno, header = rows[0]
    if [h.strip() for h in header] != ["label", "a", "b", "c", "d"]:
        raise ParseError("expected header 'label,a,b,c,d'", path, lineno)
    terms = {}
    for lineno, row in rows[1:]:
        if len(row) != 5:
            raise ParseError(f"expected 5 columns, got {len(row)}", path, lineno)
        terms[row[0].strip()] = _parse_trapezoid(row[1:], path, lineno)
    return terms


def read_fuzzy_vector(path, terms: dict[str, TrapezoidalFuzzySet] | None = None) -> FuzzyVector:
    """Read a fuzzy vector from CSV.

    Two layouts are accepted: ``node,a,b,c,d`` with explicit coordinates, or
    ``node,label`` referring to ``terms`` (see :func:`read_linguistic_terms`).
    Node ids are 0-based and must cover ``0..n-1`` exactly once.
    """
    path, rows = _read_rows(path)
    lineno, header = rows[0]
    header = [h.strip() for h in header]
    if header == ["node", "a", "b", "c", "d"]:
        labelled = False
    elif header == ["node", "label"]:
        if terms is None:
            raise ParseError("'node,label' rows need a linguistic term dictionary", path, lineno)
        labelled = True
    else:
        raise ParseError("expected header 'node,a,b,c,d' or 'node,label'", path, lineno)

    by_node = {}
    for lineno, row in rows[1:]:
        if len(row) != len(header):
            raise ParseError(f"expected {len(header)} columns, got {len(row)}", path, lineno)
        try:
            node = int(row[0])
        except ValueError:
            raise ParseError(f"bad node id {row[0]!r}", path, lineno) from None
        if node in by_node:
            raise ParseError(f"node {node} listed twice", path, lineno)
        if labelled:
            label = row[1].strip()
            if label not in terms:
                raise ParseError(f"unknown linguistic label {label!r}", path, lineno)
            by_node[node] = terms[label]
        else:
            by_node[node] = _parse_trapezoid(row[1:], path, lineno)
    if not by_node:
        raise ParseError("no node rows", path)
    n = len(by_node)
    if sorted(by_node) != list(range(n)):
        raise ParseError(f"node ids must be exactly 0..{n - 1}", path)
    try:
        return FuzzyVector(by_node[i] for i in range(n))
    except ValueError as exc:
        raise ParseError(str(exc), path) from None
