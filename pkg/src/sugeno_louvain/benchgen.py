"""Seeded planted-partition benchmarks with low/high soft node information.

An instance has a block-model adjacency ``A`` and ``r`` vectors of
defuzzified values, one per planted synergy group: members of group ``l``
draw a *high* value in vector ``l``, everybody else a *low* one. The
synergy matrix ``F`` is built from those vectors with the 1-additive
Shapley shares.

Random streams come from :class:`numpy.random.SeedSequence`. An instance is
fully determined by ``(seed, stream)``; experiments use
``stream = (model, network, case, replicate)`` so every replicate has its own
independent substream regardless of how many replicates are run.
"""
from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .exceptions import ConfigError, ParseError, UnknownModel
from .graph import Partition, WeightedGraph, read_edge_list, read_partition, write_edge_list, write_partition

__all__ = [
    "NETWORKS",
    "CASES",
    "MODELS",
    "ModelPreset",
    "BenchmarkSpec",
    "BenchmarkInstance",
    "make_rng",
    "model_preset",
    "low_cdf",
    "low_ppf",
    "high_cdf",
    "high_ppf",
    "sample_low",
    "sample_high",
    "generate_adjacency",
    "generate_vectors",
    "matrix_from_vectors",
    "build_benchmark_F",
    "generate_instance",
    "write_bundle",
    "read_bundle",
    "read_vectors_csv",
    "write_vectors_csv",
]

# network id -> (alpha, beta): intra- and inter-block edge probabilities
NETWORKS: dict[int, tuple[float, float]] = {
    1: (0.45, 0.016),
    2: (0.4, 0.033),
    3: (0.35, 0.05),
    4: (0.325, 0.058),
    5: (0.3, 0.066),
    6: (0.275, 0.075),
    7: (0.25, 0.083),
    8: (0.225, 0.091),
    9: (0.2, 0.1),
}

# case id -> (a, b, c, d): low shape (a, b) and high shape (c, d)
CASES: dict[int, tuple[float, float, float, float]] = {
    1: (0.0, 0.1, 0.9, 1.0),
    2: (0.0, 0.1, 0.8, 0.9),
    3: (0.0, 0.1, 0.7, 0.8),
    4: (0.1, 0.2, 0.9, 1.0),
    5: (0.1, 0.2, 0.8, 0.9),
    6: (0.1, 0.2, 0.7, 0.8),
    7: (0.2, 0.3, 0.9, 1.0),
    8: (0.2, 0.3, 0.8, 0.9),
    9: (0.2, 0.3, 0.7, 0.8),
}


@dataclass(frozen=True)
class ModelPreset:
    model: int
    a_sizes: tuple[int, ...]
    f_sizes: tuple[int, ...]


MODELS: dict[int, ModelPreset] = {
    1: ModelPreset(1, (128, 128), (64, 64, 64, 64)),
    2: ModelPreset(2, (64, 64, 64, 64), (32,) * 8),
    3: ModelPreset(3, (128, 128), (43, 42, 43, 96, 32)),
    4: ModelPreset(4, (64, 64, 64, 64), (24, 40, 64, 21, 22, 21, 32, 32)),
}


def model_preset(model: int) -> ModelPreset:
    try:
        return MODELS[int(model)]
    except (KeyError, ValueError, TypeError):
        raise UnknownModel(f"unknown benchmark model {model!r}; choose from {sorted(MODELS)}") from None


def make_rng(seed: int, stream: Sequence[int] = ()) -> np.random.Generator:
    """PCG64 generator for substream ``stream`` of master ``seed``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=tuple(stream))))


@dataclass(frozen=True)
class BenchmarkSpec:
    a_sizes: tuple[int, ...]
    f_sizes: tuple[int, ...]
    alpha: float
    beta: float
    a: float
    b: float
    c: float
    d: float
    seed: int
    stream: tuple[int, ...] = ()
    model: int | None = None
    network: int | None = None
    case: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "a_sizes", tuple(int(s) for s in self.a_sizes))
        object.__setattr__(self, "f_sizes", tuple(int(s) for s in self.f_sizes))
        object.__setattr__(self, "stream", tuple(int(s) for s in self.stream))
        if sum(self.a_sizes) != sum(self.f_sizes):
            raise ConfigError(f"adjacency sizes sum to {sum(self.a_sizes)}, F sizes to {sum(self.f_sizes)}")
        if any(s <= 0 for s in self.a_sizes + self.f_sizes):
            raise ConfigError("community sizes must be positive")
        for name in ("alpha", "beta"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ConfigError(f"{name} must lie in [0, 1]")
        if not (0.0 <= self.a < self.b <= 1.0):
            raise ConfigError(f"low shape needs 0 <= a < b <= 1, got a={self.a}, b={self.b}")
        if not (0.0 <= self.c < self.d <= 1.0):
            raise ConfigError(f"high shape needs 0 <= c < d <= 1, got c={self.c}, d={self.d}")
        if not self.b < self.c:
            raise ConfigError("low and high supports overlap (need b < c)")

    @property
    def n(self) -> int:
        return sum(self.a_sizes)

    @classmethod
    def from_tables(cls, model: int, network: int, case: int, seed: int,
                    stream: Sequence[int] = ()) -> "BenchmarkSpec":
        preset = model_preset(model)
        if network not in NETWORKS:
            raise ConfigError(f"network must be one of {sorted(NETWORKS)}, got {network}")
        if case not in CASES:
            raise ConfigError(f"case must be one of {sorted(CASES)}, got {case}")
        alpha, beta = NETWORKS[network]
        a, b, c, d = CASES[case]
        return cls(preset.a_sizes, preset.f_sizes, alpha, beta, a, b, c, d, seed,
                   tuple(stream), preset.model, network, case)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["n"] = self.n
        for key in ("a_sizes", "f_sizes", "stream"):
            out[key] = list(out[key])
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "BenchmarkSpec":
        data = {k: v for k, v in data.items() if k != "n"}
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None


# -- samplers ---------------------------------------------------------------
# Low: density 2/(a+b) on [0, a], falling linearly to 0 at b.
# High: density rising linearly from 0 at c to 2/((1-c)+(1-d)) at d, flat on [d, 1].

def low_cdf(x, a: float, b: float):
    x = np.clip(np.asarray(x, dtype=float), 0.0, b)
    flat = 2.0 * x / (a + b)
    slope = 2.0 * a / (a + b) + ((x - b) ** 2 - (a - b) ** 2) / ((a + b) * (a - b))
    return np.where(x <= a, flat, slope)


def low_ppf(u, a: float, b: float):
    u = np.asarray(u, dtype=float)
    knee = 2.0 * a / (a + b)
    flat = (a + b) * u / 2.0
    radicand = (u - knee) * (a + b) * (a - b) + (a - b) ** 2
    slope = b - np.sqrt(np.maximum(radicand, 0.0))
    return np.where(u <= knee, flat, slope)


def high_cdf(x, c: float, d: float):
    x = np.clip(np.asarray(x, dtype=float), c, 1.0)
    s = (1.0 - c) + (1.0 - d)
    rise = (x - c) ** 2 / (s * (d - c))
    flat = ((x - d) + (x - c)) / s
    return np.where(x <= d, rise, flat)


def high_ppf(u, c: float, d: float):
    u = np.asarray(u, dtype=float)
    s = (1.0 - c) + (1.0 - d)
    knee = (d - c) / s
    rise = c + np.sqrt(u * (d - c) * s)
    flat = (u * s + c + d) / 2.0
    return np.where(u <= knee, rise, flat)


def _uniform(rng: np.random.Generator, size=None):
    # (0, 1] keeps low draws strictly positive
    return 1.0 - rng.random(size)


def sample_low(a: float, b: float, rng: np.random.Generator, size=None):
    out = low_ppf(_uniform(rng, size), a, b)
    return float(out) if size is None else out


def sample_high(c: float, d: float, rng: np.random.Generator, size=None):
    out = high_ppf(_uniform(rng, size), c, d)
    return float(out) if size is None else out


# -- instance generation ----------------------------------------------------

def generate_adjacency(sizes: Sequence[int], alpha: float, beta: float,
                       rng: np.random.Generator) -> WeightedGraph:
    """Binary block-model graph: each unordered pair is drawn once, with
    probability ``alpha`` inside a block and ``beta`` across blocks."""
    block = np.repeat(np.arange(len(sizes)), sizes)
    n = len(block)
    prob = np.where(block[:, None] == block[None, :], alpha, beta)
    draws = rng.random((n, n))
    upper = np.triu(draws < prob, k=1)
    return WeightedGraph((upper | upper.T).astype(float), copy=False)


def generate_vectors(f_sizes: Sequence[int], a: float, b: float, c: float, d: float,
                     rng: np.random.Generator) -> np.ndarray:
    """``r x n`` defuzzified values: high for members of group ``l`` in row ``l``, low elsewhere."""
    r = len(f_sizes)
    block = np.repeat(np.arange(r), f_sizes)
    u = _uniform(rng, (r, len(block)))
    high = block[None, :] == np.arange(r)[:, None]
    return np.where(high, high_ppf(u, c, d), low_ppf(u, a, b))


def matrix_from_vectors(vectors: np.ndarray) -> WeightedGraph:
    """Max over rows of the min-of-absolute-Shapley-marginal matrices."""
    v = np.asarray(vectors, dtype=float)
    total = v.sum(axis=1, keepdims=True)
    share = v / total
    # [l, i, j]: share of i in row l once j is removed
    share_without = v[:, :, None] / (total[:, :, None] - v[:, None, :])
    gap = np.abs(share[:, :, None] - share_without)
    per_row = np.minimum(gap, gap.transpose(0, 2, 1))
    f = per_row.max(axis=0)
    np.fill_diagonal(f, 0.0)
    return WeightedGraph(f, copy=False)


def build_benchmark_F(f_sizes, a, b, c, d, rng) -> WeightedGraph:
    return matrix_from_vectors(generate_vectors(f_sizes, a, b, c, d, rng))


@dataclass
class BenchmarkInstance:
    spec: BenchmarkSpec
    adjacency: WeightedGraph
    vectors: np.ndarray
    truth_a: Partition = field(repr=False)
    truth_f: Partition = field(repr=False)

    @property
    def synergy(self) -> WeightedGraph:
        return matrix_from_vectors(self.vectors)


def generate_instance(spec: BenchmarkSpec) -> BenchmarkInstance:
    """Adjacency first, then the vectors, from one generator."""
    rng = make_rng(spec.seed, spec.stream)
    adjacency = generate_adjacency(spec.a_sizes, spec.alpha, spec.beta, rng)
    vectors = generate_vectors(spec.f_sizes, spec.a, spec.b, spec.c, spec.d, rng)
    return BenchmarkInstance(spec, adjacency, vectors,
                             Partition.from_sizes(spec.a_sizes), Partition.from_sizes(spec.f_sizes))


# -- bundle on disk ---------------------------------------------------------

BUNDLE_FILES = ("adjacency.edges", "vectors.csv", "truth_A.part", "truth_F.part", "spec.json")


def write_vectors_csv(vectors: np.ndarray, path) -> None:
    """Header row of node ids, then one row of defuzzified values per characteristic."""
    v = np.atleast_2d(np.asarray(vectors, dtype=float))
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(range(v.shape[1]))
        for row in v:
            writer.writerow(repr(float(x)) for x in row)


def read_vectors_csv(path) -> np.ndarray:
    path = Path(path)
    with path.open(newline="") as fh:
        rows = [(i, r) for i, r in enumerate(csv.reader(fh), start=1) if r and any(x.strip() for x in r)]
    if not rows:
        raise ParseError("vectors file is empty", path)
    lineno, header = rows[0]
    try:
        ids = [int(h) for h in header]
    except ValueError:
        raise ParseError("header must list node ids 0..n-1", path, lineno) from None
    if ids != list(range(len(ids))):
        raise ParseError("header must list node ids 0..n-1 in order", path, lineno)
    if len(rows) < 2:
        raise ParseError("no characteristic rows after the header", path)
    out = []
    for lineno, row in rows[1:]:
        if len(row) != len(ids):
            raise ParseError(f"expected {len(ids)} values, got {len(row)}", path, lineno)
        try:
            vals = [float(x) for x in row]
        except ValueError:
            raise ParseError("non-numeric value", path, lineno) from None
        if not all(v > 0 and np.isfinite(v) for v in vals):
            raise ParseError("defuzzified values must be finite and > 0", path, lineno)
        out.append(vals)
    return np.array(out)


def write_bundle(instance: BenchmarkInstance, directory) -> Path:
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    write_edge_list(instance.adjacency, out / "adjacency.edges")
    write_vectors_csv(instance.vectors, out / "vectors.csv")
    write_partition(instance.truth_a, out / "truth_A.part")
    write_partition(instance.truth_f, out / "truth_F.part")
    (out / "spec.json").write_text(json.dumps(instance.spec.to_dict(), indent=2) + "\n")
    return out


def read_bundle(directory) -> BenchmarkInstance:
    src = Path(directory)
    spec = BenchmarkSpec.from_dict(json.loads((src / "spec.json").read_text()))
    adjacency = read_edge_list(src / "adjacency.edges", n=spec.n)
    return BenchmarkInstance(spec, adjacency, read_vectors_csv(src / "vectors.csv"),
                             read_partition(src / "truth_A.part"), read_partition(src / "truth_F.part"))
