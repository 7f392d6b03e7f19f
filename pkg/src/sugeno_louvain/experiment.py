"""Replicated benchmark runs scored by NMI against the planted synergy groups."""
from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import jsonschema
import numpy as np

from .benchgen import CASES, MODELS, NETWORKS, BenchmarkSpec, generate_instance, make_rng
from .exceptions import ConfigError, SugenoLouvainError
from .louvain import duo_louvain
from .metrics import nmi
from .synergy import combine

__all__ = [
    "CONFIG_SCHEMA",
    "ExperimentConfig",
    "ExperimentError",
    "CellResult",
    "run_replicate",
    "run_experiment",
    "results_to_csv",
    "format_table",
]

CSV_HEADER = ("network", "case", "mean_nmi", "std_nmi", "replicates", "seconds")

CONFIG_SCHEMA = {
    "type": "object",
    "properties": {
        "model": {"type": "integer", "enum": sorted(MODELS)},
        "networks": {"type": "array", "items": {"type": "integer", "enum": sorted(NETWORKS)},
                     "minItems": 1, "uniqueItems": True},
        "cases": {"type": "array", "items": {"type": "integer", "enum": sorted(CASES)},
                  "minItems": 1, "uniqueItems": True},
        "replicates": {"type": "integer", "minimum": 1},
        "gamma": {"type": "number", "minimum": 0, "maximum": 1},
        "seed": {"type": "integer", "minimum": 0},
        "output": {"type": ["string", "null"]},
        "jobs": {"type": "integer", "minimum": 1},
    },
    "required": ["model", "seed"],
    "additionalProperties": False,
}


class ExperimentError(SugenoLouvainError, RuntimeError):
    pass


def _validate(data: dict) -> None:
    try:
        jsonschema.validate(data, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"invalid experiment config at {path}: {exc.message}") from None


@dataclass
class ExperimentConfig:
    model: int
    seed: int
    networks: list[int] = field(default_factory=lambda: sorted(NETWORKS))
    cases: list[int] = field(default_factory=lambda: sorted(CASES))
    replicates: int = 100
    gamma: float = 0.0
    output: str | None = None
    jobs: int = 1

    def __post_init__(self):
        _validate(asdict(self))

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        if not isinstance(data, dict):
            raise ConfigError("experiment config must be a JSON object")
        _validate(data)
        return cls(**data)

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: not valid JSON ({exc})") from None
        return cls.from_dict(data)


@dataclass
class CellResult:
    network: int
    case: int
    scores: list[float]
    seconds: float

    @property
    def mean(self) -> float:
        return float(np.mean(self.scores))

    @property
    def std(self) -> float:
        return float(np.std(self.scores))

    @property
    def replicates(self) -> int:
        return len(self.scores)


def run_replicate(model: int, network: int, case: int, replicate: int, seed: int, gamma: float):
    """One generated instance, one detection, one NMI. Returns ``(nmi, seconds)``."""
    start = time.perf_counter()
    stream = (model, network, case, replicate)
    inst = generate_instance(BenchmarkSpec.from_tables(model, network, case, seed, stream))
    m = combine(inst.adjacency, inst.synergy, gamma)
    # detection order gets its own substream, disjoint from the generator's
    part = duo_louvain(inst.adjacency, m, make_rng(seed, stream + (1,)))
    return nmi(part, inst.truth_f), time.perf_counter() - start


def _run_cell_task(args):
    model, network, case, replicate, seed, gamma = args
    try:
        return run_replicate(model, network, case, replicate, seed, gamma)
    except SugenoLouvainError as exc:
        raise ExperimentError(f"network {network}, case {case}, replicate {replicate}: {exc}") from exc


def run_experiment(cfg: ExperimentConfig, progress=None) -> list[CellResult]:
    """Every (network, case) cell with ``cfg.replicates`` replicates each.

    Replicate ``k`` of a cell depends only on the master seed and ``k``, so
    raising the replicate count leaves earlier replicates untouched.
    """
    tasks = [(cfg.model, net, case, rep, cfg.seed, cfg.gamma)
             for net in cfg.networks for case in cfg.cases for rep in range(cfg.replicates)]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            outcomes = list(pool.map(_run_cell_task, tasks, chunksize=max(1, cfg.replicates // 4)))
    else:
        outcomes = []
        for task in tasks:
            outcomes.append(_run_cell_task(task))
            if progress is not None:
                progress(task, outcomes[-1])

    results = []
    for k, (net, case) in enumerate((n, c) for n in cfg.networks for c in cfg.cases):
        chunk = outcomes[k * cfg.replicates:(k + 1) * cfg.replicates]
        results.append(CellResult(net, case, [s for s, _ in chunk], sum(t for _, t in chunk)))
    return results


def results_to_csv(results: list[CellResult], path=None, timing: bool = True) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for cell in results:
        seconds = cell.seconds if timing else 0.0
        writer.writerow([cell.network, cell.case, f"{cell.mean:.6f}", f"{cell.std:.6f}",
                         cell.replicates, f"{seconds:.3f}"])
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text)
    return text


def format_table(results: list[CellResult]) -> str:
    """Networks as rows, cases as columns, mean NMI to four decimals."""
    networks = sorted({c.network for c in results})
    cases = sorted({c.case for c in results})
    lookup = {(c.network, c.case): c.mean for c in results}
    lines = ["NMI".ljust(10) + "".join(f"Case {c}".rjust(9) for c in cases)]
    for net in networks:
        cells = "".join(f"{lookup[(net, c)]:9.4f}" for c in cases)
        lines.append(f"Network {net}".ljust(10) + cells)
    return "\n".join(lines)
