import json

import numpy as np
import pytest

from sugeno_louvain.exceptions import ConfigError
from sugeno_louvain.experiment import (
    CSV_HEADER,
    CellResult,
    ExperimentConfig,
    format_table,
    results_to_csv,
    run_experiment,
    run_replicate,
)


def test_config_defaults_and_schema():
    cfg = ExperimentConfig(model=1, seed=0)
    assert cfg.networks == list(range(1, 10)) and cfg.cases == list(range(1, 10))
    assert cfg.replicates == 100 and cfg.gamma == 0.0 and cfg.jobs == 1
    for bad in ({"model": 5, "seed": 0}, {"model": 1}, {"model": 1, "seed": 0, "gamma": 2},
                {"model": 1, "seed": 0, "networks": [10]}, {"model": 1, "seed": 0, "extra": 1},
                {"model": 1, "seed": 0, "replicates": 0}, {"model": 1, "seed": -1}):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict(bad)
    with pytest.raises(ConfigError):
        ExperimentConfig(model=1, seed=0, cases=[0])


def test_config_from_json(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"model": 2, "seed": 3, "networks": [1], "cases": [9], "replicates": 4}))
    cfg = ExperimentConfig.from_json(path)
    assert (cfg.model, cfg.seed, cfg.networks, cfg.cases, cfg.replicates) == (2, 3, [1], [9], 4)
    path.write_text("{not json")
    with pytest.raises(ConfigError):
        ExperimentConfig.from_json(path)


def test_replicate_is_deterministic():
    a = run_replicate(1, 1, 1, 0, seed=7, gamma=0.0)
    b = run_replicate(1, 1, 1, 0, seed=7, gamma=0.0)
    assert a[0] == b[0] == 1.0


def test_prefix_stability():
    small = run_experiment(ExperimentConfig(model=2, seed=11, networks=[9], cases=[9], replicates=2))
    large = run_experiment(ExperimentConfig(model=2, seed=11, networks=[9], cases=[9], replicates=4))
    assert large[0].scores[:2] == small[0].scores


def test_parallel_matches_serial():
    kw = dict(model=4, seed=5, networks=[1, 9], cases=[9], replicates=2)
    serial = run_experiment(ExperimentConfig(**kw))
    parallel = run_experiment(ExperimentConfig(jobs=2, **kw))
    assert [c.scores for c in serial] == [c.scores for c in parallel]


def test_csv_and_table(tmp_path):
    cells = [CellResult(1, 1, [1.0, 0.5], 0.123456), CellResult(1, 9, [1.0], 0.2)]
    text = results_to_csv(cells, tmp_path / "r.csv")
    lines = text.splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    assert lines[1] == "1,1,0.750000,0.250000,2,0.123"
    assert (tmp_path / "r.csv").read_text() == text
    assert results_to_csv(cells, timing=False).splitlines()[2] == "1,9,1.000000,0.000000,1,0.000"
    table = format_table(cells)
    assert "Case 9" in table and "0.7500" in table
    assert np.isclose(cells[0].std, 0.25)
