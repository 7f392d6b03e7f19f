"""Command line entry point: ``sugeno-louvain {gen,detect,nmi,experiment}``.

Exit codes: 0 success, 1 runtime error, 2 usage or configuration error.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import benchgen
from .exceptions import ConfigError, ParseError, SugenoLouvainError, UnknownModel
from .fuzzy import read_fuzzy_vector, read_linguistic_terms
from .graph import Partition, contract, read_edge_list, read_partition, write_partition
from .louvain import duo_louvain, modularity
from .measure import build_measure
from .metrics import nmi
from .synergy import aggregate_matrices, combine, synergy_matrix_additive, synergy_matrix_general

log = logging.getLogger("sugeno_louvain")

EDGE_LIST_HELP = """\
edge list (--graph): whitespace separated 'u v [w]', 0-based ids, '#' comments
    # nodes: 4
    0 1
    1 2 0.5"""

VECTORS_HELP = """\
defuzzified vectors (--vectors): CSV, header of node ids, one row per characteristic
    0,1,2,3
    0.95,0.91,0.05,0.12
    0.08,0.02,0.97,0.93"""

FUZZY_HELP = """\
fuzzy vector (--fuzzy): CSV 'node,a,b,c,d' trapezoids, or 'node,label' with --terms
    node,a,b,c,d
    0,0,0,10,25
    1,60,70,80,100
linguistic terms (--terms): CSV 'label,a,b,c,d'
    label,a,b,c,d
    VL,0,0,10,25
    H,60,70,80,100"""

PARTITION_HELP = """\
partition file: 'node community' per line, 0-based node ids
    0 0
    1 0
    2 1"""

CONFIG_HELP = """\
config (--config): JSON object; model and seed required
    {"model": 1, "seed": 7,
     "networks": [1, 5, 9], "cases": [1, 5, 9],
     "replicates": 20, "gamma": 0.0, "output": "table3.csv", "jobs": 1}
output CSV header: network,case,mean_nmi,std_nmi,replicates,seconds"""


class UsageError(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    fmt = argparse.RawDescriptionHelpFormatter
    parser = argparse.ArgumentParser(
        prog="sugeno-louvain",
        description="Community detection on graphs with fuzzy node information.",
        formatter_class=fmt)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="write a benchmark instance bundle", formatter_class=fmt,
                         epilog="bundle files: " + ", ".join(benchgen.BUNDLE_FILES) + "\n\n"
                         + EDGE_LIST_HELP + "\n" + VECTORS_HELP + "\n" + PARTITION_HELP)
    gen.add_argument("--model", type=int, required=True, help="benchmark model 1-4")
    gen.add_argument("--network", type=int, required=True, help="adjacency parameter column 1-9")
    gen.add_argument("--case", type=int, required=True, help="low/high shape column 1-9")
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--replicate", type=int, default=None,
                     help="use the experiment substream of this replicate index")
    gen.add_argument("--out", required=True, help="output directory")

    det = sub.add_parser("detect", help="detect communities", formatter_class=fmt,
                         epilog=EDGE_LIST_HELP + "\n" + VECTORS_HELP + "\n" + FUZZY_HELP)
    det.add_argument("--graph", required=True, help="edge list file")
    src = det.add_mutually_exclusive_group()
    src.add_argument("--vectors", help="CSV of defuzzified vectors")
    src.add_argument("--fuzzy", action="append", help="fuzzy vector CSV (repeat per characteristic)")
    det.add_argument("--terms", help="linguistic term dictionary for labelled --fuzzy files")
    det.add_argument("--p", type=float, action="append",
                     help="measure parameter in (0, 1] (one value, or one per characteristic); "
                          "values below 1 enumerate Shapley values exactly, n <= 16")
    det.add_argument("--defuzz", choices=["centroid", "mom"], default="centroid")
    det.add_argument("--gamma", type=float, default=0.0)
    det.add_argument("--phi", choices=["min", "max", "mean"], default="min")
    det.add_argument("--Phi", dest="aggregation", choices=["min", "max", "mean"], default="max")
    det.add_argument("--seed", type=int, required=True)
    det.add_argument("--reshuffle", action="store_true", help="new node order on every pass")
    det.add_argument("--out", required=True, help="partition output file")
    det.add_argument("--dot", help="write the contracted community graph in DOT format")

    sc = sub.add_parser("nmi", help="NMI between two partition files", formatter_class=fmt,
                        epilog=PARTITION_HELP)
    sc.add_argument("first")
    sc.add_argument("second")

    exp = sub.add_parser("experiment", help="replicated benchmark table", formatter_class=fmt,
                         epilog=CONFIG_HELP)
    exp.add_argument("--config", help="JSON config")
    exp.add_argument("--model", type=int)
    exp.add_argument("--networks", type=int, nargs="+")
    exp.add_argument("--cases", type=int, nargs="+")
    exp.add_argument("--replicates", type=int)
    exp.add_argument("--gamma", type=float)
    exp.add_argument("--seed", type=int)
    exp.add_argument("--jobs", type=int)
    exp.add_argument("--out", dest="output", help="results CSV (default: config output or stdout)")
    exp.add_argument("--timing", action="store_true",
                     help="fill the seconds column with wall-clock time (breaks byte-identical reruns)")
    return parser


def _cmd_gen(args) -> int:
    stream = () if args.replicate is None else (args.model, args.network, args.case, args.replicate)
    spec = benchgen.BenchmarkSpec.from_tables(args.model, args.network, args.case, args.seed, stream)
    out = benchgen.write_bundle(benchgen.generate_instance(spec), args.out)
    print(f"wrote {len(benchgen.BUNDLE_FILES)} files to {out}")
    return 0


def _load_rows(args):
    if args.vectors:
        return benchgen.read_vectors_csv(args.vectors)
    if args.fuzzy:
        terms = read_linguistic_terms(args.terms) if args.terms else None
        vecs = [read_fuzzy_vector(path, terms) for path in args.fuzzy]
        return np.array([v.defuzzified(args.defuzz) for v in vecs])
    return None


def _write_dot(a, part: Partition, path) -> None:
    coarse = contract(a, part)
    sizes = part.sizes()
    lines = ["graph communities {"]
    for c, size in enumerate(sizes.tolist()):
        lines.append(f'  c{c} [label="C{c} ({size})"];')
    iu, ju = np.nonzero(np.triu(coarse.weights, k=1))
    for u, v in zip(iu.tolist(), ju.tolist()):
        lines.append(f"  c{u} -- c{v} [weight={coarse.weights[u, v]:g}];")
    lines.append("}")
    Path(path).write_text("\n".join(lines) + "\n")


def _cmd_detect(args) -> int:
    if not 0.0 <= args.gamma <= 1.0:
        raise UsageError(f"--gamma must lie in [0, 1], got {args.gamma}")
    rows = _load_rows(args)
    n = rows.shape[1] if rows is not None else None
    a = read_edge_list(args.graph, n=n)
    if rows is not None and rows.shape[1] != a.n:
        raise ParseError(f"vectors describe {rows.shape[1]} nodes but the graph has {a.n}", args.graph)

    if args.gamma == 1.0 or rows is None:
        if rows is not None:
            log.warning("gamma = 1 uses the adjacency alone; node vectors are ignored")
        elif args.gamma < 1.0:
            raise UsageError("node information (--vectors or --fuzzy) is required when gamma < 1")
        m = a
    else:
        ps = args.p or [1.0]
        if len(ps) == 1:
            ps = ps * len(rows)
        if len(ps) != len(rows):
            raise UsageError(f"got {len(ps)} --p values for {len(rows)} characteristics")
        mats = []
        for row, p in zip(rows, ps):
            if p == 1.0:
                mats.append(synergy_matrix_additive(row, args.phi))
            else:
                mats.append(synergy_matrix_general(build_measure(row, p=p), args.phi))
        m = combine(a, aggregate_matrices(mats, args.aggregation), args.gamma)

    part = duo_louvain(a, m, args.seed, reshuffle=args.reshuffle)
    write_partition(part, args.out)
    if args.dot:
        _write_dot(a, part, args.dot)
    print(f"communities: {part.n_communities}  modularity: {modularity(m, part):.6f}")
    return 0


def _cmd_nmi(args) -> int:
    x, y = read_partition(args.first), read_partition(args.second)
    print(f"{nmi(x, y):.6f}")
    return 0


def _cmd_experiment(args) -> int:
    from .experiment import ExperimentConfig, format_table, results_to_csv, run_experiment

    data = {}
    if args.config:
        try:
            import json

            data = json.loads(Path(args.config).read_text())
        except (OSError, ValueError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("experiment config must be a JSON object")
    for key in ("model", "networks", "cases", "replicates", "gamma", "seed", "jobs", "output"):
        value = getattr(args, key)
        if value is not None:
            data[key] = value
    if "seed" not in data:
        raise UsageError("an explicit seed is required (--seed or config 'seed')")
    cfg = ExperimentConfig.from_dict(data)

    def progress(task, outcome):
        log.info("model %d network %d case %d replicate %d: nmi=%.4f (%.2fs)", *task[:4], *outcome)

    results = run_experiment(cfg, progress=progress)
    text = results_to_csv(results, cfg.output, timing=args.timing)
    if cfg.output is None:
        sys.stdout.write(text)
    else:
        print(format_table(results), file=sys.stderr)
    return 0


COMMANDS = {"gen": _cmd_gen, "detect": _cmd_detect, "nmi": _cmd_nmi, "experiment": _cmd_experiment}


def main(argv=None) -> int:
    parser = _parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ConfigError, UnknownModel) as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (SugenoLouvainError, OSError) as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
