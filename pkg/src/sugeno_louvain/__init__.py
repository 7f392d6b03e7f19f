"""Community detection on graphs with fuzzy node information.

Sugeno lambda-measures built from defuzzified fuzzy vectors are turned into
Shapley-based synergy matrices, which steer a two-matrix Louvain search.
"""
from .benchgen import BenchmarkSpec, generate_instance, model_preset
from .exceptions import SugenoLouvainError
from .fuzzy import FuzzyVector, TrapezoidalFuzzySet, defuzzify, membership
from .graph import MEFVFG, Partition, WeightedGraph, contract
from .louvain import (
    DuoLouvain,
    FuzzySugenoLouvain,
    additive_sugeno_louvain,
    duo_louvain,
    fuzzy_sugeno_louvain,
    modularity,
)
from .measure import SugenoLambdaMeasure, build_measure, coalition_value, shapley_additive, shapley_exact
from .metrics import entropy, nmi
from .synergy import SynergyTransformer, aggregate_matrices, combine, synergy_matrix_additive, synergy_matrix_general

__version__ = "0.1.0"
