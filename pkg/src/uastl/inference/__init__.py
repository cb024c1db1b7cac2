"""Formula inference from labeled interval trajectories and its sampling baselines."""
from .algorithms import classification_rate, tli_rs, tli_ua
from .params import InferenceParams, InferenceResult, StopReason
from .sampling import sample_dataset, sample_trajectories
from .separability import (
    NotSeparable,
    check_separable,
    constructive_classifier,
    dataset_separable,
    pair_classifier,
    widest_gap,
)
from .trees import (
    DecisionTree,
    Inner,
    Leaf,
    print_tree,
    route,
    tli_rs_dt,
    tli_ua_dt,
    tree_classify,
    tree_depth,
    tree_leaves,
    tree_to_formula,
)

__all__ = [
    "DecisionTree", "InferenceParams", "InferenceResult", "Inner", "Leaf", "NotSeparable", "StopReason",
    "check_separable", "classification_rate", "constructive_classifier", "dataset_separable",
    "pair_classifier", "print_tree", "route", "sample_dataset", "sample_trajectories", "tli_rs",
    "tli_rs_dt", "tli_ua", "tli_ua_dt", "tree_classify", "tree_depth", "tree_leaves", "tree_to_formula",
    "widest_gap",
]
