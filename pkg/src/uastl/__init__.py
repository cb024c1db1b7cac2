"""Uncertainty-aware inference of signal temporal logic formulas.

Data are labeled interval trajectories (per-timestep boxes); formulas are
syntax DAGs; inference maximizes the worst-case robustness margin over a
dataset, one formula size at a time.
"""
from .formula import (
    Always,
    And,
    Eventually,
    Formula,
    Implies,
    Not,
    Or,
    Predicate,
    TimeWindow,
    Top,
    Until,
    bottom,
    formula_size,
    print_formula,
)
from .grammar import PredicateFamily, PredicateGrammar, default_grammar, single_predicate_grammar
from .model import Interval, IntervalTrajectory, Label, LabeledDataset, PointDataset, Trajectory
from .objective import objective_dataset, objective_single, split_interval, split_point
from .parser import FormulaSyntaxError, parse_formula
from .semantics import (
    BEST,
    WORST,
    RobustnessView,
    eval_strong,
    eval_weak,
    interval_robustness,
    robustness,
)

__version__ = "0.1.0"
