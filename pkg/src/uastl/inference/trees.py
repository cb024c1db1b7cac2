"""Decision trees over STL formulas and the two tree-growing algorithms."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

from ..formula import Formula, Not, Top, bottom, conjunction, disjunction, print_formula
from ..model import IntervalTrajectory, Label, LabeledDataset, PointDataset, Trajectory
from ..objective import averaged_margin, split_interval, split_point
from ..semantics import eval_strong, interval_robustness_pair
from .algorithms import tli_rs, tli_ua
from .params import InferenceParams


@dataclass(frozen=True)
class Leaf:
    """``⊤`` (value True) or ``⊥`` leaf with the label counts it was built from."""

    value: bool
    positives: int = 0
    negatives: int = 0

    @classmethod
    def of(cls, data) -> "Leaf":
        pos, neg = data.count(Label.POS), data.count(Label.NEG)
        # majority label; a tie is labeled false
        return cls(pos > neg, pos, neg)


@dataclass(frozen=True)
class Inner:
    """Accepted entries go to ``left`` (solid edge), rejected ones to ``right`` (dashed)."""

    formula: Formula
    left: "DecisionTree"
    right: "DecisionTree"

    def __post_init__(self):
        f = self.formula
        if isinstance(f, Top) or (isinstance(f, Not) and isinstance(f.child, Top)):
            raise ValueError("inner node formula must be nontrivial")


DecisionTree = Union[Leaf, Inner]


def tree_depth(tree: DecisionTree) -> int:
    if isinstance(tree, Leaf):
        return 0
    return 1 + max(tree_depth(tree.left), tree_depth(tree.right))


def tree_leaves(tree: DecisionTree) -> list[Leaf]:
    if isinstance(tree, Leaf):
        return [tree]
    return tree_leaves(tree.left) + tree_leaves(tree.right)


def tree_to_formula(tree: DecisionTree) -> Formula:
    """Disjunction over root-to-⊤ paths of the path conjunctions.

    A node's formula enters a path as is after a solid edge and negated after
    a dashed one. A tree without ⊤ leaves gives ⊥.
    """
    paths: list[Formula] = []

    def walk(node: DecisionTree, path: list[Formula]):
        if isinstance(node, Leaf):
            if node.value:
                paths.append(conjunction(path))
            return
        walk(node.left, path + [node.formula])
        walk(node.right, path + [Not(node.formula)])

    walk(tree, [])
    return disjunction(paths) if paths else bottom()


def accepts_interval(itraj: IntervalTrajectory, phi: Formula) -> bool:
    """Routing rule of the interval trees: averaged margin strictly positive."""
    return averaged_margin(*interval_robustness_pair(itraj, phi, 0)) > 0


def accepts_point(traj: Trajectory, phi: Formula) -> bool:
    return eval_strong(traj, phi, 0)


def route(tree: DecisionTree, entry, accepts: Callable | None = None) -> Leaf:
    """Leaf reached by ``entry`` when following the split rule from the root."""
    if accepts is None:
        accepts = accepts_interval if isinstance(entry, IntervalTrajectory) else accepts_point
    node = tree
    while isinstance(node, Inner):
        node = node.left if accepts(entry, node.formula) else node.right
    return node


def tree_classify(tree: DecisionTree, entry) -> bool:
    return route(tree, entry).value


def _grow(data, params, backend, infer, split, depth: int, trace) -> DecisionTree:
    if not data:
        raise ValueError("cannot grow a tree on an empty dataset")
    if params.max_depth is not None and depth >= params.max_depth:
        return Leaf.of(data)
    res = infer(data, params, backend)
    if trace is not None:
        trace.append(res)
    acc, rej = split(data, res.formula)
    if not acc or not rej:
        return Leaf.of(data)
    left = _grow(acc, params, backend, infer, split, depth + 1, trace)
    right = _grow(rej, params, backend, infer, split, depth + 1, trace)
    return Inner(res.formula, left, right)


def tli_ua_dt(data: LabeledDataset, params: InferenceParams | None = None, backend=None, trace: list | None = None) -> DecisionTree:
    """Tree of uncertainty-aware formulas, split on the averaged margin.

    ``trace``, when given, collects the result of every inner inference call.
    """
    return _grow(data, params or InferenceParams(), backend, tli_ua, split_interval, 0, trace)


def tli_rs_dt(data: PointDataset, params: InferenceParams | None = None, backend=None, trace: list | None = None) -> DecisionTree:
    """Tree of sampling-baseline formulas, split on strong satisfaction."""
    return _grow(data, params or InferenceParams(), backend, tli_rs, split_point, 0, trace)


def print_tree(tree: DecisionTree, depth: int = 0, edge: str = "") -> str:
    """Indented listing; ``+`` marks solid (accept) edges, ``-`` dashed ones."""
    pad = "  " * depth + edge
    if isinstance(tree, Leaf):
        return f"{pad}{'true' if tree.value else 'false'} (+{tree.positives}/-{tree.negatives})"
    return "\n".join([
        f"{pad}{print_formula(tree.formula)}",
        print_tree(tree.left, depth + 1, "+ "),
        print_tree(tree.right, depth + 1, "- "),
    ])
