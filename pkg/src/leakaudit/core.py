"""Domain types: feature spaces, profile partitions, individuals and decision models."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Union

# An individual is a total Boolean assignment over the feature space.
Individual = tuple[bool, ...]

# A literal set is a partial assignment: feature index -> polarity.
LiteralSet = dict[int, bool]


class ModelError(ValueError):
    """Structural violation in a feature space, partition or model."""


@dataclass(frozen=True)
class FeatureSpace:
    names: tuple[str, ...]

    def __post_init__(self):
        if len(self.names) < 1:
            raise ModelError("feature space must contain at least one feature")
        if len(set(self.names)) != len(self.names):
            dup = sorted({n for n in self.names if self.names.count(n) > 1})
            raise ModelError(f"duplicate feature name(s): {', '.join(dup)}")

    @property
    def n(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise ModelError(f"unknown feature name: {name!r}") from None


@dataclass(frozen=True)
class ProfilePartition:
    open: frozenset[int]
    private: frozenset[int]
    sensitive: int
    protected_value: bool

    def validate(self, space: FeatureSpace) -> None:
        allf = frozenset(range(space.n))
        if self.open | self.private != allf or self.open & self.private:
            raise ModelError("open/private sets must partition the feature space")
        if self.sensitive not in self.private:
            raise ModelError("sensitive feature not private")


# ---------------------------------------------------------------------------
# Formula AST

@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Const:
    value: bool


@dataclass(frozen=True)
class Not:
    arg: "FormulaNode"


@dataclass(frozen=True)
class And:
    args: tuple["FormulaNode", ...]


@dataclass(frozen=True)
class Or:
    args: tuple["FormulaNode", ...]


FormulaNode = Union[Var, Const, Not, And, Or]


def formula_vars(node: FormulaNode) -> set[int]:
    if isinstance(node, Var):
        return {node.index}
    if isinstance(node, Const):
        return set()
    if isinstance(node, Not):
        return formula_vars(node.arg)
    return set().union(*(formula_vars(a) for a in node.args)) if node.args else set()


def eval_formula(node: FormulaNode, x: Individual) -> bool:
    if isinstance(node, Var):
        return x[node.index]
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Not):
        return not eval_formula(node.arg, x)
    if isinstance(node, And):
        return all(eval_formula(a, x) for a in node.args)
    if isinstance(node, Or):
        return any(eval_formula(a, x) for a in node.args)
    raise TypeError(node)


# ---------------------------------------------------------------------------
# Decision tree

@dataclass(frozen=True)
class TreeNode:
    test: int
    if_true: "TreeBody"
    if_false: "TreeBody"


# A leaf is a bare decision label.
TreeBody = Union[TreeNode, int]


# ---------------------------------------------------------------------------
# Threshold network

@dataclass(frozen=True)
class ThresholdUnit:
    weights: tuple[int, ...]
    bias: int

    def fires(self, inputs: tuple[bool, ...]) -> bool:
        return sum(w for w, v in zip(self.weights, inputs) if v) >= self.bias


Layer = tuple[ThresholdUnit, ...]


# ---------------------------------------------------------------------------
# Decision models

@dataclass(frozen=True)
class DecisionModel:
    labels: tuple[int, ...]

    @property
    def kind(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class FormulaModel(DecisionModel):
    root: FormulaNode = field(default=Const(False))

    @property
    def kind(self) -> str:
        return "formula"


@dataclass(frozen=True)
class TreeModel(DecisionModel):
    root: TreeBody = 0

    @property
    def kind(self) -> str:
        return "tree"


@dataclass(frozen=True)
class ThresholdModel(DecisionModel):
    layers: tuple[Layer, ...] = ()

    @property
    def kind(self) -> str:
        return "threshold"


def validate_model(model: DecisionModel, space: FeatureSpace) -> None:
    """Check structural invariants of a model against its feature space."""
    labels = model.labels
    if len(labels) < 1 or len(set(labels)) != len(labels):
        raise ModelError("labels must be a non-empty list of distinct integers")
    if any(d < 0 for d in labels):
        raise ModelError("labels must be non-negative integers")

    if isinstance(model, FormulaModel):
        if len(labels) != 2:
            raise ModelError("formula models require exactly two labels")
        bad = [i for i in formula_vars(model.root) if not 0 <= i < space.n]
        if bad:
            raise ModelError(f"formula references unknown feature index {bad[0]}")
    elif isinstance(model, TreeModel):
        _validate_tree(model.root, space, set(labels), frozenset())
    elif isinstance(model, ThresholdModel):
        _validate_threshold(model, space)
    else:
        raise ModelError(f"unknown model kind: {type(model).__name__}")


def _validate_tree(node: TreeBody, space: FeatureSpace, labels: set[int],
                   seen: frozenset[int]) -> None:
    if isinstance(node, int):
        if node not in labels:
            raise ModelError(f"tree leaf label {node} not in declared labels")
        return
    if not 0 <= node.test < space.n:
        raise ModelError(f"tree tests unknown feature index {node.test}")
    if node.test in seen:
        raise ModelError(f"feature {space.names[node.test]!r} tested twice on one path")
    seen = seen | {node.test}
    _validate_tree(node.if_true, space, labels, seen)
    _validate_tree(node.if_false, space, labels, seen)


def _validate_threshold(model: ThresholdModel, space: FeatureSpace) -> None:
    if not model.layers or any(not layer for layer in model.layers):
        raise ModelError("threshold network needs at least one non-empty layer")
    width = space.n
    for li, layer in enumerate(model.layers):
        for unit in layer:
            if len(unit.weights) != width:
                raise ModelError(
                    f"layer {li} unit expects {width} inputs, has {len(unit.weights)} weights")
        width = len(layer)
    if len(model.labels) != len(model.layers[-1]) + 1:
        raise ModelError(
            f"final layer with {len(model.layers[-1])} unit(s) requires "
            f"{len(model.layers[-1]) + 1} labels, got {len(model.labels)}")


# ---------------------------------------------------------------------------
# Evaluation

def evaluate(model: DecisionModel, x: Individual) -> int:
    """Decision label of x. Pure; deterministic."""
    if isinstance(model, FormulaModel):
        return model.labels[int(eval_formula(model.root, x))]
    if isinstance(model, TreeModel):
        node = model.root
        while not isinstance(node, int):
            node = node.if_true if x[node.test] else node.if_false
        return node
    if isinstance(model, ThresholdModel):
        values = x
        for layer in model.layers:
            values = tuple(unit.fires(values) for unit in layer)
        return model.labels[sum(values)]
    raise TypeError(model)


# ---------------------------------------------------------------------------
# Literal-set helpers

def literals_of(x: Individual) -> LiteralSet:
    return {i: v for i, v in enumerate(x)}


def restrict(x_or_set: Union[Individual, LiteralSet], side: str,
             partition: ProfilePartition) -> LiteralSet:
    """Restriction of an individual or literal set to the open or private side."""
    if side not in ("open", "private"):
        raise ValueError(f"side must be 'open' or 'private', got {side!r}")
    keep = partition.open if side == "open" else partition.private
    lits = x_or_set if isinstance(x_or_set, dict) else literals_of(x_or_set)
    return {i: v for i, v in lits.items() if i in keep}


def satisfies(x: Individual, lits: Mapping[int, bool]) -> bool:
    return all(x[i] == v for i, v in lits.items())


def render_literals(lits: Mapping[int, bool], space: FeatureSpace) -> str:
    """Signed conjunction rendering, e.g. 'D ∧ ¬H'. Empty set renders as '⊤'."""
    if not lits:
        return "⊤"
    parts = [("" if v else "¬") + space.names[i] for i, v in sorted(lits.items())]
    return " ∧ ".join(parts)
