"""Instance generation: seeded random models and the exists-forall reduction.

The reduction maps an instance  exists Y. forall Z. phi(Y, Z)  to a leakage
problem over features Y + Z + {s}: Y is open, Z and s are private, the
protected value is true and the decision is  x[s] or not phi(x).  The model
leaks exactly when the quantified formula is true.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .core import (
    And,
    Const,
    DecisionModel,
    FeatureSpace,
    FormulaModel,
    FormulaNode,
    ModelError,
    Not,
    Or,
    ProfilePartition,
    ThresholdModel,
    ThresholdUnit,
    TreeModel,
    TreeNode,
    Var,
    eval_formula,
    evaluate,
    validate_model,
)
from .oracle import BudgetError, OracleBudget

KINDS = ("formula", "tree", "threshold")


@dataclass(frozen=True)
class ShapeParams:
    formula_depth: int = 3
    tree_depth: int = 3
    hidden_units: int = 2
    weight_range: tuple[int, int] = (-4, 4)
    nonconstant_retries: int = 50


def random_model(seed: int, n_features: int, kind: str,
                 shape: ShapeParams = ShapeParams()
                 ) -> tuple[FeatureSpace, ProfilePartition, DecisionModel]:
    """Seed-reproducible random instance with a random open/private split."""
    if n_features < 2:
        raise ValueError("n_features must be at least 2 (open set plus a private "
                         "sensitive feature)")
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
    rng = random.Random((seed, n_features, kind).__repr__())
    space = FeatureSpace(tuple(f"f{i}" for i in range(n_features)))

    sensitive = rng.randrange(n_features)
    rest = [i for i in range(n_features) if i != sensitive]
    n_open = rng.randint(1, len(rest))
    open_idx = frozenset(rng.sample(rest, n_open))
    partition = ProfilePartition(
        open=open_idx,
        private=frozenset(range(n_features)) - open_idx,
        sensitive=sensitive,
        protected_value=rng.random() < 0.5,
    )

    if kind == "formula":
        model: DecisionModel = FormulaModel(
            (0, 1), _random_formula(rng, n_features, shape.formula_depth))
    elif kind == "tree":
        model = TreeModel((0, 1), _random_tree(rng, list(range(n_features)),
                                               shape.tree_depth))
    else:
        model = _random_threshold(rng, n_features, shape)
    validate_model(model, space)
    return space, partition, model


def _random_formula(rng: random.Random, n: int, depth: int) -> FormulaNode:
    if depth == 0 or rng.random() < 0.3:
        return Var(rng.randrange(n))
    op = rng.choice(("and", "or", "not"))
    if op == "not":
        return Not(_random_formula(rng, n, depth - 1))
    args = tuple(_random_formula(rng, n, depth - 1)
                 for _ in range(rng.randint(2, 3)))
    return And(args) if op == "and" else Or(args)


def _random_tree(rng: random.Random, available: list[int], depth: int):
    if depth == 0 or not available or rng.random() < 0.25:
        return rng.randint(0, 1)
    test = rng.choice(available)
    rest = [i for i in available if i != test]
    return TreeNode(test,
                    _random_tree(rng, rest, depth - 1),
                    _random_tree(rng, rest, depth - 1))


def _random_threshold(rng: random.Random, n: int, shape: ShapeParams) -> ThresholdModel:
    lo, hi = shape.weight_range
    for _ in range(shape.nonconstant_retries):
        hidden = tuple(
            ThresholdUnit(tuple(rng.randint(lo, hi) for _ in range(n)),
                          rng.randint(lo, hi))
            for _ in range(shape.hidden_units))
        out = ThresholdUnit(tuple(rng.randint(lo, hi) for _ in range(shape.hidden_units)),
                            rng.randint(lo, hi))
        model = ThresholdModel((0, 1), (hidden, (out,)))
        if _is_nonconstant(model, n, rng):
            return model
    raise ModelError("could not draw a non-constant threshold model")


def _is_nonconstant(model: DecisionModel, n: int, rng: random.Random) -> bool:
    if n <= 12:
        seen = {evaluate(model, x)
                for x in itertools.product((False, True), repeat=n)}
        return len(seen) > 1
    seen = {evaluate(model, tuple(rng.random() < 0.5 for _ in range(n)))
            for _ in range(256)}
    return len(seen) > 1


# ---------------------------------------------------------------------------
# exists-forall instances

@dataclass(frozen=True)
class QbfInstance:
    exists_vars: tuple[str, ...]
    forall_vars: tuple[str, ...]
    matrix: FormulaNode  # over indices 0..|Y|+|Z|-1: Y first, then Z

    def __post_init__(self):
        if set(self.exists_vars) & set(self.forall_vars):
            raise ModelError("exists and forall variable sets must be disjoint")


def parse_qbf(text: str) -> QbfInstance:
    """Parse the two-line format: a quantifier prefix and a matrix expression.

        exists y1 y2; forall z1;
        (y1 | z1) & !(y2 & z1)

    Operators: & | ! with parentheses; constants 0/1/true/false.
    """
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if len(lines) < 2:
        raise ModelError("expected a prefix line and a matrix line")
    prefix, expr = lines[0], " ".join(lines[1:])
    exists: list[str] = []
    forall: list[str] = []
    for block in prefix.split(";"):
        block = block.strip()
        if not block:
            continue
        parts = block.split()
        if parts[0] == "exists":
            exists.extend(parts[1:])
        elif parts[0] == "forall":
            forall.extend(parts[1:])
        else:
            raise ModelError(f"unknown quantifier {parts[0]!r}")
    order = {name: i for i, name in enumerate(exists + forall)}
    if len(order) != len(exists) + len(forall):
        raise ModelError("repeated variable in the prefix")
    matrix = _ExprParser(expr, order).parse()
    return QbfInstance(tuple(exists), tuple(forall), matrix)


class _ExprParser:
    def __init__(self, text: str, order: dict[str, int]):
        self.tokens = self._tokenize(text)
        self.pos = 0
        self.order = order

    @staticmethod
    def _tokenize(text: str) -> list[str]:
        tokens, i = [], 0
        while i < len(text):
            c = text[i]
            if c.isspace():
                i += 1
            elif c in "()&|!~":
                tokens.append("!" if c == "~" else c)
                i += 1
            elif c.isalnum() or c == "_":
                j = i
                while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                tokens.append(text[i:j])
                i = j
            else:
                raise ModelError(f"unexpected character {c!r} in formula")
        return tokens

    def _peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _take(self) -> str:
        tok = self._peek()
        if tok is None:
            raise ModelError("unexpected end of formula")
        self.pos += 1
        return tok

    def parse(self) -> FormulaNode:
        node = self._or()
        if self._peek() is not None:
            raise ModelError(f"trailing token {self._peek()!r}")
        return node

    def _or(self) -> FormulaNode:
        args = [self._and()]
        while self._peek() == "|":
            self._take()
            args.append(self._and())
        return args[0] if len(args) == 1 else Or(tuple(args))

    def _and(self) -> FormulaNode:
        args = [self._atom()]
        while self._peek() == "&":
            self._take()
            args.append(self._atom())
        return args[0] if len(args) == 1 else And(tuple(args))

    def _atom(self) -> FormulaNode:
        tok = self._take()
        if tok == "!":
            return Not(self._atom())
        if tok == "(":
            node = self._or()
            if self._take() != ")":
                raise ModelError("missing closing parenthesis")
            return node
        if tok in ("0", "false"):
            return Const(False)
        if tok in ("1", "true"):
            return Const(True)
        if tok in self.order:
            return Var(self.order[tok])
        raise ModelError(f"unknown variable {tok!r}")


def from_qbf(q: QbfInstance, budget: OracleBudget = OracleBudget()
             ) -> tuple[FeatureSpace, ProfilePartition, DecisionModel, bool | None]:
    """Leakage instance equivalent to the quantified formula.

    expected is the brute-force truth of the instance, or None when it is
    beyond the enumeration budget.
    """
    ny, nz = len(q.exists_vars), len(q.forall_vars)
    sens_name = "_s"
    while sens_name in q.exists_vars or sens_name in q.forall_vars:
        sens_name += "_"
    space = FeatureSpace(tuple(q.exists_vars) + tuple(q.forall_vars) + (sens_name,))
    s = ny + nz
    partition = ProfilePartition(
        open=frozenset(range(ny)),
        private=frozenset(range(ny, ny + nz)) | {s},
        sensitive=s,
        protected_value=True,
    )
    model = FormulaModel((0, 1), Or((Var(s), Not(q.matrix))))
    validate_model(model, space)

    expected: bool | None
    try:
        budget.check(ny + nz)
        expected = _qbf_truth(q)
    except BudgetError:
        expected = None
    return space, partition, model, expected


def _qbf_truth(q: QbfInstance) -> bool:
    ny, nz = len(q.exists_vars), len(q.forall_vars)
    for ybits in itertools.product((False, True), repeat=ny):
        if all(eval_formula(q.matrix, ybits + zbits + (False,))
               for zbits in itertools.product((False, True), repeat=nz)):
            return True
    return False
