"""CNF compilation of decision models.

Every model compiles to clauses over named input variables plus one output
indicator per decision label; for every total input assignment exactly one
label indicator is forced true and matches direct evaluation. Threshold
units are translated with a weighted sequential-counter network encoded with
full equivalences, so both polarities propagate.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .core import (
    And,
    Const,
    DecisionModel,
    FeatureSpace,
    FormulaModel,
    FormulaNode,
    Not,
    Or,
    ThresholdModel,
    TreeBody,
    TreeModel,
    Var,
)


class CapacityError(Exception):
    """Encoding exceeded the configured clause bound."""


@dataclass(frozen=True)
class CnfEncoding:
    num_vars: int
    clauses: tuple[tuple[int, ...], ...]
    input_var: dict[int, int]    # feature index -> DIMACS variable
    label_var: dict[int, int]    # decision label -> DIMACS variable
    space: FeatureSpace
    labels: tuple[int, ...]

    @property
    def aux_count(self) -> int:
        return self.num_vars - len(self.input_var) - len(self.label_var)

    def feature_literal(self, feature: int, polarity: bool) -> int:
        v = self.input_var[feature]
        return v if polarity else -v


class _Builder:
    def __init__(self, n_inputs: int, max_clauses: int | None):
        self.num_vars = n_inputs
        self.clauses: list[tuple[int, ...]] = []
        self.max_clauses = max_clauses

    def new_var(self) -> int:
        self.num_vars += 1
        return self.num_vars

    def add(self, *lits: int) -> None:
        if self.max_clauses is not None and len(self.clauses) >= self.max_clauses:
            raise CapacityError(f"clause bound {self.max_clauses} exceeded")
        self.clauses.append(tuple(lits))

    # v <-> AND(lits); empty conjunction is true
    def define_and(self, lits: list[int]) -> int:
        if not lits:
            return self.define_const(True)
        if len(lits) == 1:
            return lits[0]
        v = self.new_var()
        for l in lits:
            self.add(-v, l)
        self.add(v, *[-l for l in lits])
        return v

    # v <-> OR(lits); empty disjunction is false
    def define_or(self, lits: list[int]) -> int:
        if not lits:
            return self.define_const(False)
        if len(lits) == 1:
            return lits[0]
        v = self.new_var()
        for l in lits:
            self.add(v, -l)
        self.add(-v, *lits)
        return v

    def define_const(self, value: bool) -> int:
        v = self.new_var()
        self.add(v if value else -v)
        return v

    def alias(self, lit: int) -> int:
        """Fresh variable equivalent to lit (keeps label vars distinct)."""
        v = self.new_var()
        self.add(-v, lit)
        self.add(v, -lit)
        return v


def encode(model: DecisionModel, space: FeatureSpace,
           max_clauses: int | None = None) -> CnfEncoding:
    """Compile a validated model to CNF."""
    b = _Builder(space.n, max_clauses)
    input_var = {i: i + 1 for i in range(space.n)}

    if isinstance(model, FormulaModel):
        root = _encode_formula(b, model.root, input_var, {})
        label_lits = {model.labels[0]: -root, model.labels[1]: root}
    elif isinstance(model, TreeModel):
        label_lits = _encode_tree(b, model)
    elif isinstance(model, ThresholdModel):
        label_lits = _encode_threshold(b, model, space.n)
    else:
        raise TypeError(model)

    label_var = {d: b.alias(label_lits[d]) for d in model.labels}
    return CnfEncoding(
        num_vars=b.num_vars,
        clauses=tuple(b.clauses),
        input_var=input_var,
        label_var=label_var,
        space=space,
        labels=model.labels,
    )


def _encode_formula(b: _Builder, node: FormulaNode, input_var: dict[int, int],
                    memo: dict[int, int]) -> int:
    key = id(node)
    if key in memo:
        return memo[key]
    if isinstance(node, Var):
        lit = input_var[node.index]
    elif isinstance(node, Const):
        lit = b.define_const(node.value)
    elif isinstance(node, Not):
        lit = -_encode_formula(b, node.arg, input_var, memo)
    elif isinstance(node, And):
        lit = b.define_and([_encode_formula(b, a, input_var, memo) for a in node.args])
    elif isinstance(node, Or):
        lit = b.define_or([_encode_formula(b, a, input_var, memo) for a in node.args])
    else:
        raise TypeError(node)
    memo[key] = lit
    return lit


def _encode_tree(b: _Builder, model: TreeModel) -> dict[int, int]:
    paths: dict[int, list[list[int]]] = {d: [] for d in model.labels}

    def walk(node: TreeBody, prefix: list[int]) -> None:
        if isinstance(node, int):
            paths[node].append(list(prefix))
            return
        v = node.test + 1
        walk(node.if_true, prefix + [v])
        walk(node.if_false, prefix + [-v])

    walk(model.root, [])
    return {d: b.define_or([b.define_and(p) for p in ps]) for d, ps in paths.items()}


def _encode_threshold(b: _Builder, model: ThresholdModel, n_inputs: int) -> dict[int, int]:
    values = [i + 1 for i in range(n_inputs)]
    for layer in model.layers:
        values = [_encode_unit(b, u.weights, u.bias, values) for u in layer]
    # label index = number of firing final units
    m = len(values)
    count_ge = {0: None}  # None stands for constant true
    for j in range(1, m + 1):
        count_ge[j] = _encode_counter_ge(b, [(v, 1) for v in values], j)
    label_lits = {}
    for j, d in enumerate(model.labels):
        at_least = [] if j == 0 else [count_ge[j]]
        at_most = [] if j == m else [-count_ge[j + 1]]
        label_lits[d] = b.define_and(at_least + at_most)
    return label_lits


def _encode_unit(b: _Builder, weights: tuple[int, ...], bias: int,
                 inputs: list[int]) -> int:
    # normalize to positive coefficients: w*x with w<0 becomes |w|*(~x) - |w|
    terms = []
    bound = bias
    for w, lit in zip(weights, inputs):
        if w > 0:
            terms.append((lit, w))
        elif w < 0:
            terms.append((-lit, -w))
            bound += -w
    if bound <= 0:
        return b.define_const(True)
    if bound > sum(w for _, w in terms):
        return b.define_const(False)
    return _encode_counter_ge(b, terms, bound)


def _encode_counter_ge(b: _Builder, terms: list[tuple[int, int]], bound: int) -> int:
    """Variable equivalent to [sum of weighted literals >= bound], bound >= 1.

    Weighted sequential counter: s(i, j) <-> [sum of first i terms >= j],
    built lazily top-down with equivalence clauses.
    """
    total = sum(w for _, w in terms)
    assert 1 <= bound <= total
    memo: dict[tuple[int, int], int | None] = {}

    def s(i: int, j: int) -> int | None:
        # returns a literal, or None for constant true; constant false -> 0
        if j <= 0:
            return None
        if i == 0 or j > sum(w for _, w in terms[:i]):
            return 0
        key = (i, j)
        if key in memo:
            return memo[key]
        lit, w = terms[i - 1]
        without = s(i - 1, j)          # sum already >= j without term i
        with_i = s(i - 1, j - w)       # term i true and remainder >= j - w
        if without is None:
            out: int | None = None
        elif with_i == 0:
            out = without
        else:
            take = lit if with_i is None else b.define_and([lit, with_i])
            out = take if without == 0 else b.define_or([without, take])
        memo[key] = out
        return out

    out = s(len(terms), bound)
    if out is None:
        return b.define_const(True)
    if out == 0:
        return b.define_const(False)
    return out


# ---------------------------------------------------------------------------
# DIMACS export

def write_dimacs(enc: CnfEncoding, path: str | Path) -> None:
    """Dump the encoding plus a JSON variable-map sidecar (<path>.vars.json)."""
    path = Path(path)
    with path.open("w") as fh:
        fh.write(f"p cnf {enc.num_vars} {len(enc.clauses)}\n")
        for clause in enc.clauses:
            fh.write(" ".join(map(str, clause)) + " 0\n")
    sidecar = {
        "features": {enc.space.names[i]: v for i, v in enc.input_var.items()},
        "labels": {str(d): v for d, v in enc.label_var.items()},
        "num_vars": enc.num_vars,
    }
    Path(f"{path}.vars.json").write_text(json.dumps(sidecar, indent=2))
