"""Interchange-format parsing and serialization for audit instances.

A document is a JSON object with keys: features, open, private, sensitive,
labels, model. Unknown keys are rejected. See README for the full grammar.
"""

from __future__ import annotations

import json
from typing import Any

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
    TreeBody,
    TreeModel,
    TreeNode,
    Var,
    validate_model,
)

TOP_KEYS = {"features", "open", "private", "sensitive", "labels", "model"}


class ParseError(ModelError):
    """Schema violation in an interchange document, with a location path."""

    def __init__(self, message: str, location: str = "$"):
        super().__init__(f"{location}: {message}")
        self.location = location


def parse_model(document: str) -> tuple[FeatureSpace, ProfilePartition, DecisionModel]:
    """Parse and fully validate an interchange document."""
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("document must be a JSON object")

    unknown = set(doc) - TOP_KEYS
    if unknown:
        raise ParseError(f"unknown key(s): {', '.join(sorted(unknown))}")
    missing = TOP_KEYS - set(doc)
    if missing:
        raise ParseError(f"missing key(s): {', '.join(sorted(missing))}")

    names = _name_list(doc["features"], "$.features")
    try:
        space = FeatureSpace(tuple(names))
    except ModelError as exc:
        raise ParseError(str(exc), "$.features") from exc

    open_idx = frozenset(space.index(n) for n in _name_list(doc["open"], "$.open"))
    priv_idx = frozenset(space.index(n) for n in _name_list(doc["private"], "$.private"))

    sens = doc["sensitive"]
    if not isinstance(sens, dict) or set(sens) != {"feature", "value"}:
        raise ParseError("expected {feature, value}", "$.sensitive")
    if not isinstance(sens["value"], bool) and sens["value"] not in (0, 1):
        raise ParseError("value must be a Boolean", "$.sensitive.value")
    partition = ProfilePartition(
        open=open_idx,
        private=priv_idx,
        sensitive=space.index(_str(sens["feature"], "$.sensitive.feature")),
        protected_value=bool(sens["value"]),
    )
    try:
        partition.validate(space)
    except ModelError as exc:
        raise ParseError(str(exc), "$.sensitive" if "sensitive" in str(exc) else "$.open") from exc

    labels = doc["labels"]
    if (not isinstance(labels, list) or not labels
            or any(isinstance(v, bool) or not isinstance(v, int) for v in labels)):
        raise ParseError("labels must be a non-empty integer list", "$.labels")

    model_doc = doc["model"]
    if not isinstance(model_doc, dict) or set(model_doc) != {"kind", "body"}:
        raise ParseError("expected {kind, body}", "$.model")
    kind = model_doc["kind"]
    body = model_doc["body"]
    if kind == "formula":
        model: DecisionModel = FormulaModel(tuple(labels), _parse_formula(body, space, "$.model.body"))
    elif kind == "tree":
        model = TreeModel(tuple(labels), _parse_tree(body, space, "$.model.body"))
    elif kind == "threshold":
        model = ThresholdModel(tuple(labels), _parse_layers(body, "$.model.body"))
    else:
        raise ParseError(f"unknown model kind: {kind!r}", "$.model.kind")

    try:
        validate_model(model, space)
    except ModelError as exc:
        raise ParseError(str(exc), "$.model") from exc
    return space, partition, model


def _name_list(value: Any, loc: str) -> list[str]:
    if not isinstance(value, list) or any(not isinstance(v, str) for v in value):
        raise ParseError("expected a list of feature names", loc)
    return value


def _str(value: Any, loc: str) -> str:
    if not isinstance(value, str):
        raise ParseError("expected a string", loc)
    return value


def _parse_formula(node: Any, space: FeatureSpace, loc: str) -> FormulaNode:
    if not isinstance(node, dict) or "op" not in node:
        raise ParseError("formula node must be an object with an 'op' key", loc)
    op = node["op"]
    if op in ("and", "or"):
        if set(node) != {"op", "args"} or not isinstance(node["args"], list):
            raise ParseError(f"'{op}' node needs an 'args' list", loc)
        args = tuple(_parse_formula(a, space, f"{loc}.args[{i}]")
                     for i, a in enumerate(node["args"]))
        return And(args) if op == "and" else Or(args)
    if op == "not":
        if set(node) != {"op", "arg"}:
            raise ParseError("'not' node needs an 'arg'", loc)
        return Not(_parse_formula(node["arg"], space, f"{loc}.arg"))
    if op == "var":
        if set(node) != {"op", "name"}:
            raise ParseError("'var' node needs a 'name'", loc)
        try:
            return Var(space.index(_str(node["name"], f"{loc}.name")))
        except ModelError as exc:
            raise ParseError(str(exc), f"{loc}.name") from exc
    if op == "const":
        if set(node) != {"op", "value"} or not isinstance(node["value"], (bool, int)):
            raise ParseError("'const' node needs a Boolean 'value'", loc)
        return Const(bool(node["value"]))
    raise ParseError(f"unknown formula op: {op!r}", loc)


def _parse_tree(node: Any, space: FeatureSpace, loc: str) -> TreeBody:
    if isinstance(node, int) and not isinstance(node, bool):
        return node
    if not isinstance(node, dict) or set(node) != {"test", "if_true", "if_false"}:
        raise ParseError("tree node must be an integer leaf or {test, if_true, if_false}", loc)
    try:
        test = space.index(_str(node["test"], f"{loc}.test"))
    except ModelError as exc:
        raise ParseError(str(exc), f"{loc}.test") from exc
    return TreeNode(
        test=test,
        if_true=_parse_tree(node["if_true"], space, f"{loc}.if_true"),
        if_false=_parse_tree(node["if_false"], space, f"{loc}.if_false"),
    )


def _parse_layers(body: Any, loc: str) -> tuple[tuple[ThresholdUnit, ...], ...]:
    if not isinstance(body, list):
        raise ParseError("threshold body must be a list of layers", loc)
    layers = []
    for li, layer in enumerate(body):
        if not isinstance(layer, list):
            raise ParseError("layer must be a list of units", f"{loc}[{li}]")
        units = []
        for ui, unit in enumerate(layer):
            uloc = f"{loc}[{li}][{ui}]"
            if not isinstance(unit, dict) or set(unit) != {"weights", "bias"}:
                raise ParseError("unit must be {weights, bias}", uloc)
            ws = unit["weights"]
            if (not isinstance(ws, list)
                    or any(isinstance(w, bool) or not isinstance(w, int) for w in ws)):
                raise ParseError("weights must be an integer list", f"{uloc}.weights")
            if isinstance(unit["bias"], bool) or not isinstance(unit["bias"], int):
                raise ParseError("bias must be an integer", f"{uloc}.bias")
            units.append(ThresholdUnit(tuple(ws), unit["bias"]))
        layers.append(tuple(units))
    return tuple(layers)


# ---------------------------------------------------------------------------
# Serialization (inverse of parse_model on validated triples)

def serialize_model(space: FeatureSpace, partition: ProfilePartition,
                    model: DecisionModel) -> str:
    doc = {
        "features": list(space.names),
        "open": [space.names[i] for i in sorted(partition.open)],
        "private": [space.names[i] for i in sorted(partition.private)],
        "sensitive": {
            "feature": space.names[partition.sensitive],
            "value": partition.protected_value,
        },
        "labels": list(model.labels),
        "model": {"kind": model.kind, "body": _body_to_json(model, space)},
    }
    return json.dumps(doc, indent=2)


def _body_to_json(model: DecisionModel, space: FeatureSpace) -> Any:
    if isinstance(model, FormulaModel):
        return _formula_to_json(model.root, space)
    if isinstance(model, TreeModel):
        return _tree_to_json(model.root, space)
    if isinstance(model, ThresholdModel):
        return [[{"weights": list(u.weights), "bias": u.bias} for u in layer]
                for layer in model.layers]
    raise TypeError(model)


def _formula_to_json(node: FormulaNode, space: FeatureSpace) -> Any:
    if isinstance(node, Var):
        return {"op": "var", "name": space.names[node.index]}
    if isinstance(node, Const):
        return {"op": "const", "value": node.value}
    if isinstance(node, Not):
        return {"op": "not", "arg": _formula_to_json(node.arg, space)}
    op = "and" if isinstance(node, And) else "or"
    return {"op": op, "args": [_formula_to_json(a, space) for a in node.args]}


def _tree_to_json(node: TreeBody, space: FeatureSpace) -> Any:
    if isinstance(node, int):
        return node
    return {
        "test": space.names[node.test],
        "if_true": _tree_to_json(node.if_true, space),
        "if_false": _tree_to_json(node.if_false, space),
    }
