import json

import pytest

from leakaudit import SatContext, encode, parse_model

TUTOR_DOC = json.dumps({
    "features": ["E", "D", "S", "H"],
    "open": ["E", "D"],
    "private": ["S", "H"],
    "sensitive": {"feature": "S", "value": True},
    "labels": [0, 1],
    "model": {"kind": "formula", "body": {"op": "or", "args": [
        {"op": "and", "args": [
            {"op": "var", "name": "D"},
            {"op": "or", "args": [{"op": "var", "name": "E"},
                                  {"op": "var", "name": "H"}]}]},
        {"op": "var", "name": "S"}]}},
})

# feature indices in the tutor model
E, D, S, H = 0, 1, 2, 3


def ind(e, d, s, h):
    return (bool(e), bool(d), bool(s), bool(h))


TOTO = ind(1, 1, 1, 1)
TATA = ind(1, 0, 1, 1)
TINTIN = ind(0, 1, 1, 1)
TUTU = ind(0, 1, 0, 1)
TETE = ind(0, 1, 1, 0)
TONTON = ind(1, 1, 1, 0)
TITI = ind(1, 1, 0, 1)


@pytest.fixture(scope="session")
def tutor():
    return parse_model(TUTOR_DOC)


@pytest.fixture(scope="session")
def tutor_enc(tutor):
    space, _, model = tutor
    return encode(model, space)


@pytest.fixture
def tutor_ctx(tutor_enc):
    return SatContext(tutor_enc)
