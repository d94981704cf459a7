import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from homnambu import formats
from homnambu.exactlin import FieldSpec, LinMap, MultiMap, Vector
from homnambu.examples import BraidSpec, braid_hom_algebra, eigenspace_algebra, seeded_gammas
from homnambu.homalg import HomAlgebra

Q = FieldSpec.Q()


def _random_algebra(seed):
    rng = random.Random(seed)
    F = rng.choice([Q, FieldSpec.Fp(5), FieldSpec.Fp(7)])
    n, d = rng.randint(2, 3), rng.randint(0, 3)
    entries = {}
    for _ in range(rng.randint(0, 8) if d else 0):
        t = tuple(rng.randrange(d) for _ in range(n))
        entries.setdefault(t, {})[rng.randrange(d)] = F.random(rng) or 1
    twists = [LinMap(F, [[F.random(rng) for _ in range(d)] for _ in range(d)], d) for _ in range(n - 1)]
    return HomAlgebra(MultiMap(F, n, d, entries), twists)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_algebra_round_trip(seed):
    A = _random_algebra(seed)
    text = formats.dump_algebra(A)
    B = formats.parse_algebra(text)
    assert B.same_structure(A) and B.labels == A.labels
    assert formats.dump_algebra(B) == text


def test_bundled_examples_round_trip():
    spec = BraidSpec((2, 2))
    for A in (braid_hom_algebra(spec.with_gammas(seeded_gammas(spec.dims, Q, 1))),
              eigenspace_algebra(7, 3, 13, 4)):
        text = formats.dump_algebra(A)
        assert formats.dump_algebra(formats.parse_algebra(text)) == text


def test_canonical_key_order():
    A = eigenspace_algebra(7, 3, 13, 1)
    obj = json.loads(formats.dump_algebra(A))
    assert list(obj) == list(formats.ALG_KEYS)
    assert obj["field"] == {"kind": "Fp", "p": 7}
    assert obj["product"][0] == {"in": [1, 1, 1, 1], "out": 2, "c": "1"}


def _minimal(**override):
    obj = {"field": {"kind": "Q"}, "arity": 2, "dim": 1, "basis": ["e"],
           "twists": [[["1"]]], "product": [{"in": [1, 1], "out": 1, "c": "2"}]}
    obj.update(override)
    return json.dumps(obj)


def test_minimal_parses():
    A = formats.parse_algebra(_minimal())
    assert A.product.entries() == [((0, 0), 0, 2)]


@pytest.mark.parametrize("text", [
    _minimal(extra=1),
    _minimal(twists=[]),
    _minimal(twists=[[["1"]], [["1"]]]),
    _minimal(product=[{"in": [1, 2], "out": 1, "c": "1"}]),
    _minimal(product=[{"in": [1, 1], "out": 0, "c": "1"}]),
    _minimal(product=[{"in": [1, 1], "out": 1, "c": 1}]),
    _minimal(product=[{"in": [1, 1], "out": 1, "c": "1", "note": "x"}]),
    _minimal(product=[{"in": [1, 1], "out": 1, "c": "1"}, {"in": [1, 1], "out": 1, "c": "3"}]),
    _minimal(field={"kind": "Fp", "p": 6}),
    _minimal(field={"kind": "R"}),
    _minimal(basis=["a", "b"]),
    '{"field": {"kind": "Q"}, "field": {"kind": "Q"}}',
    "not json",
])
def test_malformed_algebra_rejected(text):
    with pytest.raises(formats.FormatError):
        formats.parse_algebra(text)


def test_vector_and_matrix_round_trip():
    F = FieldSpec.Fp(7)
    v = Vector.from_dense(F, [1, 0, 3])
    text = formats.dump_vector(v, 3)
    assert formats.parse_vector(text, F, 3) == v
    with pytest.raises(formats.FormatError):
        formats.parse_vector(text, Q, 3)
    with pytest.raises(formats.FormatError):
        formats.parse_vector(text, F, 4)
    L = LinMap(Q, [[1, 2], [3, 4], [5, 6]])
    assert formats.parse_matrix(formats.dump_matrix(L)) == L
