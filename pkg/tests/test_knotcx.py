import json
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from hfcone.knotcx import (ComplexError, ValidationError, builtin, builtin_borromean, builtin_staircase,
                           builtin_t34, builtin_unknot, dumps, isomorphic, load_complex,
                           parse_complex, serialize, validate)
from oracles import staircase_steps_symmetric

DATA = Path(__file__).parent / "data"


def t34_doc():
    return serialize(builtin_t34())


def test_unknot_document():
    doc = {"name": "U", "generators": [{"id": "x", "alexander": 0, "maslov": 0}],
           "differential": [], "flip": [{"from": "x", "to": "x"}]}
    C = parse_complex(json.dumps(doc))
    assert len(C) == 1 and C["x"].alexander == 0 and C["x"].maslov == 0


def test_t34_document_shape():
    C = load_complex(DATA / "t34.json")
    assert len(C) == 5
    assert len(C.differential) == 4
    pairs = {(f.source, f.target) for f in C.flip}
    assert {("x1", "x5"), ("x2", "x4"), ("x3", "x3")} <= pairs


def test_maslov_violation_named():
    doc = t34_doc()
    for g in doc["generators"]:
        if g["id"] == "x2":
            g["maslov"] = 0
    with pytest.raises(ValidationError) as exc:
        parse_complex(doc)
    assert any("Maslov drop != 1" in f for f in exc.value.failures)


def test_filtration_violation():
    doc = t34_doc()
    doc["differential"][0]["u_power"] = 0
    doc["generators"][0]["maslov"] = -2  # keep the Maslov drop right
    failures = validate(parse_complex(doc, check=False))
    assert failures


def test_d_squared_detected():
    doc = {"name": "bad", "generators": [
        {"id": "a", "alexander": 0, "maslov": 2},
        {"id": "b", "alexander": 0, "maslov": 1},
        {"id": "c", "alexander": 0, "maslov": 0}],
        "differential": [{"from": "a", "to": "b", "u_power": 0},
                         {"from": "b", "to": "c", "u_power": 0}],
        "flip": []}
    failures = validate(parse_complex(doc, check=False), require_flip=False)
    assert any("d^2 != 0 at generator a" in f for f in failures)


def test_missing_flip():
    doc = t34_doc()
    doc["flip"] = []
    with pytest.raises(ValidationError) as exc:
        parse_complex(doc)
    assert "flip required" in exc.value.failures


def test_flip_grading_violation():
    doc = t34_doc()
    doc["flip"] = [{"from": "x1", "to": "x4"} if f["from"] == "x1" else f for f in doc["flip"]]
    with pytest.raises(ValidationError):
        parse_complex(doc)


def test_flip_must_be_homology_iso():
    # a flip that is a chain map with the right gradings but kills a class
    doc = t34_doc()
    doc["flip"] = [f for f in doc["flip"] if f["from"] != "x3"]
    with pytest.raises(ValidationError):
        parse_complex(doc)


@pytest.mark.parametrize("text", ["{", "[]", '{"name": "x"}',
                                  '{"name":"x","generators":[{"id":"a","alexander":"1","maslov":0}],'
                                  '"differential":[],"flip":[]}'])
def test_syntax_errors(text):
    with pytest.raises(ComplexError):
        parse_complex(text)


def test_unknown_generator_reference():
    doc = t34_doc()
    doc["differential"].append({"from": "x9", "to": "x1", "u_power": 0})
    with pytest.raises(ComplexError):
        parse_complex(doc)


@pytest.mark.parametrize("spec", ["unknot", "t34", "staircase:1,2,2,1", "borromean:1",
                                  "borromean:2", "borromean:3"])
def test_builtins_valid(spec):
    assert validate(builtin(spec)) == []


def test_builtin_unknot():
    C = builtin_unknot()
    assert len(C) == 1 and C.generators[0].alexander == 0 and C.generators[0].maslov == 0


def test_t34_is_staircase_1221():
    assert isomorphic(builtin_t34(), builtin_staircase([1, 2, 2, 1])) is not None
    assert isomorphic(builtin_t34(), builtin_staircase([1, 1, 1, 1])) is None


def test_borromean_shape():
    for g in (1, 2, 3):
        C = builtin_borromean(g)
        assert len(C) == 4 ** g
        assert not C.differential
        assert C.max_abs_alexander == g


@pytest.mark.parametrize("bad", ["foo", "borromean", "staircase:1,2", "staircase:1,2,3,4"])
def test_bad_builtin(bad):
    with pytest.raises(ComplexError):
        builtin(bad)


@given(st.lists(st.integers(1, 3), min_size=1, max_size=3))
def test_staircase_roundtrip_and_valid(half):
    C = builtin_staircase(staircase_steps_symmetric(half))
    assert validate(C) == []
    again = parse_complex(dumps(C))
    assert serialize(again) == serialize(C)
    assert isomorphic(C, again) is not None
    # symmetry of the Alexander gradings
    assert sorted(g.alexander for g in C.generators) == sorted(-g.alexander for g in C.generators)
