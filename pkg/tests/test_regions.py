import pytest
from hypothesis import given, strategies as st

from hfcone.homalg import Homology, is_quasi_iso, truncated_module
from hfcone.knotcx import ComplexError, KnotComplex, builtin, builtin_staircase
from hfcone.regions import (FiniteComplex, assemble, flip_map, h_map, large_surgery_homology,
                            region_A, region_B, region_j, v_map)
from oracles import betti, staircase_steps_symmetric

staircases = st.lists(st.integers(1, 3), min_size=1, max_size=2).map(
    lambda h: builtin_staircase(staircase_steps_symmetric(h)))


def expected_labels(C, offset, delta):
    return {(g.id, i) for g in C.generators for i in range(-offset(g), delta - offset(g) + 1)}


def test_region_B_t34_small():
    B = region_B(builtin("t34"), 2)
    assert len(B) == 15
    assert B.grading.tolist() == [0, 2, 4, -1, 1, 3, -2, 0, 2, -5, -3, -1, -6, -4, -2]
    assert B.check(2) == []


@pytest.mark.parametrize("s", [-4, -1, 0, 2, 3, 5])
def test_region_A_basis(s):
    C = builtin("t34")
    A = region_A(C, s, 3)
    assert set(A.labels) == expected_labels(C, lambda g: max(0, g.alexander - s), 3)


def test_region_j_basis():
    C = builtin("t34")
    assert set(region_j(C, 2).labels) == expected_labels(C, lambda g: g.alexander, 2)


def test_tagged_labels():
    A = region_A(builtin("unknot"), 0, 1, tag="A")
    assert list(A.labels) == [("A", "x", 0), ("A", "x", 1)]


@pytest.mark.parametrize("s,bottom", [(-4, -8), (0, -2), (1, -2), (3, 0), (4, 0)])
def test_A_homology_t34(s, bottom):
    # frozen from an independent set-based reduction (see test_homology_matches_oracle)
    assert str(truncated_module(region_A(builtin("t34"), s, 3), 3)) == f"[{bottom},len 4]"


def test_large_surgery_tower():
    m = large_surgery_homology(builtin("t34"), 1)
    assert m.towers == (-2,) and not m.reduced.pieces
    assert large_surgery_homology(builtin("t34"), 1, delta=0) in (None, m)


@given(staircases, st.integers(-4, 4), st.integers(0, 4))
def test_regions_are_complexes(C, s, delta):
    for X in (region_A(C, s, delta), region_B(C, delta), region_j(C, delta)):
        assert X.check(delta) == []


@given(staircases, st.integers(-4, 4), st.integers(0, 4))
def test_homology_matches_oracle(C, s, delta):
    X = region_A(C, s, delta)
    H = Homology(X)
    ref = betti(X.grading.tolist(), X.boundary)
    assert {d: H.dim(d) for d in H.nonzero_degrees()} == dict(ref)


@given(staircases, st.integers(-4, 4), st.integers(0, 3))
def test_maps_are_chain_maps(C, s, delta):
    v, h = v_map(C, s, delta), h_map(C, s, delta)
    assert v.degree == 0 and h.degree == -2 * s
    assert v.check() == [] and h.check() == []


@pytest.mark.parametrize("spec", ["unknot", "t34", "staircase:1,1,1,1", "borromean:2"])
def test_flip_is_quasi_iso(spec):
    C = builtin(spec)
    assert is_quasi_iso(flip_map(C, 2 * C.max_abs_alexander + 2))


def test_h_needs_flip():
    t = builtin("t34")
    bare = KnotComplex(t.name, t.generators, t.differential, ())
    with pytest.raises(ComplexError, match="flip required"):
        h_map(bare, 0, 2)
    with pytest.raises(ComplexError, match="flip required"):
        assemble(bare, [("A", [0] * 5, 0), ("B", [0] * 5, 0)], 2, [(0, 1, "h", 0)])


def test_finite_complex_validation():
    with pytest.raises(ValueError):
        FiniteComplex(["a", "b"], [0], [(), ()], [(), ()])
    X = FiniteComplex(["a", "b"], [1, 0], [(1,), ()], [(), ()])
    assert X.check() == []
    Y = FiniteComplex(["a", "b"], [1, 1], [(1,), ()], [(), ()])
    assert Y.check()


def test_dump_roundtrip():
    import json

    X = region_B(builtin("t34"), 1)
    d = json.loads(json.dumps(X.dump()))
    assert d["grading"] == X.grading.tolist() and len(d["labels"]) == len(X)


def test_region_B_t34_delta_zero():
    B = region_B(builtin("t34"), 0)
    assert sorted(B.labels) == [(f"x{k}", 0) for k in range(1, 6)]
    assert truncated_module(B, 0).pieces == ((0, 1),)
