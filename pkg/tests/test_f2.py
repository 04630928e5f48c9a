import pytest
from hypothesis import given, strategies as st

from hfcone import _f2py, f2

try:
    from hfcone import _f2ext
except ImportError:
    _f2ext = None

from oracles import gf2_rank

needs_ext = pytest.mark.skipif(_f2ext is None, reason="compiled backend not built")

bitsets = st.lists(st.integers(0, 2 ** 40 - 1), max_size=30)


def bits(v):
    return [k for k in range(v.bit_length()) if v >> k & 1]


def test_backend_reported():
    assert f2.BACKEND in ("cython", "python")


@given(bitsets)
def test_rank_matches_oracle(vecs):
    assert _f2py.rank(vecs) == gf2_rank([bits(v) for v in vecs])


@given(bitsets)
def test_reduce_columns_tracks_operations(cols):
    reduced, ops = _f2py.reduce_columns(cols, track=True)
    for r, op in zip(reduced, ops):
        acc = 0
        for k in bits(op):
            acc ^= cols[k]
        assert acc == r
    tops = [r.bit_length() for r in reduced if r]
    assert len(tops) == len(set(tops))


@needs_ext
@given(bitsets, st.booleans())
def test_reduce_columns_backends_agree(cols, track):
    assert _f2ext.reduce_columns(cols, track) == _f2py.reduce_columns(cols, track)


@needs_ext
@given(bitsets)
def test_echelon_and_rank_agree(vecs):
    assert _f2ext.echelon(vecs) == _f2py.echelon(vecs)
    assert _f2ext.rank(vecs) == _f2py.rank(vecs)


@needs_ext
@given(st.lists(st.integers(0, 2 ** 20 - 1), min_size=20, max_size=20), bitsets)
def test_apply_map_agree(images, vecs):
    vecs = [v & (2 ** 20 - 1) for v in vecs]
    assert _f2ext.apply_map(images, vecs) == _f2py.apply_map(images, vecs)


@needs_ext
@given(bitsets, bitsets)
def test_reduce_vectors_agree(cols, vecs):
    reduced, ops = _f2py.reduce_columns(cols, track=True)
    piv = {r.bit_length() - 1: r for r in reduced if r}
    tags = {r.bit_length() - 1: op for r, op in zip(reduced, ops) if r}
    assert _f2ext.reduce_vectors(piv, tags, vecs) == _f2py.reduce_vectors(piv, tags, vecs)


@needs_ext
@given(st.data())
def test_csr_bitsets_agree(data):
    import numpy as np

    n_rows = data.draw(st.integers(1, 70))
    n_cols = data.draw(st.integers(1, 12))
    cols = [sorted(data.draw(st.sets(st.integers(0, n_rows - 1), max_size=6))) for _ in range(n_cols)]
    ptr = np.array([0] + list(np.cumsum([len(c) for c in cols])), dtype=np.int64)
    idx = np.array([r for c in cols for r in c], dtype=np.int64)
    pos = np.array(data.draw(st.permutations(range(n_rows))), dtype=np.int64)
    members = np.array(data.draw(st.lists(st.integers(0, n_cols - 1), max_size=8)), dtype=np.int64)
    assert _f2ext.csr_bitsets(ptr, idx, members, pos) == _f2py.csr_bitsets(ptr, idx, members, pos)
