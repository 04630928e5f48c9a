"""Pure-Python F2 kernels.  Vectors are Python ints used as bitsets.

The compiled module ``_f2ext`` exposes the same functions; ``hfcone.f2``
picks one at import time.
"""

from __future__ import annotations

import numpy as np


def reduce_columns(cols, track=False):
    """Left-to-right column reduction keyed on the highest set bit.

    Each column is reduced against earlier columns until its pivot (highest
    set bit) is unused.  Returns ``(reduced, ops)`` where ``reduced[j]`` is the
    reduced column (0 if dependent on earlier ones) and ``ops[j]`` the bitset
    of input columns summed into it (None unless ``track``).
    """
    pivots = {}
    reduced = list(cols)
    ops = [1 << j for j in range(len(cols))] if track else None
    for j, c in enumerate(reduced):
        if not c:
            continue
        if track:
            op = ops[j]
            while c:
                p = c.bit_length() - 1
                k = pivots.get(p)
                if k is None:
                    break
                c ^= reduced[k]
                op ^= ops[k]
            ops[j] = op
        else:
            while c:
                p = c.bit_length() - 1
                k = pivots.get(p)
                if k is None:
                    break
                c ^= reduced[k]
        reduced[j] = c
        if c:
            pivots[c.bit_length() - 1] = j
    return reduced, ops


def reduce_vectors(pivot_cols, pivot_tags, vecs):
    """Reduce each vector by a pivot table; accumulate the tags used.

    ``pivot_cols`` maps pivot bit -> column with that highest bit, and
    ``pivot_tags`` maps pivot bit -> tag bitset.  Returns a list of
    ``(remainder, tags)`` pairs.
    """
    out = []
    for v in vecs:
        t = 0
        while v:
            p = v.bit_length() - 1
            c = pivot_cols.get(p)
            if c is None:
                break
            v ^= c
            t ^= pivot_tags[p]
        out.append((v, t))
    return out


def apply_map(images, vecs):
    """Apply the linear map with column images ``images`` to each bitset."""
    out = []
    for v in vecs:
        acc = 0
        while v:
            low = v & -v
            acc ^= images[low.bit_length() - 1]
            v ^= low
        out.append(acc)
    return out


def rank(vecs):
    """Rank of a list of bitsets."""
    pivots = {}
    r = 0
    for v in vecs:
        while v:
            p = v.bit_length() - 1
            c = pivots.get(p)
            if c is None:
                pivots[p] = v
                r += 1
                break
            v ^= c
    return r


def echelon(vecs):
    """Independent bitsets spanning the same space (pivot-distinct)."""
    pivots = {}
    for v in vecs:
        while v:
            p = v.bit_length() - 1
            c = pivots.get(p)
            if c is None:
                pivots[p] = v
                break
            v ^= c
    return list(pivots.values())


def csr_bitsets(ptr, idx, members, pos):
    """Columns ``members`` of a CSR matrix as bitsets over ``pos[row]``.

    Repeated entries cancel.  Arrays are numpy int64; rows are packed in
    chunks so memory stays bounded for large blocks.
    """
    members = np.asarray(members, dtype=np.int64)
    n = len(members)
    if not n:
        return []
    starts, ends = ptr[members], ptr[members + 1]
    lens = ends - starts
    total = int(lens.sum())
    if not total:
        return [0] * n
    rows = np.repeat(np.arange(n, dtype=np.int64), lens)
    first = np.repeat(starts - (np.cumsum(lens) - lens), lens)
    cols = pos[idx[np.arange(total, dtype=np.int64) + first]]
    width = int(cols.max()) + 1
    out = [0] * n
    chunk = max(1, (1 << 24) // max(width, 1))
    bounds = np.searchsorted(rows, np.arange(0, n + chunk, chunk))
    for c, r0 in enumerate(range(0, n, chunk)):
        lo, hi = bounds[c], bounds[c + 1]
        if lo == hi:
            continue
        r1 = min(n, r0 + chunk)
        dense = np.zeros((r1 - r0, width), dtype=np.uint8)
        np.bitwise_xor.at(dense, (rows[lo:hi] - r0, cols[lo:hi]), 1)
        packed = np.packbits(dense, axis=1, bitorder="little")
        for k in np.unique(rows[lo:hi]).tolist():
            out[k] = int.from_bytes(packed[k - r0].tobytes(), "little")
    return out
