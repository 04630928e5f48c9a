# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled F2 kernels; same interface as ``hfcone._f2py``.

Vectors stay Python ints (already packed machine words, XORed in C by the
interpreter).  What this module removes is the per-step interpreter work:
pivot lookups go through a C array indexed by bit position, bit lengths come
from the C API, and set bits are scanned from the little-endian bytes.
"""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, uint64_t
from libc.stdlib cimport free, malloc
from libc.string cimport memset

cnp.import_array()

cdef extern from "Python.h":
    size_t _PyLong_NumBits(object v) except? <size_t>-1


cdef inline Py_ssize_t _top(object v) except -2:
    """Index of the highest set bit, -1 for zero."""
    return <Py_ssize_t>_PyLong_NumBits(v) - 1


cdef Py_ssize_t _max_bits(list vecs) except -1:
    cdef Py_ssize_t b, best = 0
    for v in vecs:
        b = <Py_ssize_t>_PyLong_NumBits(v)
        if b > best:
            best = b
    return best


cdef int64_t* _pivot_array(Py_ssize_t n) except NULL:
    cdef int64_t* piv = <int64_t*>malloc((n + 1) * sizeof(int64_t))
    if piv == NULL:
        raise MemoryError()
    memset(piv, 0xFF, (n + 1) * sizeof(int64_t))  # all -1
    return piv


def reduce_columns(cols, track=False):
    """Left-to-right column reduction keyed on the highest set bit."""
    cdef list reduced = list(cols)
    cdef Py_ssize_t n = len(reduced), j, k, p
    cdef bint tr = bool(track)
    cdef list ops = [(<object>1) << j for j in range(n)] if tr else None
    cdef int64_t* piv = _pivot_array(_max_bits(reduced))
    try:
        for j in range(n):
            c = reduced[j]
            p = _top(c)
            if p < 0:
                continue
            if tr:
                op = ops[j]
                while p >= 0 and piv[p] >= 0:
                    k = piv[p]
                    c = c ^ reduced[k]
                    op = op ^ ops[k]
                    p = _top(c)
                ops[j] = op
            else:
                while p >= 0 and piv[p] >= 0:
                    k = piv[p]
                    c = c ^ reduced[k]
                    p = _top(c)
            reduced[j] = c
            if p >= 0:
                piv[p] = j
    finally:
        free(piv)
    return reduced, ops


def reduce_vectors(pivot_cols, pivot_tags, vecs):
    """Reduce each vector by a pivot table; accumulate the tags used."""
    cdef list keys = list(pivot_cols)
    cdef list cols = [pivot_cols[key] for key in keys]
    cdef list tags = [pivot_tags[key] for key in keys]
    cdef list vs = list(vecs)
    cdef Py_ssize_t top = max(_max_bits(cols), _max_bits(vs)), r, p
    cdef int64_t* piv = _pivot_array(top)
    cdef list out = []
    try:
        for r in range(len(keys)):
            piv[<Py_ssize_t>keys[r]] = r
        for v in vs:
            t = 0
            p = _top(v)
            while p >= 0 and piv[p] >= 0:
                r = piv[p]
                v = v ^ cols[r]
                t = t ^ tags[r]
                p = _top(v)
            out.append((v, t))
    finally:
        free(piv)
    return out


def apply_map(images, vecs):
    """Apply the linear map with column images ``images`` to each bitset."""
    cdef list imgs = list(images)
    cdef list out = []
    cdef const unsigned char[:] raw
    cdef Py_ssize_t nb, i, b
    cdef unsigned char byte
    for v in vecs:
        acc = 0
        nb = (<Py_ssize_t>_PyLong_NumBits(v) + 7) >> 3
        if nb:
            raw = v.to_bytes(nb, "little")
            for i in range(nb):
                byte = raw[i]
                b = 0
                while byte:
                    if byte & 1:
                        acc = acc ^ imgs[i * 8 + b]
                    byte >>= 1
                    b += 1
        out.append(acc)
    return out


def echelon(vecs):
    """Independent bitsets spanning the same space (pivot-distinct)."""
    cdef list vs = list(vecs)
    cdef list basis = []
    cdef Py_ssize_t p
    cdef int64_t* piv = _pivot_array(_max_bits(vs))
    try:
        for v in vs:
            p = _top(v)
            while p >= 0 and piv[p] >= 0:
                v = v ^ basis[piv[p]]
                p = _top(v)
            if p >= 0:
                piv[p] = len(basis)
                basis.append(v)
    finally:
        free(piv)
    return basis


def rank(vecs):
    """Rank of a list of bitsets."""
    return len(echelon(vecs))


def csr_bitsets(const int64_t[::1] ptr, const int64_t[::1] idx, members, const int64_t[::1] pos):
    """Columns ``members`` of a CSR matrix as bitsets over ``pos[row]``."""
    cdef const int64_t[::1] mem = np.ascontiguousarray(members, dtype=np.int64)
    cdef Py_ssize_t n = mem.shape[0]
    if n == 0:
        return []
    cdef Py_ssize_t r, e, k, width = 0
    cdef int64_t p
    for r in range(n):
        k = mem[r]
        for e in range(ptr[k], ptr[k + 1]):
            p = pos[idx[e]]
            if p + 1 > width:
                width = p + 1
    cdef Py_ssize_t nw = max(1, (width + 63) // 64)
    M_arr = np.zeros((n, nw), dtype=np.uint64)
    cdef uint64_t[:, ::1] M = M_arr
    cdef cnp.uint8_t[::1] nonzero = np.zeros(n, dtype=np.uint8)
    with nogil:
        for r in range(n):
            k = mem[r]
            for e in range(ptr[k], ptr[k + 1]):
                p = pos[idx[e]]
                M[r, p >> 6] ^= (<uint64_t>1) << (p & 63)
                nonzero[r] = 1
    data = np.ascontiguousarray(M_arr, dtype="<u8").tobytes()
    nb = nw * 8
    return [int.from_bytes(data[r * nb:(r + 1) * nb], "little") if nonzero[r] else 0
            for r in range(n)]
