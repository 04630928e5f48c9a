"""Truncated quotient complexes C{S} of a knot complex and the maps v_s, h_s.

Basis elements are pairs ``(g, i)`` standing for ``U^{-i} g`` at filtration
``(i, i + A(g))`` with internal grading ``M(g) + 2i``.  Truncation at ``delta``
keeps the kernel of ``U^{delta+1}`` on each quotient complex, so every region
below is cut to the elements whose "height" above the region's lower edge
lies in ``[0, delta]``.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from itertools import chain

import numpy as np

from .knotcx import ComplexError, KnotComplex

__all__ = [
    "FiniteComplex",
    "ChainMap",
    "GridLabels",
    "assemble",
    "quotient_complex",
    "region_A",
    "region_B",
    "region_j",
    "v_map",
    "h_map",
    "flip_map",
    "large_surgery_homology",
]


class GridLabels(Sequence):
    """Labels of a complex laid out part by part, generator by generator.

    Every part holds ``width`` consecutive heights per generator; the element
    at height ``h`` of generator ``g`` in a part with offsets ``c`` is
    ``U^{-(h - c[g])} g``, labelled ``(tag, g, h - c[g])`` (or ``(g, i)`` for
    an untagged single part).  Labels are computed on demand.
    """

    def __init__(self, tags, gen_ids, offsets, width):
        self.tags = tuple(tags)
        self.gen_ids = tuple(gen_ids)
        self.offsets = [tuple(int(x) for x in c) for c in offsets]
        self.width = width
        self._size = len(self.gen_ids) * width
        self._tag_pos = {t: p for p, t in enumerate(self.tags)}
        self._gen_pos = {g: k for k, g in enumerate(self.gen_ids)}

    def __len__(self):
        return len(self.tags) * self._size

    def __getitem__(self, k):
        if isinstance(k, slice):
            return tuple(self[j] for j in range(*k.indices(len(self))))
        if k < 0:
            k += len(self)
        if not 0 <= k < len(self):
            raise IndexError(k)
        p, r = divmod(k, self._size)
        g, h = divmod(r, self.width)
        i = h - self.offsets[p][g]
        tag = self.tags[p]
        return (self.gen_ids[g], i) if tag is None else (tag, self.gen_ids[g], i)

    def get(self, label, default=None):
        try:
            if self.tags == (None,):
                g, i = label
                p = 0
            else:
                tag, g, i = label
                p = self._tag_pos[tag]
            k = self._gen_pos[g]
        except (KeyError, TypeError, ValueError):
            return default
        h = i + self.offsets[p][k]
        if 0 <= h < self.width:
            return p * self._size + k * self.width + h
        return default

    def __contains__(self, label):
        return self.get(label) is not None


def _to_csr(columns):
    columns = [tuple(c) for c in columns]
    ptr = np.zeros(len(columns) + 1, dtype=np.int64)
    ptr[1:] = np.cumsum([len(c) for c in columns], dtype=np.int64)
    idx = np.fromiter(chain.from_iterable(columns), dtype=np.int64, count=int(ptr[-1]))
    return ptr, idx


def _frozen(a):
    a = np.ascontiguousarray(a, dtype=np.int64)
    a.setflags(write=False)
    return a


class FiniteComplex:
    """Finite-dimensional F2 complex with a nilpotent U action.

    Column ``k`` of the boundary (and of U) lists the basis indices in the
    image of basis element ``k``; both are stored in compressed sparse
    column form.  With ``modulus`` set, gradings are read modulo it.
    Instances are immutable.
    """

    def __init__(self, labels, grading, boundary, u_action, modulus: int | None = None):
        bd_ptr, bd_idx = _to_csr(boundary)
        u_ptr, u_idx = _to_csr(u_action)
        self._setup(labels, grading, bd_ptr, bd_idx, u_ptr, u_idx, modulus)

    @classmethod
    def from_csr(cls, labels, grading, bd_ptr, bd_idx, u_ptr, u_idx, modulus=None):
        obj = cls.__new__(cls)
        obj._setup(labels, grading, bd_ptr, bd_idx, u_ptr, u_idx, modulus)
        return obj

    def _setup(self, labels, grading, bd_ptr, bd_idx, u_ptr, u_idx, modulus):
        self._labels = labels if isinstance(labels, GridLabels) else tuple(labels)
        self.grading = _frozen(grading)
        self.bd_ptr, self.bd_idx = _frozen(bd_ptr), _frozen(bd_idx)
        self.u_ptr, self.u_idx = _frozen(u_ptr), _frozen(u_idx)
        self.modulus = modulus or None
        n = len(self._labels)
        if len(self.grading) != n or len(self.bd_ptr) != n + 1 or len(self.u_ptr) != n + 1:
            raise ValueError("labels, grading and columns disagree in length")
        self._cache = {}

    @property
    def labels(self):
        return self._labels

    @property
    def index(self):
        if isinstance(self._labels, GridLabels):
            return self._labels
        if "index" not in self._cache:
            self._cache["index"] = {lab: k for k, lab in enumerate(self._labels)}
        return self._cache["index"]

    def _columns(self, name, ptr, idx):
        if name not in self._cache:
            p, x = ptr.tolist(), idx.tolist()
            self._cache[name] = tuple(tuple(x[p[k]:p[k + 1]]) for k in range(len(p) - 1))
        return self._cache[name]

    @property
    def boundary(self) -> tuple:
        return self._columns("boundary", self.bd_ptr, self.bd_idx)

    @property
    def u_action(self) -> tuple:
        return self._columns("u_action", self.u_ptr, self.u_idx)

    def with_modulus(self, modulus) -> "FiniteComplex":
        return FiniteComplex.from_csr(self._labels, self.grading, self.bd_ptr, self.bd_idx,
                                      self.u_ptr, self.u_idx, modulus)

    def __len__(self):
        return len(self.grading)

    def degree(self, k: int) -> int:
        d = int(self.grading[k])
        return d % self.modulus if self.modulus else d

    def reduce_degree(self, d: int) -> int:
        return d % self.modulus if self.modulus else d

    def degrees(self) -> np.ndarray:
        return self.grading % self.modulus if self.modulus else self.grading

    def blocks(self) -> dict:
        """Map each degree to the (increasing) array of basis indices in it."""
        if "blocks" not in self._cache:
            g = self.degrees()
            order = np.argsort(g, kind="stable")
            values, starts = np.unique(g[order], return_index=True)
            parts = np.split(order, starts[1:])
            self._cache["blocks"] = {int(d): part for d, part in zip(values, parts)}
        return self._cache["blocks"]

    def check(self, delta: int | None = None) -> list[str]:
        """List violated invariants: d^2 = 0, degrees, [U, d] = 0, nilpotence."""
        failures = []
        red = self.reduce_degree
        gr = self.grading.tolist()
        bd, ua = self.boundary, self.u_action
        labels = self._labels
        for k, tgts in enumerate(bd):
            for t in tgts:
                if red(gr[t] - gr[k] + 1) != red(0):
                    failures.append(f"boundary of {labels[k]!r} does not drop grading by 1")
                    break
            if _compose(bd, _compose(bd, [k])):
                failures.append(f"d^2 != 0 at {labels[k]!r}")
        for k, tgts in enumerate(ua):
            for t in tgts:
                if red(gr[t] - gr[k] + 2) != red(0):
                    failures.append(f"U does not drop grading by 2 at {labels[k]!r}")
                    break
            if _compose(bd, _compose(ua, [k])) != _compose(ua, _compose(bd, [k])):
                failures.append(f"U does not commute with d at {labels[k]!r}")
        if delta is not None:
            for k in range(len(self)):
                vec = {k}
                for _ in range(delta + 1):
                    vec = _compose(ua, vec)
                if vec:
                    failures.append(f"U^{delta + 1} != 0 at {labels[k]!r}")
                    break
        return failures

    def dump(self) -> dict:
        def plain(lab):
            return [plain(x) for x in lab] if isinstance(lab, tuple) else lab

        return {
            "labels": [plain(lab) for lab in self._labels],
            "grading": self.grading.tolist(),
            "boundary": [list(b) for b in self.boundary],
            "u_action": [list(u) for u in self.u_action],
            "modulus": self.modulus,
        }


def _compose(columns, vec):
    """Image of the F2 vector ``vec`` (iterable of indices) under ``columns``."""
    out = set()
    for k in vec:
        for t in columns[k]:
            out ^= {t}
    return out


@dataclass(frozen=True, eq=False)
class ChainMap:
    source: FiniteComplex
    target: FiniteComplex
    columns: tuple
    degree: int = 0

    def check(self) -> list[str]:
        """List violated invariants: chain map, U-equivariance, homogeneity."""
        failures = []
        S, T = self.source, self.target
        red = T.reduce_degree
        sg, tg = S.grading.tolist(), T.grading.tolist()
        for k, tgts in enumerate(self.columns):
            for t in tgts:
                if red(tg[t] - sg[k] - self.degree) != red(0):
                    failures.append(f"map is not homogeneous of degree {self.degree} at {S.labels[k]!r}")
                    break
            if _compose(T.boundary, _compose(self.columns, [k])) != _compose(self.columns, S.boundary[k]):
                failures.append(f"map does not commute with d at {S.labels[k]!r}")
            if _compose(T.u_action, _compose(self.columns, [k])) != _compose(self.columns, S.u_action[k]):
                failures.append(f"map does not commute with U at {S.labels[k]!r}")
        return failures

    def __add__(self, other: "ChainMap") -> "ChainMap":
        if other.source is not self.source or other.target is not self.target:
            raise ValueError("maps must share source and target")
        cols = tuple(tuple(sorted(set(a).symmetric_difference(b)))
                     for a, b in zip(self.columns, other.columns))
        return ChainMap(self.source, self.target, cols, self.degree)


# -- region complexes --------------------------------------------------------

def _tables(C: KnotComplex):
    gidx = {g.id: k for k, g in enumerate(C.generators)}
    alex = np.array([g.alexander for g in C.generators], dtype=np.int64)
    masl = np.array([g.maslov for g in C.generators], dtype=np.int64)
    d_src = np.array([gidx[d.source] for d in C.differential], dtype=np.int64)
    d_tgt = np.array([gidx[d.target] for d in C.differential], dtype=np.int64)
    d_pow = np.array([d.u_power for d in C.differential], dtype=np.int64)
    f_src = np.array([gidx[f.source] for f in C.flip], dtype=np.int64)
    f_tgt = np.array([gidx[f.target] for f in C.flip], dtype=np.int64)
    return alex, masl, (d_src, d_tgt, d_pow), (f_src, f_tgt)


def assemble(C: KnotComplex, parts, delta: int, maps=(), modulus=None) -> FiniteComplex:
    """Direct sum of truncated quotient complexes joined by v and h maps.

    ``parts`` lists ``(tag, offsets, shift)``: the part is the region
    ``{(g, i) : i + offsets[g] in [0, delta]}`` with gradings raised by
    ``shift``.  ``maps`` lists ``(src, tgt, kind, s)`` with ``kind`` ``"v"``
    (project to i >= 0) or ``"h"`` (project to j >= s, multiply by U^s and
    flip), added to the boundary.  Entries occurring twice cancel.
    """
    if delta < 0:
        raise ValueError("delta must be non-negative")
    alex, masl, (d_src, d_tgt, d_pow), (f_src, f_tgt) = _tables(C)
    if any(kind == "h" for _, _, kind, _ in maps) and not len(f_src):
        raise ComplexError("flip required")
    W = delta + 1
    ng = len(alex)
    size = ng * W
    N = size * len(parts)
    h = np.arange(W, dtype=np.int64)
    rows = np.arange(ng, dtype=np.int64)[:, None] * W + h[None, :]
    offs = [np.asarray(c, dtype=np.int64) for _, c, _ in parts]

    grading, srcs, tgts = [], [], []

    def emit(o_src, src_gen, o_tgt, tgt_gen, height, ok):
        s_el = o_src + src_gen[:, None] * W + h[None, :]
        t_el = o_tgt + tgt_gen[:, None] * W + height
        srcs.append(s_el[ok])
        tgts.append(t_el[ok])

    for p, (_, _, shift) in enumerate(parts):
        c = offs[p]
        grading.append((masl[:, None] + 2 * (h[None, :] - c[:, None]) + shift).ravel())
        if len(d_src):
            ht = h[None, :] - c[d_src][:, None] - d_pow[:, None] + c[d_tgt][:, None]
            emit(p * size, d_src, p * size, d_tgt, ht, (ht >= 0) & (ht < W))
    for ps, pt, kind, s in maps:
        cs, ct = offs[ps], offs[pt]
        if kind == "v":
            gen = np.arange(ng, dtype=np.int64)
            ii = h[None, :] - cs[:, None]
            ht = ii + ct[:, None]
            emit(ps * size, gen, pt * size, gen, ht, (ii >= 0) & (ht >= 0) & (ht < W))
        elif kind == "h":
            jj = h[None, :] - cs[f_src][:, None] + alex[f_src][:, None] - s
            ht = jj + ct[f_tgt][:, None]
            emit(ps * size, f_src, pt * size, f_tgt, ht, (jj >= 0) & (ht >= 0) & (ht < W))
        else:
            raise ValueError(f"unknown map kind {kind!r}")

    src = np.concatenate(srcs) if srcs else np.zeros(0, dtype=np.int64)
    tgt = np.concatenate(tgts) if tgts else np.zeros(0, dtype=np.int64)
    key, count = np.unique(src * max(N, 1) + tgt, return_counts=True)
    key = key[count % 2 == 1]
    src, tgt = key // max(N, 1), key % max(N, 1)
    bd_ptr = np.zeros(N + 1, dtype=np.int64)
    bd_ptr[1:] = np.cumsum(np.bincount(src, minlength=N))

    has_u = np.tile(h > 0, ng * len(parts))
    u_ptr = np.zeros(N + 1, dtype=np.int64)
    u_ptr[1:] = np.cumsum(has_u)
    u_idx = np.flatnonzero(has_u) - 1

    labels = GridLabels([t for t, _, _ in parts], [g.id for g in C.generators], offs, W)
    return FiniteComplex.from_csr(labels, np.concatenate(grading) if grading else [],
                                  bd_ptr, tgt, u_ptr, u_idx, modulus)


def quotient_complex(C: KnotComplex, offset, delta: int, tag=None) -> FiniteComplex:
    """Truncated quotient complex on ``{(g, i) : i + offset(g) in [0, delta]}``.

    ``offset(g)`` describes an upward-closed region ``{i + offset(g) >= 0}``.
    Labels are ``(g, i)``, or ``(tag, g, i)`` when ``tag`` is given.
    """
    return assemble(C, [(tag, [offset(g) for g in C.generators], 0)], delta)


def _offset_A(s):
    return lambda gen: max(0, gen.alexander - s)


def region_A(C: KnotComplex, s: int, delta: int, tag=None) -> FiniteComplex:
    """A_s = C{max(i, j - s) >= 0}, truncated at delta."""
    return quotient_complex(C, _offset_A(s), delta, tag)


def region_B(C: KnotComplex, delta: int, tag=None) -> FiniteComplex:
    """B = C{i >= 0}, truncated at delta."""
    return quotient_complex(C, lambda gen: 0, delta, tag)


def region_j(C: KnotComplex, delta: int, tag=None) -> FiniteComplex:
    """C{j >= 0}, truncated at delta."""
    return quotient_complex(C, lambda gen: gen.alexander, delta, tag)


def _flip_table(C: KnotComplex):
    if not C.flip:
        raise ComplexError("flip required")
    table = {g: [] for g in C.ids}
    for f in C.flip:
        table[f.source].append(f.target)
    return table


def v_map_columns(C: KnotComplex, A: FiniteComplex, B: FiniteComplex):
    """Columns of v_s: keep the part with i >= 0."""
    cols = []
    for lab in A.labels:
        k = _find(B, lab[-2], lab[-1])
        cols.append(() if k is None else (k,))
    return tuple(cols)


def _find(X: FiniteComplex, g, i):
    sample = X.labels[0] if X.labels else None
    if sample is None:
        return None
    key = (g, i) if len(sample) == 2 else (sample[0], g, i)
    return X.index.get(key)


def h_map_columns(C: KnotComplex, s: int, A: FiniteComplex, B: FiniteComplex, flip=None):
    """Columns of h_s: project to j >= s, multiply by U^s, then flip into B."""
    flip = _flip_table(C) if flip is None else flip
    cols = []
    for lab in A.labels:
        g, i = lab[-2], lab[-1]
        a = C[g].alexander
        if i + a - s < 0:
            cols.append(())
            continue
        tgts = set()
        for t in flip[g]:
            k = _find(B, t, i - s + a)
            if k is not None:
                tgts.symmetric_difference_update((k,))
        cols.append(tuple(sorted(tgts)))
    return tuple(cols)


def v_map(C: KnotComplex, s: int, delta: int) -> ChainMap:
    """Projection A_s -> B onto C{i >= 0}; internal degree 0."""
    A, B = region_A(C, s, delta), region_B(C, delta)
    return ChainMap(A, B, v_map_columns(C, A, B), 0)


def h_map(C: KnotComplex, s: int, delta: int) -> ChainMap:
    """h_s : A_s -> B; internal degree -2s."""
    A, B = region_A(C, s, delta), region_B(C, delta)
    return ChainMap(A, B, h_map_columns(C, s, A, B), -2 * s)


def flip_map(C: KnotComplex, delta: int) -> ChainMap:
    """The flip C{j >= 0} -> C{i >= 0}, truncated at delta; degree 0."""
    flip = _flip_table(C)
    J, B = region_j(C, delta), region_B(C, delta)
    cols = []
    for g, i in J.labels:
        a = C[g].alexander
        tgts = set()
        for t in flip[g]:
            k = B.index.get((t, i + a))
            if k is not None:
                tgts.symmetric_difference_update((k,))
        cols.append(tuple(sorted(tgts)))
    return ChainMap(J, B, tuple(cols), 0)


def large_surgery_homology(C: KnotComplex, s: int, delta: int | None = None):
    """Stable homology of A_s (HF+ of a large surgery in the class of s).

    With ``delta`` given, towers are read off by comparing delta with
    delta+1 only; otherwise the truncation is increased until it stabilizes.
    Returns None if a fixed ``delta`` is too small to separate the towers.
    """
    from .cone import _classify, default_delta0, stabilize
    from .homalg import truncated_module

    def builder(d):
        return truncated_module(region_A(C, s, d), d)

    if delta is not None:
        return _classify(builder(delta), builder(delta + 1))
    return stabilize(builder, default_delta0(C, 0)).module
