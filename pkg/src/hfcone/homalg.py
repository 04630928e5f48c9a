"""Homological algebra over F2 for finite complexes with a nilpotent U.

Homology is computed one degree at a time; the boundary map is block
diagonal by degree, so each block is reduced separately.  Vectors inside a
block are Python ints used as bitsets over the block's positions.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import f2
from .regions import ChainMap, FiniteComplex

__all__ = [
    "TOWER",
    "GradedModule",
    "Homology",
    "homology",
    "decompose",
    "truncated_module",
    "mapping_cone",
    "inclusion",
    "InducedMap",
    "induced_on_homology",
    "is_quasi_iso",
]

#: Length marker for an infinite tower F2[U, U^-1]/U F2[U].
TOWER = float("inf")


def _rat(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class GradedModule:
    """Direct sum of cyclic F2[U]-modules, as sorted ``(bottom, length)`` pairs.

    A length of ``TOWER`` stands for an infinite tower with the given bottom.
    """

    pieces: tuple = ()

    def __post_init__(self):
        canon = tuple(sorted((_rat(b), L if L == TOWER else int(L)) for b, L in self.pieces))
        for _, L in canon:
            if L != TOWER and L < 1:
                raise ValueError("piece lengths must be positive")
        object.__setattr__(self, "pieces", canon)

    @property
    def towers(self) -> tuple[Fraction, ...]:
        return tuple(b for b, L in self.pieces if L == TOWER)

    @property
    def reduced(self) -> "GradedModule":
        return GradedModule(tuple(p for p in self.pieces if p[1] != TOWER))

    @property
    def dimension(self) -> int:
        if self.towers:
            raise ValueError("infinite-dimensional module")
        return sum(L for _, L in self.pieces)

    def shift(self, c) -> "GradedModule":
        c = _rat(c)
        return GradedModule(tuple((b + c, L) for b, L in self.pieces))

    def relative(self) -> "GradedModule":
        """Shift so that the lowest bottom degree is 0."""
        if not self.pieces:
            return self
        return self.shift(-self.pieces[0][0])

    def multiset(self) -> Counter:
        return Counter(self.pieces)

    def degree_dims(self) -> Counter:
        """Dimension in each degree (finite pieces only)."""
        out = Counter()
        for b, L in self.pieces:
            if L != TOWER:
                for k in range(L):
                    out[b + 2 * k] += 1
        return out

    def __add__(self, other: "GradedModule") -> "GradedModule":
        return GradedModule(self.pieces + other.pieces)

    def __len__(self):
        return len(self.pieces)

    def __str__(self):
        return format_pieces(self.pieces)


def _fmt_rat(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_pieces(pieces) -> str:
    if not pieces:
        return "0"
    parts = []
    for (b, L), mult in sorted(Counter(pieces).items()):
        body = f"[{_fmt_rat(b)},tower]" if L == TOWER else f"[{_fmt_rat(b)},len {L}]"
        parts.append(body if mult == 1 else f"{mult}×{body}")
    return ", ".join(parts)


# -- homology ------------------------------------------------------------------

class Homology:
    """Lazily computed homology of a finite complex, degree by degree.

    For each degree ``d`` this keeps a basis of H_d (cycle representatives)
    and a pivot table expressing any cycle in that basis modulo boundaries.
    """

    def __init__(self, X: FiniteComplex):
        self.X = X
        self.blocks = X.blocks()
        pos = np.zeros(len(X), dtype=np.int64)
        for members in self.blocks.values():
            pos[members] = np.arange(len(members), dtype=np.int64)
        self.pos = pos
        self._reduced = {}
        self._data = {}
        self._umat = {}

    def _rd(self, d):
        return self.X.reduce_degree(d)

    @property
    def chain_degrees(self) -> list[int]:
        return sorted(self.blocks)

    def _columns(self, ptr, idx, d):
        """Bitset images of block ``d`` under a CSR map, in target positions."""
        members = self.blocks.get(d)
        if members is None:
            return []
        return f2.csr_bitsets(ptr, idx, members, self.pos)

    def _reduce(self, d, track):
        hit = self._reduced.get(d)
        if hit is not None and (hit[1] is not None or not track):
            return hit
        cols = self._columns(self.X.bd_ptr, self.X.bd_idx, d)
        res = f2.reduce_columns(cols, track=track)
        self._reduced[d] = res
        return res

    def _compute(self, d):
        if d in self._data:
            return self._data[d]
        if d not in self.blocks:
            data = ([], {}, {})
            self._data[d] = data
            return data
        red, ops = self._reduce(d, True)
        cycles = [ops[j] for j, c in enumerate(red) if not c]
        above = self._rd(d + 1)
        bnd = [c for c in self._reduce(above, False)[0] if c] if above in self.blocks else []
        reduced, _ = f2.reduce_columns(bnd + cycles)
        piv_cols, piv_tags = {}, {}
        for c in bnd:
            p = c.bit_length() - 1
            piv_cols[p] = c
            piv_tags[p] = 0
        reps = []
        for c in reduced[len(bnd):]:
            if c:
                p = c.bit_length() - 1
                piv_cols[p] = c
                piv_tags[p] = 1 << len(reps)
                reps.append(c)
        data = (reps, piv_cols, piv_tags)
        self._data[d] = data
        return data

    def dim(self, d) -> int:
        return len(self._compute(self._rd(d))[0])

    def reps(self, d) -> list[int]:
        return self._compute(self._rd(d))[0]

    def rep_labels(self, d) -> list[list]:
        """Representatives as lists of basis labels (for inspection)."""
        d = self._rd(d)
        members = self.blocks.get(d, [])
        out = []
        for r in self.reps(d):
            out.append([self.X.labels[int(members[p])] for p in range(r.bit_length()) if r >> p & 1])
        return out

    def coords(self, d, vecs) -> list[int]:
        """Coordinates (bitsets over H_d) of cycles given as block bitsets."""
        d = self._rd(d)
        _, piv_cols, piv_tags = self._compute(d)
        out = []
        for rem, tag in f2.reduce_vectors(piv_cols, piv_tags, vecs):
            if rem:
                raise ValueError(f"vector in degree {d} is not a cycle")
            out.append(tag)
        return out

    def u_matrix(self, d) -> list[int]:
        """Images of the H_d basis under U, as bitsets over H_{d-2}."""
        d = self._rd(d)
        if d in self._umat:
            return self._umat[d]
        reps = self.reps(d)
        low = self._rd(d - 2)
        if not reps or low not in self.blocks:
            out = [0] * len(reps)
        else:
            images = self._columns(self.X.u_ptr, self.X.u_idx, d)
            out = self.coords(low, f2.apply_map(images, reps))
        self._umat[d] = out
        return out

    def nonzero_degrees(self, limit=None) -> list[int]:
        """Degrees with nonzero homology (up to ``limit`` when Z-graded)."""
        out = []
        for d in self.chain_degrees:
            if limit is not None and d > limit:
                break
            if self.dim(d):
                out.append(d)
        return out

    def lowest_degree(self):
        for d in self.chain_degrees:
            if self.dim(d):
                return d
        return None


def homology(X: FiniteComplex) -> Homology:
    return Homology(X)


def decompose(H: Homology, degrees=None, projection=None) -> GradedModule:
    """Cyclic decomposition of (the image of) the U-module H.

    ``degrees`` restricts to a U-submodule given by a set of degrees closed
    under U (default: all).  ``projection`` maps a degree to a list of
    bitsets (images of the H_d basis under a U-equivariant map F); the
    decomposition is then that of the image of F.

    Uses N(d, k) = rank(F U^k : H_d -> .); the number of pieces with top d and
    length L is (N(d,L-1) - N(d+2,L)) - (N(d,L) - N(d+2,L+1)).
    """
    if degrees is None:
        degrees = H.nonzero_degrees()
    degrees = [H._rd(d) for d in degrees]
    present = set(degrees)
    N = {}
    maxlen = {}
    for d in degrees:
        basis = [1 << j for j in range(H.dim(d))]
        cur, k = d, 0
        while basis and cur in present:
            if projection is None:
                N[(d, k)] = len(basis)
            else:
                N[(d, k)] = f2.rank(f2.apply_map(projection(cur), basis))
            basis = f2.echelon(f2.apply_map(H.u_matrix(cur), basis))
            cur = H._rd(cur - 2)
            k += 1
            if k > 4 * len(H.X) + 4:
                raise RuntimeError("U is not nilpotent on homology")
        maxlen[d] = k

    def n(d, k):
        return N.get((H._rd(d), k), 0)

    pieces = []
    for d in degrees:
        for L in range(1, maxlen[d] + 1):
            c = (n(d, L - 1) - n(d + 2, L)) - (n(d, L) - n(d + 2, L + 1))
            if c < 0:
                raise RuntimeError("inconsistent rank data")
            bottom = H._rd(d - 2 * (L - 1))
            pieces.extend([(bottom, L)] * c)
    return GradedModule(tuple(pieces))


def truncated_module(X: FiniteComplex, delta: int) -> GradedModule:
    """Decomposition of H(X) below the ghost cutoff ``h_min + 2*delta``.

    For an integer-graded truncation X = ker U^{delta+1} of a complex of
    finite type, classes above this cutoff are truncation artifacts.
    """
    if X.modulus:
        raise ValueError("degree cutoff needs an integer grading")
    H = Homology(X)
    low = H.lowest_degree()
    if low is None:
        return GradedModule()
    return decompose(H, H.nonzero_degrees(limit=low + 2 * delta))


# -- cones and induced maps ----------------------------------------------------

def mapping_cone(f: ChainMap) -> FiniteComplex:
    """Cone of f: source keeps its grading, target is shifted by -(deg f + 1)."""
    S, T = f.source, f.target
    if S.modulus != T.modulus:
        raise ValueError("source and target gradings disagree")
    problems = [m for m in f.check() if "homogeneous" in m]
    if problems:
        raise ValueError(problems[0])
    m = len(S)
    labels = tuple(("src", lab) for lab in S.labels) + tuple(("tgt", lab) for lab in T.labels)
    grading = np.concatenate([S.grading, T.grading - f.degree - 1])
    boundary = [S.boundary[k] + tuple(m + t for t in f.columns[k]) for k in range(m)]
    boundary += [tuple(m + t for t in col) for col in T.boundary]
    u_action = list(S.u_action) + [tuple(m + t for t in col) for col in T.u_action]
    return FiniteComplex(labels, grading, boundary, u_action, S.modulus)


def inclusion(S: FiniteComplex, T: FiniteComplex) -> ChainMap:
    """The chain map sending each basis label of S to the same label of T."""
    cols = []
    for lab in S.labels:
        k = T.index.get(lab)
        if k is None:
            raise ValueError(f"label {lab!r} missing from target")
        cols.append((k,))
    return ChainMap(S, T, tuple(cols), 0)


@dataclass
class InducedMap:
    """A map on homology: ``columns[d]`` lists target coordinates in degree d+deg."""

    source: Homology
    target: Homology
    degree: int
    columns: dict

    def rank(self, d=None) -> int:
        if d is not None:
            return f2.rank(self.columns.get(self.source._rd(d), []))
        return sum(f2.rank(c) for c in self.columns.values())

    def matrix(self, d) -> list[list[int]]:
        """Dense 0/1 matrix (rows: target basis, columns: source basis)."""
        d = self.source._rd(d)
        cols = self.columns.get(d, [])
        rows = self.target.dim(d + self.degree)
        return [[(c >> r) & 1 for c in cols] for r in range(rows)]


def induced_on_homology(f: ChainMap, Hs: Homology | None = None, Ht: Homology | None = None,
                        degrees=None) -> InducedMap:
    Hs = Hs or Homology(f.source)
    Ht = Ht or Homology(f.target)
    if degrees is None:
        degrees = Hs.nonzero_degrees()
    columns = {}
    for d in degrees:
        d = Hs._rd(d)
        reps = Hs.reps(d)
        if not reps:
            continue
        td = Ht._rd(d + f.degree)
        if td not in Ht.blocks:
            columns[d] = [0] * len(reps)
            continue
        images = _retarget(Hs, Ht, f, d)
        columns[d] = Ht.coords(td, f2.apply_map(images, reps))
    return InducedMap(Hs, Ht, f.degree, columns)


def _retarget(Hs: Homology, Ht: Homology, f: ChainMap, d):
    out = []
    pos = Ht.pos.tolist()
    for k in Hs.blocks.get(d, ()).tolist():
        v = 0
        for t in f.columns[k]:
            v ^= 1 << pos[t]
        out.append(v)
    return out


def is_quasi_iso(f: ChainMap) -> bool:
    Hs, Ht = Homology(f.source), Homology(f.target)
    src = Hs.nonzero_degrees()
    tgt = {Ht._rd(d) for d in Ht.nonzero_degrees()}
    if {Ht._rd(d + f.degree) for d in src} != tgt:
        return False
    F = induced_on_homology(f, Hs, Ht, src)
    for d in src:
        n = Hs.dim(d)
        if Ht.dim(d + f.degree) != n or F.rank(d) != n:
            return False
    return True
