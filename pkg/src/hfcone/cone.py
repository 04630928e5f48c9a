"""Truncated surgery mapping cones X(n), per Spin^c class, and their homology.

The cone of D_{n,i} : (+)_s A_s -> (+)_s B_s, s = i mod n, is cut to the window
A_s for -b <= s <= b and B_s for -b+n <= s <= b.  Each summand is truncated
at ``delta``; towers are detected by running two truncation levels and
watching which cyclic pieces grow.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .gradings import d_lens, format_rational
from .homalg import (TOWER, GradedModule, Homology, decompose, inclusion, induced_on_homology,
                     truncated_module)
from .knotcx import ComplexError, KnotComplex
from .regions import ChainMap, FiniteComplex, assemble, region_B

__all__ = [
    "StabilizationError",
    "SurgeryResult",
    "Stable",
    "truncation_width",
    "default_delta0",
    "assign_gradings",
    "build_cone",
    "stabilize",
    "surgery_homology",
    "zero_surgery_homology",
    "cobordism_map",
    "CobordismResult",
]

log = logging.getLogger(__name__)

DELTA_CAP_FACTOR = 2 ** 10


class StabilizationError(RuntimeError):
    """The truncated modules did not settle before the delta cap."""


@dataclass(frozen=True)
class SurgeryResult:
    n: int
    i: int
    towers: tuple
    reduced: GradedModule
    meta: dict = field(default_factory=dict, compare=False)

    def key(self):
        return (tuple(sorted(self.towers)), self.reduced.pieces)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "i": self.i,
            "towers": [format_rational(t) for t in self.towers],
            "reduced": [{"bottom": format_rational(b), "length": L} for b, L in self.reduced.pieces],
            "meta": {"delta": self.meta.get("delta"), "width": self.meta.get("width")},
        }

    def describe(self) -> str:
        if self.towers:
            head = "tower bottom " + ", ".join(format_rational(t) for t in self.towers)
        else:
            head = "no tower"
        return f"{head}; reduced: {self.reduced}"


def truncation_width(C: KnotComplex, n: int) -> int:
    return max(C.max_abs_alexander, 1) + abs(n)


def default_delta0(C: KnotComplex, n: int) -> int:
    """Starting truncation level: wide enough for the reduced part of most inputs."""
    lo, hi = C.maslov_range
    return (hi - lo) + 2 * C.max_abs_alexander + abs(n) + 4


def assign_gradings(n: int, s: int) -> tuple[int, int]:
    """Grading shifts ``(B_shift, A_shift)`` of the summands B_s and A_s.

    Relative to these, v_s and h_s have degree -1 in the cone, and the
    absolute grading is the cone grading plus d(n, i).
    """
    if n == 0:
        raise ValueError("n must be nonzero")
    if n > 0:
        sigma = s % n
        ell = (s - sigma) // n
        b = 2 * ell * sigma + n * ell * (ell - 1) - 1
    else:
        m = -n
        sigma = (-s) % m
        ell = (-s - sigma) // m
        b = -2 * ell * sigma - m * ell * (ell - 1)
    return b, b + 1


def _window(n, i, b):
    m = abs(n)
    a_range = [s for s in range(-b, b + 1) if (s - i) % m == 0]
    b_range = [s for s in range(-b + n, b + 1) if (s - i) % m == 0]
    return a_range, b_range


def build_cone(C: KnotComplex, n: int, i: int, delta: int, b: int) -> FiniteComplex:
    """The truncated cone X^delta_i(n) in cone grading.

    Labels are ``(("A", s), g, k)`` and ``(("B", s), g, k)`` for ``U^{-k} g``.
    """
    if n == 0:
        raise ValueError("use zero_surgery_homology for n = 0")
    if delta < 0 or b < 1:
        raise ValueError("need delta >= 0 and b >= 1")
    if not C.flip:
        raise ComplexError("flip required")
    a_range, b_range = _window(n, i % abs(n), b)
    if not a_range or not b_range:
        raise ComplexError("truncation window is empty")
    parts, maps = [], []
    where = {}
    for s in b_range:
        where[s] = len(parts)
        parts.append((("B", s), [0] * len(C), assign_gradings(n, s)[0]))
    for s in a_range:
        p = len(parts)
        parts.append((("A", s), [max(0, g.alexander - s) for g in C.generators],
                      assign_gradings(n, s)[1]))
        if s in where:
            maps.append((p, where[s], "v", s))
        if s + n in where:
            maps.append((p, where[s + n], "h", s))
    return assemble(C, parts, delta, maps)


# -- stabilization ---------------------------------------------------------------

@dataclass(frozen=True)
class Stable:
    module: GradedModule
    delta: int


def _classify(m0: GradedModule, m1: GradedModule):
    """Split pieces into towers (grew by one) and reduced (unchanged)."""
    by0, by1 = {}, {}
    for bt, L in m0.pieces:
        by0.setdefault(bt, Counter())[L] += 1
    for bt, L in m1.pieces:
        by1.setdefault(bt, Counter())[L] += 1
    pieces = []
    for bt in sorted(set(by0) | set(by1)):
        c0, c1 = by0.get(bt, Counter()), by1.get(bt, Counter())
        common = c0 & c1
        rest0, rest1 = c0 - common, c1 - common
        grown = Counter({L + 1: k for L, k in rest0.items()})
        if grown != rest1:
            return None
        pieces.extend((bt, L) for L in common.elements())
        pieces.extend((bt, TOWER) for _ in rest0.elements())
    return GradedModule(tuple(pieces))


def stabilize(builder, delta0: int, cap: int | None = None) -> Stable:
    """Run ``builder(delta) -> GradedModule`` until the classification settles.

    Each round compares delta with delta+1; rounds at delta and 2*delta must
    agree.  Raises StabilizationError past ``cap`` (default 2^10 * delta0).
    """
    delta0 = max(1, delta0)
    cap = DELTA_CAP_FACTOR * delta0 if cap is None else cap

    def one_round(d):
        return _classify(builder(d), builder(d + 1))

    delta = delta0
    prev = one_round(delta)
    while 2 * delta <= cap:
        cur = one_round(2 * delta)
        if prev is not None and prev == cur:
            return Stable(cur, 2 * delta)
        log.debug("not stable at delta=%d, doubling", delta)
        delta *= 2
        prev = cur
    raise StabilizationError(f"no stabilization up to delta={cap}")


def _canonical_residue(n, i):
    return 0 if abs(n) == 1 else i % abs(n)


def surgery_homology(C: KnotComplex, n: int, i: int, *, delta: int | None = None,
                     width: int | None = None) -> SurgeryResult:
    """HF+ of n-surgery in the Spin^c class i, with absolute gradings.

    ``delta`` fixes the truncation level (one comparison round at delta and
    delta+1, without the stability check); by default it is chosen
    automatically.
    """
    if n == 0:
        raise ValueError("use zero_surgery_homology for n = 0")
    i = _canonical_residue(n, i)
    b = truncation_width(C, n) if width is None else width

    def builder(d):
        return truncated_module(build_cone(C, n, i, d, b), d)

    if delta is None:
        st = stabilize(builder, default_delta0(C, n))
        module, used = st.module, st.delta
    else:
        module = _classify(builder(delta), builder(delta + 1))
        # every class of a nonzero surgery carries a tower
        if module is None or not module.towers:
            raise StabilizationError(f"truncation level {delta} is too small")
        used = delta
    module = module.shift(d_lens(n, i))
    return SurgeryResult(n, i, module.towers, module.reduced, {"delta": used, "width": b})


# -- zero surgery ------------------------------------------------------------------

def _zero_cone(C: KnotComplex, i: int, delta: int) -> FiniteComplex:
    """Cone of v_i + h_i : A_i -> B; graded mod 2|i| unless i = 0."""
    if not C.flip:
        raise ComplexError("flip required")
    parts = [("A", [max(0, g.alexander - i) for g in C.generators], 0),
             ("B", [0] * len(C), -1)]
    maps = [(0, 1, "v", i), (0, 1, "h", i)]
    return assemble(C, parts, delta, maps, modulus=2 * abs(i) if i else None)


def _zero_module(C, i, delta):
    X = _zero_cone(C, i, delta)
    if not i:
        return truncated_module(X, delta)
    # Z/2|i| grading: drop truncation artifacts by passing to a wider truncation
    Y = _zero_cone(C, i, 2 * delta + 1)
    H, HY = Homology(X), Homology(Y)
    F = induced_on_homology(inclusion(X, Y), H, HY)
    return decompose(H, projection=lambda d: F.columns.get(d, []))


def zero_surgery_homology(C: KnotComplex, i: int, *, delta: int | None = None) -> SurgeryResult:
    """HF+ of 0-surgery in Spin^c class i, with relative gradings.

    For i = 0 the lowest bottom degree is placed at 0; for i != 0 gradings
    are residues mod 2|i|, also anchored so the lowest residue is 0.
    """
    if delta is None:
        st = stabilize(lambda d: _zero_module(C, i, d), default_delta0(C, 0))
        module, used = st.module, st.delta
    else:
        module = _classify(_zero_module(C, i, delta), _zero_module(C, i, delta + 1))
        if module is None:
            raise StabilizationError(f"truncation level {delta} is too small")
        used = delta
    if module.pieces:
        module = module.shift(-min(bt for bt, _ in module.pieces))
    if i:
        m = 2 * abs(i)
        module = GradedModule(tuple((bt % m, L) for bt, L in module.pieces))
    return SurgeryResult(0, i, module.towers, module.reduced, {"delta": used, "width": None})


# -- cobordism maps ----------------------------------------------------------------

@dataclass
class CobordismResult:
    n: int
    i: int
    s: int
    degree: Fraction
    induced: object
    delta: int

    def rank_by_degree(self) -> dict:
        """Rank of the map on each source degree (internal grading of B_s)."""
        return {d: self.induced.rank(d) for d in self.induced.source.nonzero_degrees()}

    def to_dict(self) -> dict:
        src = self.induced.source
        rows = []
        for d in src.nonzero_degrees():
            rows.append({
                "source_degree": d,
                "target_degree": format_rational(d + self.degree),
                "rank": self.induced.rank(d),
                "matrix": self.induced.matrix(d),
            })
        return {"n": self.n, "i": self.i, "s": self.s, "degree": format_rational(self.degree),
                "delta": self.delta, "blocks": rows}


def cobordism_map(C: KnotComplex, n: int, s: int, *, delta: int | None = None,
                  width: int | None = None) -> CobordismResult:
    """Map on homology induced by including B_s into the truncated cone.

    The source is H(B^delta) in its own grading (that of HF+(S^3)); the
    target is the cone homology in absolute grading, so the map has the
    rational degree B_shift(s) + d(n, i).
    """
    if n == 0:
        raise ValueError("n must be nonzero")
    b = truncation_width(C, n) if width is None else width
    i = s % abs(n)
    _, b_range = _window(n, i, b)
    if s not in b_range:
        raise ValueError(f"s={s} lies outside the B window [{-b + n}, {b}]")
    if delta is None:
        delta = default_delta0(C, n)
    X = build_cone(C, n, i, delta, b)
    Bs = region_B(C, delta, tag=("B", s))
    shift = assign_gradings(n, s)[0]
    f = inclusion(Bs, X)
    f = ChainMap(Bs, X, f.columns, shift)
    F = induced_on_homology(f)
    i = _canonical_residue(n, i)
    return CobordismResult(n, i, s, shift + d_lens(n, i), F, delta)
