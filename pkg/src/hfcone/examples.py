"""Closed-form answers used as independent oracles.

These never call the cone machinery: the unknot kernel and cokernel maps
are written down explicitly, and the circle-bundle answers are assembled
from binomial counts.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .gradings import d_lens
from .homalg import GradedModule

__all__ = [
    "ExpectedModule",
    "epsilon",
    "cokernel_exponent",
    "unknot_D_columns",
    "unknot_kernel_basis",
    "unknot_cokernel_check",
    "x_module",
    "circle_bundle_shift",
    "expected_circle_bundle",
]


@dataclass(frozen=True)
class ExpectedModule:
    towers: tuple
    reduced: GradedModule
    source: str
    tie: bool = False


def _split(s: int, n: int) -> tuple[int, int]:
    sigma = s % n
    return sigma, (s - sigma) // n


def epsilon(s: int, n: int) -> int:
    """U-exponent of the s-component of the kernel embedding, n > 0."""
    if n <= 0:
        raise ValueError("n must be positive")
    sigma, k = _split(s, n)
    if k >= 0:
        return k * sigma + k * (k - 1) * n // 2
    return (k + 1) * sigma + k * (k + 1) * n // 2


def cokernel_exponent(s: int, n: int) -> int:
    """U-exponent of the s-component of the cokernel map for -n surgery.

    The minimal non-negative solution of e(t) - e(t-n) = t on each residue
    class, e(sigma + kn) = (k+1) sigma + n k (k+1)/2.
    """
    if n <= 0:
        raise ValueError("n must be positive")
    sigma, k = _split(s, n)
    return (k + 1) * sigma + n * k * (k + 1) // 2


# -- unknot towers ---------------------------------------------------------------
#
# For the unknot every A_s and B_s is a tower.  Truncated at delta, basis
# element (X, s, j) stands for U^{-j} x in that summand, 0 <= j <= delta.
# v_s acts as U^{max(-s,0)} and h_s as U^{max(s,0)}.

def _unknot_window(n, i, b):
    m = abs(n)
    a = [s for s in range(-b, b + 1) if (s - i) % m == 0]
    bb = [s for s in range(-b + n, b + 1) if (s - i) % m == 0]
    return a, bb


def unknot_D_columns(n: int, i: int, delta: int, b: int) -> dict:
    """D^delta_{n,i} on the truncated window: (A, s, j) -> set of (B, t, j')."""
    a_range, b_range = _unknot_window(n, i, b)
    bset = set(b_range)
    D = {}
    for s in a_range:
        for j in range(delta + 1):
            img = set()
            jv = j - max(-s, 0)
            if s in bset and jv >= 0:
                img ^= {("B", s, jv)}
            jh = j - max(s, 0)
            if s + n in bset and jh >= 0:
                img ^= {("B", s + n, jh)}
            D[("A", s, j)] = img
    return D


def unknot_kernel_basis(n: int, i: int, delta: int, b: int | None = None) -> list[set]:
    """Image of the truncated tower under the kernel embedding, n > 0.

    The element U^{-j} xi maps to the sum over s = i mod n of the labels
    ``(A, s, j - eps(s))`` whose height is non-negative.  Returns one set of
    basis labels per j.
    """
    if n <= 0:
        raise ValueError("n must be positive")
    b = abs(n) + 1 if b is None else b
    a_range, _ = _unknot_window(n, i, b)
    out = []
    for j in range(delta + 1):
        vec = set()
        for s in a_range:
            e = epsilon(s, n)
            if j - e >= 0:
                vec.add(("A", s, j - e))
        out.append(vec)
    return out


def unknot_cokernel_check(n: int, i: int, delta: int, b: int | None = None, D=None) -> bool:
    """Check that the cokernel map kills the image of D_{-n,i} and is onto.

    The map sends (B, s, j) to U^{e(s)} applied to U^{-j} eta, i.e. to the
    tower element of height j - e(s) (zero when negative).  ``D`` can be
    supplied to run the check against a modified differential.
    """
    if n <= 0:
        raise ValueError("n must be positive")
    b = abs(n) + 1 if b is None else b
    if D is None:
        D = unknot_D_columns(-n, i, delta, b)

    def pi(label):
        _, s, j = label
        h = j - cokernel_exponent(s, n)
        return h if 0 <= h <= delta else None

    for img in D.values():
        acc = set()
        for lab in img:
            h = pi(lab)
            if h is not None:
                acc ^= {h}
        if acc:
            return False
    _, b_range = _unknot_window(-n, i, b)
    hit = {pi(("B", s, j)) for s in b_range for j in range(delta + 1)}
    return set(range(delta + 1)) <= hit


# -- circle bundles --------------------------------------------------------------

def x_module(g: int, d: int, shift=0) -> GradedModule:
    """The module X(g, d), homology of the d-th symmetric product, shifted.

    For each 0 <= i <= d there are C(2g, i) cyclic pieces of length d-i+1
    with top degree d-i, hence bottom degree -(d-i), before the shift.
    """
    if d < 0:
        raise ValueError("d must be non-negative")
    shift = Fraction(shift)
    pieces = []
    for i in range(d + 1):
        pieces.extend([(shift - (d - i), d - i + 1)] * comb(2 * g, i))
    return GradedModule(tuple(pieces))


def circle_bundle_shift(n: int, i: int, s: int) -> Fraction:
    """Grading shift c(i, s) of the X-summand indexed by s."""
    d = d_lens(n, i)
    if s >= 0:
        return d - 1 - s + sum(2 * t for t in range(0, s + 1) if (t - i) % n == 0)
    return d - 1 + s - sum(2 * t for t in range(s, 1) if (t - i) % n == 0)


def _minimal_rep(n, i):
    """Representative of i mod n with least absolute value; ties go positive."""
    j = i % n
    if j > n - j:
        return j - n, False
    return j, j == n - j


def expected_circle_bundle(g: int, n: int, i: int) -> ExpectedModule:
    """Reduced HF+ of the Euler-number-n circle bundle over a genus-g surface."""
    if n <= 0:
        raise ValueError("n must be positive")
    i %= n
    j, tie = _minimal_rep(n, i)
    pieces = GradedModule()
    for s in range(-g, g + 1):
        if (s - i) % n or s == j or g - 1 - abs(s) < 0:
            continue
        pieces = pieces + x_module(g, g - 1 - abs(s), circle_bundle_shift(n, i, s))
    return ExpectedModule((), pieces, f"circle bundle g={g} n={n}", tie)
