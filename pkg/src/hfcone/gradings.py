"""Correction terms d(n, i) of lens spaces L(n, 1), in exact arithmetic."""

from __future__ import annotations

from fractions import Fraction

__all__ = ["d_lens", "d_invariants", "format_rational", "parse_rational"]


def _d_positive(n: int, i: int, window: int) -> Fraction:
    best = None
    for s in range(-window, window + 1):
        if (s - i) % n:
            continue
        q = Fraction(1, 4) * (1 - Fraction((n + 2 * s) ** 2, n))
        if best is None or q > best:
            best = q
    return -best


def d_lens(n: int, i: int, *, window: int | None = None) -> Fraction:
    """Bottom degree of the tower of HF+(L(n,1), i) for the residue ``i`` mod n.

    For n > 0 this is minus the maximum of (1 - (n+2s)^2/n)/4 over s = i
    mod n; for n < 0 it is -d(-n, i).  The quadratic peaks at s = -n/2, so
    scanning s in [-|n|, |n|] suffices; ``window`` overrides the scan range.
    """
    if n == 0:
        raise ValueError("d(n, i) needs n != 0")
    m = abs(n)
    i %= m
    w = m if window is None else window
    if n > 0:
        return _d_positive(m, i, w)
    return -_d_positive(m, i, w)


def d_invariants(C, n: int, **kw) -> dict[int, list[Fraction]]:
    """Tower bottoms of HF+(S^3_n(K), i) for every residue i."""
    from .cone import surgery_homology

    if n == 0:
        raise ValueError("d-invariants need n != 0")
    return {i: list(surgery_homology(C, n, i, **kw).towers) for i in range(abs(n))}


def format_rational(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text)
