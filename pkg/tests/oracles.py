"""Reference computations that share no code with the package.

Linear algebra here is plain Gaussian elimination on Python sets, which is
slow but easy to trust; it is only used on small complexes.
"""

from collections import Counter
from fractions import Fraction


def gf2_rank(columns):
    """Rank of a list of columns, each given as an iterable of row indices."""
    pivots = {}
    rank = 0
    for col in columns:
        v = set(col)
        while v:
            p = max(v)
            if p not in pivots:
                pivots[p] = v
                rank += 1
                break
            v = v ^ pivots[p]
    return rank


def betti(grading, boundary):
    """Homology dimension per degree of a finite graded complex over F2."""
    by_deg = {}
    for k, d in enumerate(grading):
        by_deg.setdefault(int(d), []).append(k)
    ranks = {d: gf2_rank([boundary[k] for k in ks]) for d, ks in by_deg.items()}
    return Counter({d: len(ks) - ranks[d] - ranks.get(d + 1, 0)
                    for d, ks in by_deg.items()
                    if len(ks) - ranks[d] - ranks.get(d + 1, 0)})


def lens_d(n, i):
    """Correction term of n-surgery on the unknot, closed form.

    For n > 0 the tower of L(n,1) in class i starts at ((2i - n)^2 - n) / 4n;
    reversing orientation negates it.
    """
    if n < 0:
        return -lens_d(-n, i % -n)
    i %= n
    return Fraction((2 * i - n) ** 2 - n, 4 * n)


def staircase_steps_symmetric(half):
    """A palindromic step list built from its first half."""
    return list(half) + list(reversed(half))
