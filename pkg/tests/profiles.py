"""Read a chain map between truncated towers as a power of U."""

from hfcone.homalg import Homology, induced_on_homology


def u_power(f, delta):
    """Return k if f induces U^k between the towers of source and target.

    Both homologies must be one-dimensional in each degree of their tower
    below the truncation cutoff.  The lowest k source classes must map to
    zero and every class above them must hit the target class k steps lower.
    Returns None if the induced map has any other shape.
    """
    Hs, Ht = Homology(f.source), Homology(f.target)
    ls, lt = Hs.lowest_degree(), Ht.lowest_degree()
    src = Hs.nonzero_degrees(limit=ls + 2 * delta)
    F = induced_on_homology(f, Hs, Ht, src)
    ranks = []
    for d in src:
        if Hs.dim(d) != 1:
            return None
        if d + f.degree > lt + 2 * delta:
            break
        ranks.append(F.rank(d))
    k = ranks.index(1) if 1 in ranks else len(ranks)
    if any(r != 0 for r in ranks[:k]) or any(r != 1 for r in ranks[k:]):
        return None
    if k < len(ranks) and src[k] + f.degree != lt:
        return None  # lowest hit must be the bottom of the target tower
    return k
