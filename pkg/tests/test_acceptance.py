"""Acceptance suite: the ten end-to-end criteria, one PASS/FAIL line each.

Run alone with ``pytest tests/test_acceptance.py -s`` or as a script.
All comparisons are exact (rationals and multisets).
"""

import sys
import time

import pytest

from hfcone import builtin, d_lens, large_surgery_homology, surgery_homology, zero_surgery_homology
from hfcone.cone import build_cone, truncation_width
from hfcone.examples import expected_circle_bundle, unknot_cokernel_check, unknot_D_columns, unknot_kernel_basis
from hfcone.homalg import GradedModule, TOWER
from hfcone.regions import h_map, v_map
from oracles import gf2_rank
from profiles import u_power


def full(res):
    return GradedModule(tuple((t, TOWER) for t in res.towers) + res.reduced.pieces)


def lens_spaces():
    bad = []
    for n in [k for m in range(1, 7) for k in (m, -m)]:
        for i in range(abs(n)):
            r = surgery_homology(builtin("unknot"), n, i)
            if r.towers != (d_lens(n, i),) or r.reduced.pieces:
                bad.append((n, i, r.describe()))
    return not bad, "n = +-1..+-6, every residue" if not bad else f"mismatch {bad[:3]}"


def t34_plus_one():
    r = surgery_homology(builtin("t34"), 1, 0)
    ok = r.towers == (-2,) and r.reduced.pieces == ((-2, 1), (-2, 1), (0, 1), (0, 1))
    return ok, r.describe()


def t34_minus_one():
    r = surgery_homology(builtin("t34"), -1, 0)
    ok = r.towers == (0,) and r.reduced.pieces == ((-7, 1), (-7, 1), (-3, 1), (-3, 1), (-1, 1))
    return ok, r.describe()


def t34_maps():
    t, delta = builtin("t34"), 6
    expected = {2: 3, 1: 2, 0: 1, -1: 1, -2: 1, -3: 0, -4: 0, -5: 0}
    got = {}
    for s, k in expected.items():
        got[s] = (u_power(h_map(t, s, delta), delta), u_power(v_map(t, -s, delta), delta))
    ok = all(got[s] == (k, k) for s, k in expected.items())
    return ok, "U-powers (h_s, v_-s): " + ", ".join(f"s={s}:{got[s]}" for s in expected)


def circle_bundles_one():
    bad = []
    for g in (1, 2, 3, 4):
        r = surgery_homology(builtin(f"borromean:{g}"), 1, 0)
        if r.reduced != expected_circle_bundle(g, 1, 0).reduced:
            bad.append((g, str(r.reduced)))
    return not bad, "g=1..4" if not bad else f"mismatch {bad}"


def circle_bundles_general():
    bad, checked = [], 0
    for g, n in ((2, 2), (3, 2), (3, 3)):
        C = builtin(f"borromean:{g}")
        for i in range(n):
            exp = expected_circle_bundle(g, n, i)
            if exp.tie:
                continue
            checked += 1
            r = surgery_homology(C, n, i)
            if r.reduced != exp.reduced:
                bad.append((g, n, i, str(r.reduced), str(exp.reduced)))
    return not bad, f"{checked} classes" if not bad else f"mismatch {bad}"


def large_surgery():
    bad, checked = [], 0
    for spec in ("unknot", "t34", "staircase:1,1,1,1", "borromean:2"):
        C = builtin(spec)
        n = 4 * C.max_abs_alexander + 4
        for i in range(n):
            s = i if 2 * i <= n else i - n
            lhs = full(surgery_homology(C, n, i)).relative()
            rhs = large_surgery_homology(C, s).relative()
            checked += 1
            if lhs != rhs:
                bad.append((spec, n, i, str(lhs), str(rhs)))
    return not bad, f"{checked} classes" if not bad else f"mismatch {bad[:2]}"


def unknot_oracles():
    bad = []
    for n in range(1, 5):
        for delta in range(4):
            for i in range(n):
                b = n + 1
                D = unknot_D_columns(n, i, delta, b)
                basis = unknot_kernel_basis(n, i, delta, b)
                labels = sorted(D)
                pos = {lab: k for k, lab in enumerate(labels)}
                targets = sorted({x for img in D.values() for x in img})
                tpos = {lab: k for k, lab in enumerate(targets)}
                cycles = all(not _apply(D, v) for v in basis)
                span = gf2_rank([[pos[x] for x in v] for v in basis])
                kernel = len(labels) - gf2_rank([[tpos[x] for x in D[lab]] for lab in labels])
                if not (cycles and span == delta + 1 == kernel and unknot_cokernel_check(n, i, delta, b)):
                    bad.append((n, i, delta))
    return not bad, "n<=4, delta<=3" if not bad else f"failures {bad}"


def _apply(D, vec):
    out = set()
    for lab in vec:
        out ^= D[lab]
    return out


def robustness():
    bad = []
    specs = ("unknot", "t34", "staircase:1,2,2,1", "staircase:1,1,1,1", "borromean:1", "borromean:2")
    for spec in specs:
        C = builtin(spec)
        for n in (1, -1, 2, -2, 3):
            keys = {}
            for i in range(abs(n)):
                b = truncation_width(C, n)
                if build_cone(C, n, i, 2, b).check(2):
                    bad.append((spec, n, i, "cone invariants"))
                r = surgery_homology(C, n, i)
                keys[i] = r.key()
                if surgery_homology(C, n, i, width=b + 3).key() != r.key():
                    bad.append((spec, n, i, "width"))
                if surgery_homology(C, n, i, delta=2 * r.meta["delta"]).key() != r.key():
                    bad.append((spec, n, i, "delta doubling"))
            for i in range(abs(n)):
                if keys[i] != keys[(n - i) % abs(n)]:
                    bad.append((spec, n, i, "conjugation"))
    return not bad, f"{len(specs)} complexes x 5 slopes" if not bad else f"failures {bad[:4]}"


def zero_surgery():
    u = builtin("unknot")
    r0 = zero_surgery_homology(u, 0)
    ok = len(r0.towers) == 2 and r0.towers[1] - r0.towers[0] == 1 and not r0.reduced.pieces
    others = [zero_surgery_homology(u, i) for i in (-3, -2, -1, 1, 2, 3)]
    ok = ok and all(not r.towers and not r.reduced.pieces for r in others)
    return ok, f"torsion class: {r0.describe()}; classes +-1..3 vanish"


CRITERIA = [
    (1, "lens spaces from the unknot", lens_spaces),
    (2, "T(3,4) +1 surgery", t34_plus_one),
    (3, "T(3,4) -1 surgery", t34_minus_one),
    (4, "T(3,4) h_s / v_-s as U-powers", t34_maps),
    (5, "circle bundles, Euler number 1", circle_bundles_one),
    (6, "circle bundles, general Euler number", circle_bundles_general),
    (7, "large-surgery oracle", large_surgery),
    (8, "unknot kernel/cokernel oracles", unknot_oracles),
    (9, "robustness invariants", robustness),
    (10, "zero surgery on the unknot", zero_surgery),
]


def run_criterion(fn):
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failure, reported like one
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return ok, detail, time.perf_counter() - t0


@pytest.mark.parametrize("number,title,fn", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(number, title, fn, capsys):
    ok, detail, dt = run_criterion(fn)
    with capsys.disabled():
        print(f"\n{'PASS' if ok else 'FAIL'} criterion {number}: {title} ({dt:.1f}s) - {detail}")
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for number, title, fn in CRITERIA:
        ok, detail, dt = run_criterion(fn)
        failed += not ok
        print(f"{'PASS' if ok else 'FAIL'} criterion {number}: {title} ({dt:.1f}s) - {detail}")
    sys.exit(1 if failed else 0)
