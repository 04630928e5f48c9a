"""Compare the compiled and pure-Python F2 backends.

Kernel timings call both implementations in-process.  End-to-end timings run
a surgery computation in a subprocess per backend, since the backend is
chosen once at import.

    python3 benchmarks/bench_f2.py [--size 3000] [--genus 4] [--repeat 3]
"""

import argparse
import os
import random
import subprocess
import sys
import time

from hfcone import _f2py

try:
    from hfcone import _f2ext
except ImportError:  # extension not built
    _f2ext = None

SURGERY = ("from hfcone import builtin, surgery_homology;"
           "surgery_homology(builtin('borromean:{g}'), 1, 0)")


def random_columns(n, density, seed):
    rng = random.Random(seed)
    cols = []
    for _ in range(n):
        v = 0
        for _ in range(max(1, int(density * n))):
            v |= 1 << rng.randrange(n)
        cols.append(v)
    return cols


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def end_to_end(genus, pure):
    env = dict(os.environ)
    if pure:
        env["HFCONE_PURE_PYTHON"] = "1"
    else:
        env.pop("HFCONE_PURE_PYTHON", None)
    t0 = time.perf_counter()
    subprocess.run([sys.executable, "-c", SURGERY.format(g=genus)], env=env, check=True)
    return time.perf_counter() - t0


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=3000, help="matrix dimension for kernels")
    ap.add_argument("--density", type=float, default=0.002)
    ap.add_argument("--genus", type=int, default=4, help="borromean genus for end-to-end run")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    cols = random_columns(args.size, args.density, seed=1)
    backends = [("pure", _f2py)] + ([("cython", _f2ext)] if _f2ext else [])
    print(f"{'kernel':<28}" + "".join(f"{name:>10}" for name, _ in backends))
    rows = [
        ("reduce_columns", lambda m: m.reduce_columns(cols)),
        ("reduce_columns(track)", lambda m: m.reduce_columns(cols, track=True)),
        ("echelon", lambda m: m.echelon(cols)),
        ("apply_map", lambda m: m.apply_map(cols, cols)),
    ]
    for label, fn in rows:
        line = f"{label:<28}"
        for _, mod in backends:
            line += f"{best_of(lambda: fn(mod), args.repeat):>9.3f}s"
        print(line)

    label = f"surgery borromean:{args.genus}"
    line = f"{label:<28}{end_to_end(args.genus, True):>9.3f}s"
    if _f2ext:
        line += f"{end_to_end(args.genus, False):>9.3f}s"
    print(line)
    if not _f2ext:
        print("compiled backend not built; only pure-Python timings shown")


if __name__ == "__main__":
    main()
