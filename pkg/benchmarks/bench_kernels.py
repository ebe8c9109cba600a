"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--radius 500] [--prime-bound 20000] [--repeat 3]

Each case runs both backends on identical inputs, reports the best wall time
of ``--repeat`` runs, the speedup, and the largest relative difference.
"""
import argparse
import time

import numpy as np

from ellsym2 import _kernels_py
from ellsym2.curves import CurveModel, _primes_upto

try:
    from ellsym2 import _kernels as _compiled
except ImportError:
    _compiled = None


def best_time(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def rel_diff(a, b):
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    scale = np.maximum(np.abs(b), 1e-300)
    return float(np.max(np.abs(a - b) / scale)) if a.size else 0.0


def cases(radius, prime_bound):
    E = CurveModel.conductor37()
    primes = _primes_upto(prime_bound)[1:]
    b = (int(E.b2), int(E.b4), int(E.b6))
    vals = np.random.default_rng(0).standard_normal(2_000_000)
    return [
        (f"epstein m^2/r^6, R={radius}",
         lambda k: k.epstein_shells(1, 0, 1.0, 3.0, radius, 0), lambda r: r[0] + r[1]),
        (f"epstein (m^2-4n^2)/(m^2+4n^2)^3, R={radius}",
         lambda k: k.epstein_shells(4, 0, 4.0, 3.0, radius, 0), lambda r: r[0] + r[1]),
        (f"phased K_2,2 at (0,1/4), R={radius}",
         lambda k: k.ek_shells(0.0, 1.0, 2, 2, 0, 4, 0, 1, radius, 0, 0), lambda r: r[0] + r[1]),
        (f"a_p, 37a, p <= {prime_bound}",
         lambda k: k.ap_batch(*b, primes, 0), lambda r: r),
        ("block-compensated sum, 2e6 terms",
         lambda k: k.neumaier_blocks(vals, 4096), lambda r: [r]),
    ]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--radius", type=int, default=500)
    ap.add_argument("--prime-bound", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _compiled is None:
        raise SystemExit("compiled extension not built; run `pip install -e . --no-build-isolation`")
    print(f"{'case':48s} {'cython s':>10s} {'python s':>10s} {'speedup':>8s} {'max rel diff':>13s}")
    for name, call, view in cases(args.radius, args.prime_bound):
        tc, rc = best_time(lambda: call(_compiled), args.repeat)
        tp, rp = best_time(lambda: call(_kernels_py), max(1, args.repeat // 3))
        print(f"{name:48s} {tc:10.4f} {tp:10.4f} {tp / tc:8.1f} {rel_diff(view(rc), view(rp)):13.2e}")


if __name__ == "__main__":
    main()
