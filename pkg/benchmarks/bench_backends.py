"""Timing comparison of the compiled and NumPy pair-sum kernels.

Run directly:  python benchmarks/bench_backends.py [sizes...]
"""

import sys
import time

import numpy as np

from fraceig import _corenp

try:
    from fraceig import _corecy
except ImportError:
    _corecy = None


def best_of(fn, repeats=5):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench(n, p):
    rng = np.random.default_rng(0)
    u = rng.standard_normal(n)
    W = np.abs(rng.standard_normal((n, n)))
    W = W + W.T
    np.fill_diagonal(W, 0.0)
    coords = rng.random((n, 2))

    rows = []
    for name, label in (("pairsum_energy", "energy"),
                        ("pairsum_gradient", "gradient")):
        tn = best_of(lambda: getattr(_corenp, name)(u, W, p))
        row = [f"{label}(p={p}, n={n})", f"{tn * 1e3:8.2f} ms"]
        if _corecy is not None:
            tc = best_of(lambda: getattr(_corecy, name)(u, W, p))
            row += [f"{tc * 1e3:8.2f} ms", f"{tn / tc:5.1f}x"]
        rows.append(row)

    tn = best_of(lambda: _corenp.holder_sup(u, coords, 0.5))
    row = [f"holder_sup(n={n})", f"{tn * 1e3:8.2f} ms"]
    if _corecy is not None:
        tc = best_of(lambda: _corecy.holder_sup(u, coords, 0.5))
        row += [f"{tc * 1e3:8.2f} ms", f"{tn / tc:5.1f}x"]
    rows.append(row)
    return rows


def main():
    sizes = [int(a) for a in sys.argv[1:]] or [255, 1024]
    header = ["kernel", "numpy"]
    if _corecy is not None:
        header += ["cython", "speedup"]
    else:
        print("compiled extension unavailable; timing the fallback only")
    print("  ".join(f"{h:>24}" if i == 0 else f"{h:>12}"
                    for i, h in enumerate(header)))
    for n in sizes:
        for p in (2.0, 3.0):
            for row in bench(n, p):
                print("  ".join(f"{c:>24}" if i == 0 else f"{c:>12}"
                                for i, c in enumerate(row)))


if __name__ == "__main__":
    main()
