"""Time the compiled kernels against the pure-Python fallback.

Run with ``python3 benchmarks/bench_kernels.py``.
"""

import math
import timeit

import numpy as np

from helisphere import _kernels_py as pure

try:
    from helisphere import _kernels as compiled
except ImportError:
    compiled = None


def cases(mod):
    rng = np.random.default_rng(0)
    z = np.linspace(0.3, 0.8, 100_000)
    x, y = rng.uniform(-0.5, 0.5, (2, 400))
    zz = np.sqrt(1.0 - x * x - y * y)
    t = np.linspace(0.0, 2 * math.pi, 400)
    y0 = np.array([0.55, 0.1, 0.3])
    targets = np.linspace(-0.5, 0.5, 201)
    return {
        "momentum_eval (1e5 heights)": lambda: mod.momentum_eval(pure.KIND_MINIMAL, 1.5, 0.25, z),
        "rk4_march (500 steps)": lambda: mod.rk4_march(pure.KIND_MINIMAL, 1.5, 0.25, y0, targets, 2e-3),
        "catenary_lambda (one period)": lambda: mod.catenary_lambda(0.7, 0.0, math.pi, 1e-13, 1e-15),
        "helicoid_immersion (400x400)": lambda: mod.helicoid_immersion(0.8, x, y, zz, t),
    }


def best_of(fn, repeat=5):
    n, _ = timeit.Timer(fn).autorange()
    return min(timeit.repeat(fn, number=n, repeat=repeat)) / n


def main():
    py = cases(pure)
    cy = cases(compiled) if compiled is not None else {}
    print(f"{'kernel':32s} {'python [ms]':>12s} {'cython [ms]':>12s} {'speed-up':>9s}")
    for name, fn in py.items():
        tp = best_of(fn) * 1e3
        if name in cy:
            tc = best_of(cy[name]) * 1e3
            print(f"{name:32s} {tp:12.3f} {tc:12.3f} {tp / tc:9.1f}")
        else:
            print(f"{name:32s} {tp:12.3f} {'n/a':>12s}")


if __name__ == "__main__":
    main()
