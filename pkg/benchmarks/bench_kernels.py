"""Compare the compiled and pure-Python kernels.

    python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from lel import _pycore

try:
    from lel import _core
except ImportError:
    _core = None


def cases():
    x = np.cumsum(np.random.default_rng(0).uniform(1e-3, 2e-3, 20000))
    f = np.sin(x)
    return {
        "integrate N=5 p=2 (to first zero, h_max=0.01)":
            lambda m: m.integrate_radial(5, 2.0, 3e-3, 1.0, -6e-4, 50.0, 1e-10, 0.01),
        "integrate N=3 p=5 (r <= 200, uncapped)":
            lambda m: m.integrate_radial(3, 5.0, 3e-3, 1.0, -1e-3, 200.0, 1e-12, np.inf),
        "7-point stencil, 20000 nodes":
            lambda m: m.stencil_derivative(x, f, 7),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _core is None:
        print("compiled extension not built; nothing to compare")
        return
    print(f"{'kernel':50s} {'python [ms]':>12s} {'compiled [ms]':>14s} {'speed-up':>9s}")
    for name, fn in cases().items():
        py = min(timeit.repeat(lambda: fn(_pycore), number=1, repeat=args.repeat))
        cc = min(timeit.repeat(lambda: fn(_core), number=1, repeat=args.repeat))
        print(f"{name:50s} {py * 1e3:12.2f} {cc * 1e3:14.3f} {py / cc:8.0f}x")


if __name__ == "__main__":
    main()
