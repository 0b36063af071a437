"""Compare the compiled and pure-Python Monte Carlo kernels.

Usage: python3 benchmarks/bench_mc.py [--trials N]
"""

import argparse
import time

import numpy as np

from qhide import _mc_py

try:
    from qhide import _mc_cy
except ImportError:
    _mc_cy = None

CONFIGS = [
    (hide, gm, resend)
    for hide in (0, 1)
    for gm in (0, 1)
    for resend in (0, 1, 2)
]


def bench(kernel, uniforms):
    start = time.perf_counter()
    total = 0
    for hide, gm, resend in CONFIGS:
        total += kernel(hide, gm, resend, uniforms)
    return time.perf_counter() - start, total


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--trials", type=int, default=100000)
    args = parser.parse_args()

    uniforms = np.random.default_rng(0).random((args.trials, 7))
    n = args.trials * len(CONFIGS)

    py_time, py_total = bench(_mc_py.run_trials, uniforms)
    print(f"python  {py_time:8.4f}s  ({n / py_time:12.0f} trials/s)")

    if _mc_cy is None:
        print("cython  not built")
        return
    cy_time, cy_total = bench(_mc_cy.run_trials, uniforms)
    print(f"cython  {cy_time:8.4f}s  ({n / cy_time:12.0f} trials/s)")
    print(f"speedup {py_time / cy_time:7.1f}x")
    assert py_total == cy_total, "kernels disagree"


if __name__ == "__main__":
    main()
