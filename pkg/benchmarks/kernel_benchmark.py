#!/usr/bin/env python3
"""Benchmark the compiled kernels against the NumPy fallback.

Times the two hot loops on sweep-scale workloads:

  * reduce_rho_series  — per-time two-qubit density reduction over ~200
    Fock manifolds, 20001 time points (one long-horizon sweep series)
  * rk4_states         — RK4 stepping of all manifold Schrodinger equations
    to t = 50 at the oracle-equivalence step size

Run:  python benchmarks/kernel_benchmark.py
"""

import math
import time

import numpy as np

from qce.backend import available_backends, get_backend
from qce.dynamics import CouplingParams, amplitude_constants
from qce.field import FieldParams, cat_expansion
from qce.oracle import rk4_step_for
from qce.sweep import time_grid


def bench(label, fn, repeats=3):
    best = math.inf
    for _ in range(repeats):
        start = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - start)
    print(f"  {label:<10s} {best:8.3f} s")
    return best, result


def main():
    backends = available_backends()
    print(f"backends: {', '.join(backends)}")

    expansion = cat_expansion(FieldParams(5.0, 1.0, math.pi, math.pi, 1.0 / math.sqrt(2.0)))
    cpl = CouplingParams(lam=1.0, g=1.0)
    con = amplitude_constants(cpl, expansion.n_max)
    grid = time_grid(2000.0, 0.1)
    reduce_args = (
        expansion.weights,
        con["wp"], con["wm"],
        con["c12p"], con["c12m"], con["c22p"], con["c22m"],
        con["c23p"], con["c23m"], con["c24"],
        grid,
    )

    print(f"\nreduce_rho_series: {grid.size} times x {expansion.n_max + 1} manifolds")
    reduce_times = {}
    reduce_out = {}
    for name in backends:
        kern = get_backend(name)
        reduce_times[name], reduce_out[name] = bench(name, lambda k=kern: k.reduce_rho_series(*reduce_args))

    ns = np.arange(expansion.n_max + 1, dtype=np.float64)
    an, bn = cpl.g * np.sqrt(ns), cpl.g * np.sqrt(ns + 1.0)
    dt = rk4_step_for(float(con["wp"][-1]), 50.0)
    steps = int(math.ceil(50.0 / dt))
    out_times = np.array([50.0])

    print(f"\nrk4_states: {steps} steps x {expansion.n_max + 1} manifolds (dt = {dt:.2e})")
    rk4_times = {}
    rk4_out = {}
    for name in backends:
        kern = get_backend(name)
        rk4_times[name], rk4_out[name] = bench(
            name, lambda k=kern: k.rk4_states(an, bn, cpl.lam, out_times, dt), repeats=1
        )

    if len(backends) == 2:
        dev_reduce = float(np.max(np.abs(reduce_out["compiled"] - reduce_out["numpy"])))
        dev_rk4 = float(np.max(np.abs(rk4_out["compiled"][0] - rk4_out["numpy"][0])))
        print("\nagreement: reduce %.2e, rk4 %.2e" % (dev_reduce, dev_rk4))
        print(
            "speedup:   reduce %.1fx, rk4 %.1fx"
            % (reduce_times["numpy"] / reduce_times["compiled"], rk4_times["numpy"] / rk4_times["compiled"])
        )


if __name__ == "__main__":
    main()
