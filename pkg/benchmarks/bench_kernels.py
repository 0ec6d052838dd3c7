#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python/numpy twin.

Runs the hot workloads (optimizer lattice evaluation, scalar closed-form
loops, Lambert W) on every importable backend and prints a timing table.

    python benchmarks/bench_kernels.py [--repeats 5]
"""

import argparse
import math
import time

import numpy as np

from qubitherm import kernels


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def workloads(backend):
    thetas = np.linspace(0.0, math.pi, 33)
    phis = np.linspace(0.0, 2.0 * math.pi, 33, endpoint=False)
    taus = np.linspace(2.0 / 257.0, 2.0, 257)
    betas = np.linspace(0.1, 20.0, 100_000)
    scalar_pts = [(b, th, ph, ta)
                  for b in (0.3, 1.0, 5.0)
                  for th in np.linspace(0.0, math.pi, 20)
                  for ph in np.linspace(0.0, 6.2, 20)
                  for ta in np.linspace(0.05, 3.0, 20)]

    def lattice_transverse():
        backend.fisher_qfi_grid(0, 1.0, thetas, phis, taus)

    def lattice_dispersive():
        backend.fisher_qfi_grid(1, 1.0, thetas, phis, taus)

    def scalar_fisher():
        f = backend.fisher_population
        for b, th, ph, ta in scalar_pts:
            f(1, b, th, ph, ta, 1.0)

    def scalar_qfi():
        f = backend.qfi_closed
        for b, th, ph, ta in scalar_pts:
            f(0, b, th, ph, ta, 1.0)

    def tau_opt_curve():
        f = backend.tau_opt_transverse
        for b in betas[::10]:
            f(b)

    def lambert_sweep():
        f = backend.lambert_w0
        for x in np.linspace(-0.3678, 10.0, 10_000):
            f(x)

    return [
        ("fisher_qfi_grid transverse (33x33x257)", lattice_transverse),
        ("fisher_qfi_grid dispersive (33x33x257)", lattice_dispersive),
        ("fisher_population scalar x 24k", scalar_fisher),
        ("qfi_closed scalar x 24k", scalar_qfi),
        ("tau_opt x 10k", tau_opt_curve),
        ("lambert_w0 x 10k", lambert_sweep),
    ]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    backends = kernels.available_backends()
    names = [b.BACKEND for b in backends]
    print(f"backends: {', '.join(names)} (selected: {kernels.BACKEND})\n")

    rows = []
    for label, _ in workloads(backends[0]):
        rows.append([label])
    for backend in backends:
        for row, (_, fn) in zip(rows, workloads(backend)):
            row.append(best_of(fn, args.repeats))

    width = max(len(r[0]) for r in rows) + 2
    header = "workload".ljust(width) + "".join(n.rjust(14) for n in names)
    if len(backends) == 2:
        header += "speedup".rjust(10)
    print(header)
    print("-" * len(header))
    for row in rows:
        line = row[0].ljust(width)
        for t in row[1:]:
            line += f"{t * 1e3:11.2f} ms"
        if len(row) == 3:
            line += f"{row[2] / row[1]:9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
