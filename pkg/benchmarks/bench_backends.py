#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallbacks.

Run:  python benchmarks/bench_backends.py [--repeat 3]

The numba path is a literal translation of each lattice sum; the numpy
fallback vectorizes (and for the twisted convolution uses FFTs along two
axes), so the relative speeds differ per kernel.  Numbers are wall-clock
best-of-``repeat``; the first numba call is timed separately as compile
cost (cached across runs).
"""

from __future__ import annotations

import argparse
import time

import numpy as np

import qha
from qha import _kernels
from qha.gabor import gabor_matrix, reconstruct_wigner, twisted_convolve
from qha.grid import PhaseSpaceFunction


def time_call(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def benchmarks():
    rng = np.random.default_rng(0)

    g64 = qha.make_grid(64, 8.0)
    env = np.exp(-np.pi * (g64.times[:, None] ** 2 + g64.freqs[None, :] ** 2))
    sym64 = PhaseSpaceFunction(
        g64, env * (rng.normal(size=(64, 64)) + 1j * rng.normal(size=(64, 64)))
    )
    yield (
        "quantization warp, generic tau=0.3, N=64",
        lambda: qha.operator_from_symbol(sym64, 0.3),
    )
    yield (
        "spreading lattice sum (oracle), N=64",
        lambda: qha.operator_from_spreading(sym64, 0.3, method="lattice"),
    )

    g32 = qha.make_grid(32, 8.0)
    sym32 = PhaseSpaceFunction(g32, sym64.values[::2, ::2].copy())
    s32 = qha.random_state(g32, 2, seed=1)
    yield (
        "localization-operator lattice sum (oracle), N=32",
        lambda: qha.convolve_function_operator(sym32, s32, method="lattice"),
    )

    g12 = qha.make_grid(12, 8.0)
    phi12 = qha.gaussian(g12)
    m12 = gabor_matrix(qha.random_state(g12, 2, seed=2), phi12)
    h12 = gabor_matrix(
        qha.FiniteRankOperator(g12, ((phi12, phi12),)), phi12
    ).reflected_conjugate()
    yield (
        "twisted convolution, N=12 full lattice",
        lambda: twisted_convolve(m12, h12, transposed=True),
    )

    g16 = qha.make_grid(16, 8.0)
    phi16 = qha.gaussian(g16)
    m16 = gabor_matrix(qha.random_state(g16, 2, seed=3), phi16)
    pts = [qha.LatticePoint(0.0, 0.0), qha.LatticePoint(g16.dx, -g16.dw)]
    yield (
        "Wigner reconstruction, 2 points, N=16",
        lambda: reconstruct_wigner(m16, 0.3, pts),
    )

    coeffs = rng.normal(size=(64, 64)) + 1j * rng.normal(size=(64, 64))
    p0 = rng.uniform(-4, 4, size=4096)
    p1 = rng.uniform(-4, 4, size=4096)
    yield (
        "trig interpolation, 4096 points, N=64 modes",
        lambda: _kernels.trig_eval_2d(coeffs, p0, p1, 8.0, 8.0),
    )


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    if not _kernels.HAVE_NUMBA:
        print("numba not installed; nothing to compare (numpy fallback only)")
        return

    rows = []
    for name, fn in benchmarks():
        qha.set_backend("numba")
        t_compile = time_call(fn, 1)
        t_numba = time_call(fn, args.repeat)
        qha.set_backend("numpy")
        t_numpy = time_call(fn, args.repeat)
        qha.set_backend("numba")
        rows.append((name, t_numba, t_numpy, t_compile))

    width = max(len(r[0]) for r in rows)
    print(f"{'kernel':<{width}}  {'numba':>10}  {'numpy':>10}  {'ratio':>7}  {'1st call':>9}")
    for name, t_nb, t_np, t_c in rows:
        print(
            f"{name:<{width}}  {t_nb * 1e3:>8.1f}ms  {t_np * 1e3:>8.1f}ms  "
            f"{t_np / t_nb:>6.1f}x  {t_c * 1e3:>7.0f}ms"
        )


if __name__ == "__main__":
    main()
