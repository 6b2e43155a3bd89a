"""Quantum-harmonic-analysis convolutions and Cohen-class distributions.

Implemented at finite rank only: function (*) operator gives an operator
(a mixed-state localization operator), operator (*) operator gives a
phase-space function z -> trace(S alpha_z(parity(T))).
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .grid import (
    KernelMatrix,
    PhaseSpaceFunction,
    check_same_grid,
    partial_fourier2_inv,
    symplectic_fourier,
)
from .operators import FiniteRankOperator, OperatorAsKernel, kernel_of
from .quantize import fourier_wigner, wigner_transform
from .signals import Signal, check_tau, tau_stft


def convolve_ps(f: PhaseSpaceFunction, g: PhaseSpaceFunction) -> PhaseSpaceFunction:
    """Periodic phase-space convolution, cell-weighted, via 2D FFTs."""
    check_same_grid(f, g)
    fa = np.fft.ifftshift(f.values)
    ga = np.fft.ifftshift(g.values)
    raw = np.fft.ifft2(np.fft.fft2(fa) * np.fft.fft2(ga))
    return PhaseSpaceFunction(f.grid, f.grid.cell * np.fft.fftshift(raw))


def convolve_ps_direct(f: PhaseSpaceFunction, g: PhaseSpaceFunction) -> PhaseSpaceFunction:
    """Direct double-sum convolution; O(N^4) oracle for convolve_ps."""
    check_same_grid(f, g)
    n = f.grid.n
    half = n // 2
    out = np.zeros((n, n), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            acc = 0.0 + 0.0j
            for a in range(n):
                for b in range(n):
                    acc += f.values[a, b] * g.values[(i - a + half) % n, (j - b + half) % n]
            out[i, j] = acc
    return PhaseSpaceFunction(f.grid, f.grid.cell * out)


def delta_spike(grid) -> PhaseSpaceFunction:
    """Unit-mass spike at the origin: value 1/cell there, zero elsewhere."""
    vals = np.zeros((grid.n, grid.n), dtype=np.complex128)
    vals[grid.n // 2, grid.n // 2] = 1.0 / grid.cell
    return PhaseSpaceFunction(grid, vals)


def convolve_function_operator(
    a: PhaseSpaceFunction, s_op, method: str = "fast"
) -> OperatorAsKernel:
    """Mixed-state localization operator a (*) S.

    Kernel: K(y, u) = int a(x, w) e^{2 pi i (y-u) w} K_S(y-x, u-x) dx dw.
    ``method='fast'`` performs one cyclic convolution per kernel diagonal
    (the omega integral collapses to the partial inverse transform of a);
    ``method='lattice'`` is the definitional sum cell * sum_z a(z) alpha_z(S).
    """
    check_same_grid(a, s_op)
    grid = a.grid
    ker = kernel_of(s_op).values
    if method == "lattice":
        vals = _kernels.conv_fn_op_sum(a.values, ker, grid.times, grid.freqs, grid.cell)
        return OperatorAsKernel(KernelMatrix(grid, vals))
    if method != "fast":
        raise ValueError(f"unknown method {method!r}")
    n = grid.n
    half = n // 2
    rows = np.arange(n)
    av = partial_fourier2_inv(a).values  # [x index, spatial-lag index]
    out = np.zeros((n, n), dtype=np.complex128)
    for r in range(n):
        lag = r - half  # diagonal y - u = lag * dx
        diag = ker[rows, (rows - lag) % n]
        profile = np.roll(av[:, r], -half)  # profile[s % n] = A(x = s dx, lag)
        conv = np.fft.ifft(np.fft.fft(profile) * np.fft.fft(diag))
        out[rows, (rows - lag) % n] = grid.dx * conv
    return OperatorAsKernel(KernelMatrix(grid, out))


def convolve_operators(
    s_op: FiniteRankOperator,
    t_op: FiniteRankOperator,
    tau: float = 0.5,
    method: str = "fast",
) -> PhaseSpaceFunction:
    """Operator-operator convolution z -> trace(S alpha_z(parity(T))).

    ``method='fast'``: symplectic Fourier transform of the product of the
    tau- and (1-tau)-spreading functions (the result is tau-independent).
    ``method='trace'``: the definitional per-lattice-point trace, O(N^2)
    traces.  ``method='stft'``: the rank-expansion
    sum_{n,m} V_{P l_m} f_n(z) conj(V_{P h_m} g_n(z)).
    """
    check_same_grid(s_op, t_op)
    tau = check_tau(tau)
    grid = s_op.grid
    if method == "fast":
        fs = fourier_wigner(s_op, tau).values
        ft = fourier_wigner(t_op, 1.0 - tau).values
        return symplectic_fourier(PhaseSpaceFunction(grid, fs * ft))
    if method == "trace":
        from .signals import LatticePoint

        t_par = t_op.parity_conjugate()
        n = grid.n
        half = n // 2
        out = np.empty((n, n), dtype=np.complex128)
        for i in range(n):
            for k in range(n):
                z = LatticePoint((i - half) * grid.dx, (k - half) * grid.dw)
                shifted = t_par.translate(z)
                acc = 0.0 + 0.0j
                for f, g in s_op.terms:
                    acc += shifted.apply(f).inner(g)
                out[i, k] = acc
        return PhaseSpaceFunction(grid, out)
    if method == "stft":
        out = np.zeros((grid.n, grid.n), dtype=np.complex128)
        for f, g in s_op.terms:
            for h, el in t_op.terms:
                vf = tau_stft(f, el.reversed(), 0.0).values
                vg = tau_stft(g, h.reversed(), 0.0).values
                out += vf * vg.conj()
        return PhaseSpaceFunction(grid, out)
    raise ValueError(f"unknown method {method!r}")


def cohen_distribution(a: PhaseSpaceFunction, s_op, tau: float = 0.5) -> PhaseSpaceFunction:
    """tau-Cohen class of an operator with kernel a: a * W_tau(S)."""
    check_same_grid(a, s_op)
    return convolve_ps(a, wigner_transform(s_op, check_tau(tau)))


def cohen_of_signal(s_op, f: Signal, method: str = "inner") -> PhaseSpaceFunction:
    """Cohen-class distribution of a signal with respect to an operator.

    ``method='inner'`` evaluates z -> <alpha_z(S) f, f> through STFT products;
    ``method='convolution'`` computes (f (x) f) (*) parity(S) and must agree.
    """
    check_same_grid(s_op, f)
    grid = f.grid
    if method == "inner":
        out = np.zeros((grid.n, grid.n), dtype=np.complex128)
        for fn, gn in s_op.terms:
            vg = tau_stft(f, gn, 0.0).values
            vf = tau_stft(f, fn, 0.0).values
            out += vg * vf.conj()
        return PhaseSpaceFunction(grid, out)
    if method != "convolution":
        raise ValueError(f"unknown method {method!r}")
    ff = FiniteRankOperator(grid, ((f, f),))
    return convolve_operators(ff, s_op.parity_conjugate(), method="fast")


def wigner_reflection(w: PhaseSpaceFunction) -> PhaseSpaceFunction:
    """The reflection-conjugation F*(z) = conj(F(-z)) used by Cohen identities."""
    return w.reflected_conjugate()
