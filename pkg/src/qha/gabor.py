"""Gabor matrix of an operator and the identities living on it.

The Gabor matrix M(T)(z, w) = <T pi(w) phi, pi(z) phi> is the only
O(N^4)-memory object in the package, so construction is gated behind an
explicit stride / size guardrail.  The full critically sampled lattice is a
tight frame in the discrete setting, which makes the twisted-convolution
reproducing identity exact on the grid.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .grid import GridSpec, check_same_grid
from .operators import FiniteRankOperator
from .quantize import wigner_transform
from .signals import LatticePoint, Signal, check_tau, tau_stft, tf_shift


class GuardrailError(RuntimeError):
    """Desk-scale limit exceeded; pass force=True to override."""


@dataclass
class GaborMatrix:
    grid: GridSpec
    window: Signal
    stride: int
    values: np.ndarray = field(repr=False)  # [z_x, z_w, w_x, w_w]

    @property
    def xs(self) -> np.ndarray:
        return self.grid.times[:: self.stride]

    @property
    def oms(self) -> np.ndarray:
        return self.grid.freqs[:: self.stride]

    @property
    def cell(self) -> float:
        """Phase-space cell of the sublattice per 2D slot."""
        return self.grid.cell * self.stride**2

    def entry(self, z: LatticePoint, w: LatticePoint) -> complex:
        """Look up M(z, w); both points must lie on the sublattice."""
        iz, kz = _sub_index(self.grid, self.stride, z)
        iw, kw = _sub_index(self.grid, self.stride, w)
        return complex(self.values[iz, kz, iw, kw])

    def diagonal(self) -> np.ndarray:
        """M(z, z) over the sublattice, indexed like a phase-space array."""
        m = self.values.shape[0]
        i = np.arange(m)[:, None]
        k = np.arange(m)[None, :]
        return self.values[i, k, i, k]

    def reflected_conjugate(self) -> np.ndarray:
        """(M)^*(z, w) = conj(M(-z, -w)) with periodic centered flips."""
        m = self.values.shape[0]
        flip = (-np.arange(m)) % m
        v = self.values[np.ix_(flip, flip, flip, flip)]
        return v.conj()


def _sub_index(grid: GridSpec, stride: int, z: LatticePoint) -> tuple[int, int]:
    _, x, w = z.validate(grid)
    i = grid.index_of_time(x)
    k = grid.index_of_freq(w)
    if i % stride or k % stride:
        raise ValueError(f"{z} is not on the stride-{stride} sublattice")
    return i // stride, k // stride


def gabor_matrix(
    t_op: FiniteRankOperator, window: Signal, stride: int = 1, force: bool = False
) -> GaborMatrix:
    """Build M(T)(z, w) = sum_n V_phi f_n(z) conj(V_phi g_n(w)) on a sublattice.

    The window must have unit norm.  Entries are produced by the STFT fast
    path; ``gabor_entry`` is the direct inner-product oracle.
    """
    check_same_grid(t_op, window)
    if abs(window.norm() - 1.0) > 1e-12:
        raise ValueError("window must be L2-normalized (norm within 1e-12 of 1)")
    grid = t_op.grid
    if stride < 1 or grid.n % stride:
        raise ValueError("stride must be a positive divisor of N")
    m = grid.n // stride
    if m > 16 and not force:
        raise GuardrailError(
            f"{m}^4 Gabor entries exceed the desk-scale limit (N/stride <= 16); "
            "pass force=True to override"
        )
    vf = []
    vg = []
    for f, g in t_op.terms:
        vf.append(tau_stft(f, window, 0.0).values[::stride, ::stride])
        vg.append(tau_stft(g, window, 0.0).values[::stride, ::stride])
    values = np.zeros((m, m, m, m), dtype=np.complex128)
    for a, b in zip(vf, vg):
        values += np.multiply.outer(a, b.conj())
    return GaborMatrix(grid, window, stride, values)


def gabor_entry(
    t_op: FiniteRankOperator, window: Signal, z: LatticePoint, w: LatticePoint
) -> complex:
    """Direct oracle <T pi(w) phi, pi(z) phi>."""
    return t_op.apply(tf_shift(window, w)).inner(tf_shift(window, z))


def twisted_convolve(f: GaborMatrix, h: np.ndarray, transposed: bool = False) -> np.ndarray:
    """Twisted convolution of a Gabor matrix with a 4-index array.

    (F nat H)(z, w) = cell^2 * sum_{z', w'} F(z', w') H(z - z', w - w')
                      exp(2 pi i theta)
    with z = (x, omega), w = (u, v).  The default phase is
    theta = omega x' - u' v (outer frequencies against inner positions);
    ``transposed=True`` uses theta = x omega' - u v', the pairing under
    which the Gabor-matrix reproducing identity closes exactly (see the
    reproducing-formula tests).  Direct sum, desk scale only.
    """
    h = np.asarray(h, dtype=np.complex128)
    if h.shape != f.values.shape:
        raise ValueError(f"shape mismatch: {h.shape} vs {f.values.shape}")
    if transposed:
        # swap the roles: couple outer (x, u) with inner (omega', v'); realized
        # by feeding the kernel position values where it expects frequencies
        return _kernels.twisted_conv4_transposed(
            f.values, h, f.xs, f.oms, f.xs, f.oms, f.cell**2
        )
    return _kernels.twisted_conv4(
        f.values, h, f.xs, f.oms, f.xs, f.oms, f.cell**2
    )


def reproducing_modulation(m: GaborMatrix) -> np.ndarray:
    """Outer phase e^{2 pi i (x omega - u v)} entering the reproducing identity."""
    xw = np.multiply.outer(m.xs, m.oms)
    return np.exp(2j * np.pi * xw)[:, :, None, None] * np.exp(
        -2j * np.pi * xw
    )[None, None, :, :]


def plain_convolve4(f: GaborMatrix, h: np.ndarray) -> np.ndarray:
    """Untwisted 4D convolution (phase identically one); separability oracle."""
    h = np.asarray(h, dtype=np.complex128)
    fa = np.fft.fftn(np.fft.ifftshift(f.values))
    ha = np.fft.fftn(np.fft.ifftshift(h))
    return f.cell**2 * np.fft.fftshift(np.fft.ifftn(fa * ha))


def reconstruction_phase_coefficient(tau: float) -> float:
    """Coefficient of the x' w' cross term in the Wigner reconstruction phase.

    The value 1/2 - tau is what the shift composition laws give and is the
    one validated against the Wigner oracle; see the ledger note on the
    alternative 1/2 - (3/4) tau, which fails that validation for tau != 0.
    """
    return 0.5 - check_tau(tau)


def reconstruct_wigner(
    m: GaborMatrix,
    tau: float,
    points: list[LatticePoint],
    coefficient: float | None = None,
) -> np.ndarray:
    """Recover W_tau(T) at selected lattice points from the Gabor matrix.

    Quadrature of

        W_tau T(z) = iint e^{-2 pi i [(w x' - w' x) + c x' w' + x' v]}
                     M(T)(z'/2 - w, -z'/2 - w) dw dz'

    with the inner nodes offset by z'/2 (substituting w -> z'/2 - w places
    every Gabor-matrix argument on the integer lattice), after which both
    z' and w run over the full fundamental lattice and the quadrature is
    exact on the grid.  Requires a stride-1 matrix and N divisible by 4.
    The phase coefficient c defaults to
    reconstruction_phase_coefficient(tau) = 1/2 - tau, the value the shift
    composition laws produce; the reconstruction fails for other choices.
    """
    tau = check_tau(tau)
    if m.stride != 1:
        raise ValueError("reconstruction requires a stride-1 Gabor matrix")
    if m.grid.n % 4:
        raise ValueError("reconstruction requires N divisible by 4")
    coef = reconstruction_phase_coefficient(tau) if coefficient is None else coefficient
    weight = m.grid.cell**2
    out = np.empty(len(points), dtype=np.complex128)
    for i, z in enumerate(points):
        _, x, w = z.validate(m.grid)
        out[i] = _kernels.reconstruct_point(
            m.values, m.grid.times, m.grid.freqs, x, w, coef, weight
        )
    return out


def gabor_diagonal_function(t_op: FiniteRankOperator, window: Signal) -> np.ndarray:
    """Q_T(phi)(z) = M(T)(-z, -z) over the full lattice, without the 4-index array."""
    from .convolve import cohen_of_signal

    return cohen_of_signal(t_op, window, method="inner").values


def reconstruct_wigner_reference(t_op, tau: float, points: list[LatticePoint]) -> np.ndarray:
    """Oracle values W_tau(T)(z) for the reconstruction tests."""
    w = wigner_transform(t_op, tau)
    out = np.empty(len(points), dtype=np.complex128)
    for i, z in enumerate(points):
        ix = w.grid.index_of_time(z.x)
        ik = w.grid.index_of_freq(z.w)
        out[i] = w.values[ix, ik]
    return out
