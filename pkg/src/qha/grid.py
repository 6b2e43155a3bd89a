"""Grids, Fourier conventions and trigonometric interpolation.

All objects live on a centered, critically sampled N x N discretization of
the periodized line and its phase space:

* sample points   t_j = -L/2 + j*dx,   dx = L/N,   j = 0..N-1
* frequencies     w_k = k/L,           k = -N/2..N/2-1 (centered layout)

Continuum integrals become Riemann sums with weights dx (time), 1/L
(frequency) and dx/L = 1/N per phase-space cell.  With these weights the
forward transform

    fhat(w_k) = dx * sum_j f(t_j) exp(-2 pi i t_j w_k)

is one centered FFT, the inverse uses exp(+2 pi i) with weight 1/L per bin,
and inverse(forward(f)) == f to machine precision.  User-facing arrays are
always stored centered; the fftshift bookkeeping is confined to this module.

Off-grid evaluation is always exact trigonometric interpolation of the
periodized data (never polynomial), with the unpaired Nyquist mode split
symmetrically so that 2x zero-padded refinement agrees with pointwise
evaluation to machine precision.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels


class GridError(ValueError):
    """Invalid grid construction or mismatched grids."""


@dataclass(frozen=True)
class GridSpec:
    """Centered sampling of the line with N points over [-L/2, L/2)."""

    n: int
    length: float

    def __post_init__(self):
        if self.n < 4 or self.n % 2 != 0:
            raise GridError(f"N must be even and >= 4, got {self.n}")
        if not (self.length > 0):
            raise GridError(f"L must be positive, got {self.length}")

    @property
    def dx(self) -> float:
        return self.length / self.n

    @property
    def dw(self) -> float:
        return 1.0 / self.length

    @property
    def cell(self) -> float:
        """Phase-space cell area dx * dw = 1/N."""
        return self.dx * self.dw

    @property
    def times(self) -> np.ndarray:
        return (np.arange(self.n) - self.n // 2) * self.dx

    @property
    def freqs(self) -> np.ndarray:
        return (np.arange(self.n) - self.n // 2) * self.dw

    @property
    def dual(self) -> "GridSpec":
        """Grid carrying the frequency samples (spacing 1/L, extent N/L)."""
        return GridSpec(self.n, self.n / self.length)

    def index_of_time(self, x: float) -> int:
        """Grid index of a lattice-aligned spatial value (wrapped)."""
        m = x / self.dx
        r = round(m)
        if abs(m - r) > 1e-9:
            raise GridError(f"{x} is not an integer multiple of dx={self.dx}")
        return (int(r) + self.n // 2) % self.n

    def index_of_freq(self, w: float) -> int:
        k = w * self.length
        r = round(k)
        if abs(k - r) > 1e-9:
            raise GridError(f"{w} is not an integer multiple of 1/L={self.dw}")
        return (int(r) + self.n // 2) % self.n


def make_grid(n: int, length: float) -> GridSpec:
    return GridSpec(int(n), float(length))


def check_same_grid(a, b) -> None:
    if a.grid != b.grid:
        raise GridError(f"grid mismatch: {a.grid} vs {b.grid}")


@dataclass
class PhaseSpaceFunction:
    """Complex function on the N x N (x, omega) phase-space grid."""

    grid: GridSpec
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.complex128)
        if self.values.shape != (self.grid.n, self.grid.n):
            raise GridError(
                f"expected {(self.grid.n, self.grid.n)} values, got {self.values.shape}"
            )

    def copy(self) -> "PhaseSpaceFunction":
        return PhaseSpaceFunction(self.grid, self.values.copy())

    def reflected_conjugate(self) -> "PhaseSpaceFunction":
        """F*(z) := conj(F(-z)) with periodic wrap of the centered flip."""
        return PhaseSpaceFunction(self.grid, centered_reverse_2d(self.values).conj())

    def integral(self) -> complex:
        """Phase-space Riemann sum, weight dx/L per cell."""
        return self.grid.cell * self.values.sum()

    def pair(self, other: "PhaseSpaceFunction") -> complex:
        """<F, G> = cell * sum F conj(G)."""
        check_same_grid(self, other)
        return self.grid.cell * np.vdot(other.values, self.values)

    def norm(self) -> float:
        return float(np.sqrt(abs(self.pair(self))))


@dataclass
class KernelMatrix:
    """Complex function on the N x N (y, u) kernel grid (two spatial axes)."""

    grid: GridSpec
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.complex128)
        if self.values.shape != (self.grid.n, self.grid.n):
            raise GridError(
                f"expected {(self.grid.n, self.grid.n)} values, got {self.values.shape}"
            )

    def copy(self) -> "KernelMatrix":
        return KernelMatrix(self.grid, self.values.copy())

    def pair(self, other: "KernelMatrix") -> complex:
        """<K, K'> = dx^2 * sum K conj(K')."""
        check_same_grid(self, other)
        return self.grid.dx**2 * np.vdot(other.values, self.values)


# -- centered FFT helpers ----------------------------------------------------


def cfft(x: np.ndarray, axis: int = -1) -> np.ndarray:
    """Centered DFT: input and output index 0 correspond to -N/2."""
    return np.fft.fftshift(
        np.fft.fft(np.fft.ifftshift(x, axes=axis), axis=axis), axes=axis
    )


def cifft(x: np.ndarray, axis: int = -1) -> np.ndarray:
    return np.fft.fftshift(
        np.fft.ifft(np.fft.ifftshift(x, axes=axis), axis=axis), axes=axis
    )


def centered_reverse_1d(x: np.ndarray) -> np.ndarray:
    """Samples of t -> f(-t) on the centered grid (index 0 is fixed)."""
    return np.roll(x[::-1], 1)


def centered_reverse_2d(x: np.ndarray) -> np.ndarray:
    return np.roll(x[::-1, ::-1], (1, 1), axis=(0, 1))


# -- Fourier transform of signals --------------------------------------------


def fourier_values(values: np.ndarray, grid: GridSpec) -> np.ndarray:
    """fhat(w_k) = dx * sum_j f(t_j) exp(-2 pi i t_j w_k)."""
    return grid.dx * cfft(values)


def inverse_fourier_values(values: np.ndarray, grid: GridSpec) -> np.ndarray:
    """f(t_j) = (1/L) * sum_k fhat(w_k) exp(+2 pi i t_j w_k)."""
    return (grid.n / grid.length) * cifft(values)


# -- symplectic Fourier transform ---------------------------------------------


def symplectic_fourier(f: PhaseSpaceFunction) -> PhaseSpaceFunction:
    """F_s F(x, w) = int int F(x', w') exp(-2 pi i (x' w - x w')) dx' dw'.

    Realized as a forward centered DFT in x', an inverse one in w' and a
    transpose; the quadrature weight dx/L times the inverse-DFT factor N is
    exactly one on a critically sampled grid.  The sign convention is pinned
    by the requirement that the cross-Wigner transform equals the symplectic
    Fourier transform of the tau-STFT (see tests).
    """
    g = f.grid
    a = cfft(f.values, axis=0)
    b = cifft(a, axis=1) * g.n
    return PhaseSpaceFunction(g, np.ascontiguousarray(b.T) * (g.dx * g.dw))


# -- partial Fourier transform along the second axis ---------------------------


def partial_fourier2_inv(f: PhaseSpaceFunction) -> KernelMatrix:
    """Inverse transform along the omega axis only.

    Maps a function of (x, omega) to a function of (x, q) with q on the
    spatial grid: out(x, q) = (1/L) sum_k F(x, w_k) exp(+2 pi i q w_k).
    """
    g = f.grid
    vals = (g.n / g.length) * cifft(f.values, axis=1)
    return KernelMatrix(g, vals)


def partial_fourier2(k: KernelMatrix) -> PhaseSpaceFunction:
    """Forward transform along the second (spatial) axis; inverse of the above."""
    g = k.grid
    vals = g.dx * cfft(k.values, axis=1)
    return PhaseSpaceFunction(g, vals)


# -- trigonometric interpolation ----------------------------------------------


def trig_coefficients_1d(values: np.ndarray) -> np.ndarray:
    """Centered Fourier coefficients c_k = cDFT(f)[k] / N."""
    return cfft(values) / values.shape[-1]


def trig_coefficients_2d(values: np.ndarray) -> np.ndarray:
    return cfft(cfft(values, axis=0), axis=1) / values.size


def eval_periodic_1d(values: np.ndarray, points: np.ndarray, period: float) -> np.ndarray:
    """Evaluate the band-limited periodic interpolant of 1D samples."""
    return _kernels.trig_eval_1d(trig_coefficients_1d(values), points, period)


def eval_periodic_2d(
    values: np.ndarray,
    points0: np.ndarray,
    points1: np.ndarray,
    period0: float,
    period1: float,
) -> np.ndarray:
    """Evaluate the 2D interpolant at paired point arrays (flattened)."""
    return _kernels.trig_eval_2d(
        trig_coefficients_2d(values), points0, points1, period0, period1
    )


def refine2x(values: np.ndarray, axis: int = 0) -> np.ndarray:
    """Double the sampling rate along one axis by zero-padding the spectrum.

    The unpaired Nyquist coefficient stays one-sided at mode -N/2, matching
    the pointwise interpolant's mode set exactly.
    """
    x = np.moveaxis(np.asarray(values, dtype=np.complex128), axis, 0)
    n = x.shape[0]
    spec = cfft(x, axis=0) / n
    padded = np.zeros((2 * n,) + x.shape[1:], dtype=np.complex128)
    # centered layout of length 2n: index 0 <-> mode -n; modes -n/2..n/2-1 kept
    padded[n // 2 : n + n // 2] = spec
    fine = cifft(padded, axis=0) * (2 * n)
    return np.moveaxis(fine, 0, axis)


# -- the quantization warp -----------------------------------------------------


def warp_to_kernel(f: KernelMatrix, tau: float, method: str = "auto") -> KernelMatrix:
    """Pull back a function of two spatial variables to the kernel grid.

    out(t, x) = F((1-tau) t + tau x, t - x) for the periodized F.  On the
    torus the lag is resolved to its wrapped representative q = wrap(t - x)
    in [-L/2, L/2) and the first argument to t - tau q; this is the reading
    under which quantization inverts the Wigner transform exactly (the naive
    unwrapped pair differs by tau L on wrapped cells and does not).

    The lag argument is always grid-aligned, so evaluation is one 1D
    trigonometric interpolation per kernel diagonal.  Grid-aligned fast
    paths exist for tau in {0, 1} (pure indexing) and tau = 1/2 (2x
    refinement along the first axis); ``method='generic'`` forces the
    interpolation path everywhere.
    """
    if not (0.0 <= tau <= 1.0):
        raise ValueError(f"tau must lie in [0, 1], got {tau}")
    g = f.grid
    n = g.n
    half = n // 2
    rows = np.arange(n)
    # column r of the output diagonal system is the wrapped lag (r - half) dx;
    # cell (m, j) sits on diagonal r = (m - j + half) mod n
    diag_index = (rows[:, None] - rows[None, :] + half) % n

    if method not in ("auto", "generic", "aligned"):
        raise ValueError(f"unknown method {method!r}")
    use_fast = method == "aligned" or (method == "auto" and tau in (0.0, 0.5, 1.0))
    if method == "aligned" and tau not in (0.0, 0.5, 1.0):
        raise ValueError("aligned fast path exists only for tau in {0, 1/2, 1}")

    if use_fast:
        if tau == 0.0:
            out = f.values[rows[:, None], diag_index]
        elif tau == 1.0:
            # p = t - q lands on the grid index of x itself
            out = f.values[rows[None, :] * np.ones((n, 1), dtype=int), diag_index]
        else:
            fine = refine2x(f.values, axis=0)  # spacing dx/2, index i <-> (i - n) dx/2
            fine_row = (2 * rows[:, None] - diag_index + half) % (2 * n)
            out = fine[fine_row, diag_index]
        return KernelMatrix(g, out)

    t = g.times
    out = np.empty((n, n), dtype=np.complex128)
    coeffs = trig_coefficients_1d(f.values.T)  # per-column coefficients
    for r in range(n):
        lag = (r - half) * g.dx
        col = _kernels.trig_eval_1d(coeffs[r], t - tau * lag, g.length)
        mask = diag_index == r
        out[mask] = col[np.nonzero(mask)[0]]
    return KernelMatrix(g, out)
