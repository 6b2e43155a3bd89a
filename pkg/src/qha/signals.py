"""Signals on the sampled line, tau-shifts and quadratic representations.

The tau-time-frequency shift at z = (x, w) acts as

    (shift f)(t) = exp(-2 pi i tau x w) exp(2 pi i w t) f(t - x),

with the translation realized as an exact cyclic shift (z must sit on the
phase-space lattice).  Scalar phases always use the actual x, w values, so
points outside the fundamental domain are legal and the composition law
holds exactly on the whole lattice.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grid import (
    GridError,
    GridSpec,
    PhaseSpaceFunction,
    centered_reverse_1d,
    cfft,
    check_same_grid,
    eval_periodic_1d,
    fourier_values,
    inverse_fourier_values,
    symplectic_fourier,
)


def check_tau(tau: float) -> float:
    tau = float(tau)
    if not (0.0 <= tau <= 1.0):
        raise ValueError(f"tau must lie in [0, 1], got {tau}")
    return tau


@dataclass
class Signal:
    """Complex samples of a function on a GridSpec."""

    grid: GridSpec
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.complex128)
        if self.values.shape != (self.grid.n,):
            raise GridError(f"expected {self.grid.n} samples, got {self.values.shape}")

    def inner(self, other: "Signal") -> complex:
        """<f, g> = dx * sum f conj(g); linear in f, conjugate-linear in g."""
        check_same_grid(self, other)
        return self.grid.dx * np.vdot(other.values, self.values)

    def norm(self) -> float:
        return float(np.sqrt(self.grid.dx) * np.linalg.norm(self.values))

    def copy(self) -> "Signal":
        return Signal(self.grid, self.values.copy())

    def reversed(self) -> "Signal":
        """Parity image t -> f(-t)."""
        return Signal(self.grid, centered_reverse_1d(self.values))

    def __add__(self, other: "Signal") -> "Signal":
        check_same_grid(self, other)
        return Signal(self.grid, self.values + other.values)

    def __sub__(self, other: "Signal") -> "Signal":
        check_same_grid(self, other)
        return Signal(self.grid, self.values - other.values)

    def __mul__(self, scalar) -> "Signal":
        return Signal(self.grid, self.values * scalar)

    __rmul__ = __mul__


@dataclass(frozen=True)
class LatticePoint:
    """Phase-space point with x a multiple of dx and w a multiple of 1/L."""

    x: float
    w: float

    @staticmethod
    def from_indices(grid: GridSpec, i: int, k: int) -> "LatticePoint":
        """Point from centered indices (0 <-> -N/2)."""
        return LatticePoint((i - grid.n // 2) * grid.dx, (k - grid.n // 2) * grid.dw)

    def validate(self, grid: GridSpec) -> tuple[int, float, float]:
        m = self.x / grid.dx
        k = self.w * grid.length
        if abs(m - round(m)) > 1e-9 or abs(k - round(k)) > 1e-9:
            raise GridError(f"{self} is not on the lattice of {grid}")
        return int(round(m)), float(self.x), float(self.w)

    def __add__(self, other: "LatticePoint") -> "LatticePoint":
        return LatticePoint(self.x + other.x, self.w + other.w)

    def __neg__(self) -> "LatticePoint":
        return LatticePoint(-self.x, -self.w)


def fourier(f: Signal) -> Signal:
    """Forward transform; the result lives on the dual grid (spacing 1/L)."""
    return Signal(f.grid.dual, fourier_values(f.values, f.grid))


def inverse_fourier(f: Signal) -> Signal:
    return Signal(f.grid.dual, inverse_fourier_values(f.values, f.grid.dual))


def tf_shift(f: Signal, z: LatticePoint, tau: float = 0.0) -> Signal:
    """Apply the tau-time-frequency shift at lattice point z."""
    tau = check_tau(tau)
    steps, x, w = z.validate(f.grid)
    phase = np.exp(-2j * np.pi * tau * x * w)
    mod = np.exp(2j * np.pi * w * f.grid.times)
    return Signal(f.grid, phase * mod * np.roll(f.values, steps))


def tf_shift_dagger(f: Signal, z: LatticePoint, tau: float = 0.0) -> Signal:
    """Apply the adjoint shift; equals the (1-tau)-shift at -z."""
    return tf_shift(f, LatticePoint(-z.x, -z.w), 1.0 - check_tau(tau))


def tau_stft(f: Signal, g: Signal, tau: float = 0.0) -> PhaseSpaceFunction:
    """Full-lattice tau-STFT  V(x, w) = <f, shift_tau(x, w) g>.

    Fast path: one FFT per lattice translation x of the window, then the
    phase exp(2 pi i tau x w) relating the tau-transform to the plain STFT.
    Cost O(N^2 log N).
    """
    tau = check_tau(tau)
    check_same_grid(f, g)
    if not np.any(g.values):
        raise ValueError("window must be nonzero")
    grid = f.grid
    n = grid.n
    half = n // 2
    # rows: all cyclic translates of conj(g); row m corresponds to x = (m-N/2) dx
    rows = np.arange(n)
    gc = g.values.conj()
    shifted = gc[(rows[None, :] - rows[:, None] + half) % n]
    prods = f.values[None, :] * shifted
    v0 = grid.dx * cfft(prods, axis=1)
    if tau == 0.0:
        return PhaseSpaceFunction(grid, v0)
    xw = np.outer(grid.times, grid.freqs)
    return PhaseSpaceFunction(grid, np.exp(2j * np.pi * tau * xw) * v0)


def tau_stft_point(f: Signal, g: Signal, tau: float, z: LatticePoint) -> complex:
    """Single inner product <f, shift_tau(z) g>; per-point oracle for tau_stft."""
    return f.inner(tf_shift(g, z, tau))


def ambiguity(f: Signal, g: Signal) -> PhaseSpaceFunction:
    """Cross-ambiguity function; identical to the tau = 1/2 STFT."""
    return tau_stft(f, g, 0.5)


def cross_wigner(f: Signal, g: Signal, tau: float = 0.5, method: str = "fast") -> PhaseSpaceFunction:
    """Cross-tau-Wigner distribution of a signal pair.

    ``method='fast'`` computes the symplectic Fourier transform of the
    tau-STFT; ``method='integral'`` evaluates the defining integral

        W(x, w) = dx * sum_t exp(-2 pi i t w) f(x + tau t) conj(g(x - (1-tau) t))

    with trigonometric interpolation for the off-grid arguments.  Both are
    part of the public API so higher layers can cross-validate conventions.
    """
    tau = check_tau(tau)
    check_same_grid(f, g)
    if method == "fast":
        return symplectic_fourier(tau_stft(f, g, tau))
    if method != "integral":
        raise ValueError(f"unknown method {method!r}")
    grid = f.grid
    n = grid.n
    t = grid.times
    # f(x + tau t): for column j (lag t_j) a uniformly shifted sample set
    xx = t[:, None] + tau * t[None, :]
    yy = t[:, None] - (1.0 - tau) * t[None, :]
    if tau == 0.0:
        fx = np.repeat(f.values[:, None], n, axis=1)
    elif tau == 1.0:
        rows = np.arange(n)
        fx = f.values[(rows[:, None] + rows[None, :] - n // 2) % n]
    else:
        fx = eval_periodic_1d(f.values, xx.ravel(), grid.length).reshape(n, n)
    if tau == 1.0:
        gy = np.repeat(g.values[:, None], n, axis=1)
    elif tau == 0.0:
        rows = np.arange(n)
        gy = g.values[(rows[:, None] - rows[None, :] + n // 2) % n]
    else:
        gy = eval_periodic_1d(g.values, yy.ravel(), grid.length).reshape(n, n)
    integrand = fx * gy.conj()
    vals = grid.dx * cfft(integrand, axis=1)
    return PhaseSpaceFunction(grid, vals)


# -- reference windows ---------------------------------------------------------


def gaussian(grid: GridSpec, normalized: bool = True) -> Signal:
    """Standard Gaussian 2^(1/4) exp(-pi t^2), optionally grid-renormalized."""
    vals = 2.0**0.25 * np.exp(-np.pi * grid.times**2)
    s = Signal(grid, vals.astype(np.complex128))
    if normalized:
        s = Signal(grid, s.values / s.norm())
    return s


def hermite_functions(grid: GridSpec, count: int) -> list[Signal]:
    """First ``count`` harmonic-oscillator eigenfunctions, grid-orthonormalized.

    Built by the Hermite recurrence in the variable sqrt(2 pi) t against the
    weight exp(-pi t^2), then QR-orthonormalized so the family is exactly
    orthonormal in the discrete inner product.
    """
    if count < 1 or count > grid.n:
        raise ValueError(f"count must be in 1..{grid.n}, got {count}")
    t = grid.times
    u = np.sqrt(2.0 * np.pi) * t
    base = np.exp(-np.pi * t**2)
    cols = np.empty((grid.n, count), dtype=np.float64)
    h_prev = np.ones_like(t)
    h_curr = 2.0 * u
    for k in range(count):
        if k == 0:
            h = h_prev
        elif k == 1:
            h = h_curr
        else:
            h_prev, h_curr = h_curr, 2.0 * u * h_curr - 2.0 * (k - 1) * h_prev
            h = h_curr
        cols[:, k] = h * base
    q, r = np.linalg.qr(cols)
    # fix sign so the leading lobe is positive, independent of LAPACK details
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    q = q * signs
    scale = 1.0 / np.sqrt(grid.dx)
    return [Signal(grid, (scale * q[:, k]).astype(np.complex128)) for k in range(count)]
