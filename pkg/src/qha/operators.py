"""Finite-rank operators: kernel calculus, trace, adjoint, composition,
phase-space translation, parity conjugation and positivity diagnostics.

An operator is stored as an ordered list of signal pairs (f_n, g_n) and
represents S = sum_n f_n (x) g_n, acting as S psi = sum_n <psi, g_n> f_n.
Its integral kernel is K(y, u) = sum_n f_n(y) conj(g_n(u)); every finite-rank
identity below is exact on the grid, so most cross-checks run at 1e-12.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import GridError, GridSpec, KernelMatrix, centered_reverse_2d, check_same_grid
from .signals import LatticePoint, Signal, tf_shift


@dataclass
class FiniteRankOperator:
    grid: GridSpec
    terms: tuple[tuple[Signal, Signal], ...]

    def __post_init__(self):
        terms = tuple((f, g) for f, g in self.terms)
        for f, g in terms:
            if f.grid != self.grid or g.grid != self.grid:
                raise GridError("all terms must live on the operator grid")
        self.terms = terms

    @property
    def rank(self) -> int:
        return len(self.terms)

    def kernel(self) -> KernelMatrix:
        """K(y, u) = sum_n f_n(y) conj(g_n(u))."""
        vals = np.zeros((self.grid.n, self.grid.n), dtype=np.complex128)
        for f, g in self.terms:
            vals += np.outer(f.values, g.values.conj())
        return KernelMatrix(self.grid, vals)

    def apply(self, psi: Signal) -> Signal:
        check_same_grid(self, psi)
        out = np.zeros(self.grid.n, dtype=np.complex128)
        for f, g in self.terms:
            out += psi.inner(g) * f.values
        return Signal(self.grid, out)

    def trace(self) -> complex:
        return complex(sum(f.inner(g) for f, g in self.terms))

    def adjoint(self) -> "FiniteRankOperator":
        return FiniteRankOperator(self.grid, tuple((g, f) for f, g in self.terms))

    def compose(self, other: "FiniteRankOperator") -> "FiniteRankOperator":
        """Operator product: (S compose T) psi = S(T psi).

        Terms are <h_m, g_n> (f_n (x) l_m) for S = sum f_n (x) g_n and
        T = sum h_m (x) l_m.  The kernel of the product is
        dx * sum_t K_S(y, t) K_T(t, u) -- note the executable order; see the
        kernel-path test.
        """
        check_same_grid(self, other)
        terms = []
        for f, g in self.terms:
            for h, el in other.terms:
                terms.append((h.inner(g) * f, el))
        return FiniteRankOperator(self.grid, tuple(terms))

    def translate(self, z: LatticePoint) -> "FiniteRankOperator":
        """Phase-space translation: conjugation by the plain shift at z."""
        return FiniteRankOperator(
            self.grid,
            tuple((tf_shift(f, z), tf_shift(g, z)) for f, g in self.terms),
        )

    def parity_conjugate(self) -> "FiniteRankOperator":
        """Conjugation by the parity operator; kernel K(-y, -u)."""
        return FiniteRankOperator(
            self.grid, tuple((f.reversed(), g.reversed()) for f, g in self.terms)
        )

    def __add__(self, other: "FiniteRankOperator") -> "FiniteRankOperator":
        check_same_grid(self, other)
        return FiniteRankOperator(self.grid, self.terms + other.terms)

    def __mul__(self, scalar) -> "FiniteRankOperator":
        return FiniteRankOperator(
            self.grid, tuple((scalar * f, g) for f, g in self.terms)
        )

    __rmul__ = __mul__


@dataclass
class OperatorAsKernel:
    """Operator given by its materialized integral kernel."""

    kernel: KernelMatrix

    @property
    def grid(self) -> GridSpec:
        return self.kernel.grid

    def apply(self, psi: Signal) -> Signal:
        check_same_grid(self, psi)
        return Signal(self.grid, self.grid.dx * (self.kernel.values @ psi.values))

    def trace(self) -> complex:
        return complex(self.grid.dx * np.trace(self.kernel.values))

    def adjoint(self) -> "OperatorAsKernel":
        return OperatorAsKernel(KernelMatrix(self.grid, self.kernel.values.conj().T))

    def parity_conjugate(self) -> "OperatorAsKernel":
        return OperatorAsKernel(
            KernelMatrix(self.grid, centered_reverse_2d(self.kernel.values))
        )

    def to_finite_rank(self, svd_tol: float = 1e-12) -> FiniteRankOperator:
        """SVD truncation; singular values below svd_tol * sigma_max are dropped.

        The dx weight makes the factorization match the dx-weighted kernel sum,
        so the round trip through ``kernel()`` is exact at full rank.
        """
        u, s, vh = np.linalg.svd(self.kernel.values * self.grid.dx)
        keep = s > (svd_tol * s[0] if s.size and s[0] > 0 else 0.0)
        terms = []
        scale = 1.0 / self.grid.dx
        for i in np.flatnonzero(keep):
            f = Signal(self.grid, u[:, i] * s[i] * scale)
            g = Signal(self.grid, vh[i, :].conj())
            terms.append((f, g))
        return FiniteRankOperator(self.grid, tuple(terms))


def as_kernel_operator(op) -> OperatorAsKernel:
    if isinstance(op, OperatorAsKernel):
        return op
    return OperatorAsKernel(op.kernel())


def kernel_of(op) -> KernelMatrix:
    if isinstance(op, OperatorAsKernel):
        return op.kernel
    return op.kernel()


def translate_kernel(k: KernelMatrix, z: LatticePoint) -> KernelMatrix:
    """Kernel of the translated operator: exp(2 pi i (y-u) w) K(y-x, u-x)."""
    steps, _, w = z.validate(k.grid)
    t = k.grid.times
    mod = np.exp(2j * np.pi * w * t)
    shifted = np.roll(k.values, (steps, steps), axis=(0, 1))
    return KernelMatrix(k.grid, np.outer(mod, mod.conj()) * shifted)


@dataclass
class PositivityReport:
    hermitian_defect: float
    min_eigenvalue: float
    tol: float
    positive: bool


def is_positive(op, tol: float | None = None) -> PositivityReport:
    """Check the dx-weighted kernel matrix for Hermitian positivity.

    Default tolerance is 1e-10 times the spectral norm, matching the backward
    error of the eigenvalue solver.
    """
    ker = kernel_of(op)
    a = ker.values * ker.grid.dx
    scale = float(np.linalg.norm(a, 2)) or 1.0
    if tol is None:
        tol = 1e-10 * scale
    defect = float(np.max(np.abs(a - a.conj().T)))
    herm = 0.5 * (a + a.conj().T)
    min_eig = float(np.linalg.eigvalsh(herm).min())
    ok = defect <= tol and min_eig >= -tol
    return PositivityReport(defect, min_eig, float(tol), ok)


def random_state(grid: GridSpec, rank: int, seed: int) -> FiniteRankOperator:
    """Deterministic positive trace-one state of the given rank.

    Mixes the first ``rank`` harmonic-oscillator functions through a random
    unitary (so different seeds give genuinely different smooth states) with
    random convex weights.
    """
    from .signals import hermite_functions

    if rank < 1 or rank > grid.n:
        raise ValueError(f"rank must be in 1..{grid.n}, got {rank}")
    rng = np.random.default_rng(seed)
    basis = hermite_functions(grid, rank)
    mat = np.column_stack([h.values for h in basis])
    gauss = rng.normal(size=(rank, rank)) + 1j * rng.normal(size=(rank, rank))
    q, r = np.linalg.qr(gauss)
    q = q * (np.diag(r) / np.abs(np.diag(r)))
    mixed = mat @ q
    weights = rng.uniform(0.2, 1.0, size=rank)
    weights /= weights.sum()
    terms = []
    for i in range(rank):
        h = Signal(grid, mixed[:, i])
        terms.append((weights[i] * h, h.copy()))
    return FiniteRankOperator(grid, tuple(terms))
