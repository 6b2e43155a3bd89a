from __future__ import annotations

import numpy as np
import pytest

import qha


@pytest.fixture
def grid64():
    return qha.make_grid(64, 8.0)


@pytest.fixture
def grid32():
    return qha.make_grid(32, 8.0)


@pytest.fixture
def grid16():
    return qha.make_grid(16, 8.0)


@pytest.fixture
def phi64(grid64):
    return qha.gaussian(grid64)


@pytest.fixture
def phi32(grid32):
    return qha.gaussian(grid32)


def smooth_signal(grid, seed):
    """Random Gaussian-modulated signal: rough coefficients, rapid decay."""
    rng = np.random.default_rng(seed)
    env = np.exp(-np.pi * grid.times**2)
    vals = env * (rng.normal(size=grid.n) + 1j * rng.normal(size=grid.n))
    return qha.Signal(grid, vals)


def rough_signal(grid, seed):
    rng = np.random.default_rng(seed)
    vals = rng.normal(size=grid.n) + 1j * rng.normal(size=grid.n)
    return qha.Signal(grid, vals)


def gaussian_pulse(grid, seed):
    """Gaussian-type signal: the unit Gaussian, lattice-shifted and modulated."""
    rng = np.random.default_rng(seed)
    base = qha.gaussian(grid)
    i = int(rng.integers(-grid.n // 8, grid.n // 8))
    k = int(rng.integers(-grid.n // 8, grid.n // 8))
    z = qha.LatticePoint(i * grid.dx, k * grid.dw)
    amp = complex(rng.normal(), rng.normal())
    return amp * qha.tf_shift(base, z, 0.0)


def smooth_symbol(grid, seed):
    """Random smooth phase-space function (Gaussian envelope, random phase)."""
    rng = np.random.default_rng(seed)
    env = np.exp(-np.pi * (grid.times[:, None] ** 2 + grid.freqs[None, :] ** 2))
    vals = env * (
        rng.normal(size=(grid.n, grid.n)) + 1j * rng.normal(size=(grid.n, grid.n))
    )
    return qha.PhaseSpaceFunction(grid, vals)


def lattice_point(grid, i, k):
    return qha.LatticePoint.from_indices(grid, i, k)


TAUS = (0.0, 0.3, 0.5, 0.77, 1.0)
