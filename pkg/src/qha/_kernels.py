"""Loop-bound numeric kernels with a numba fast path and a pure-numpy fallback.

Every kernel exists twice: a ``_nb_``-prefixed njit implementation (plain
loops) and a ``_np_``-prefixed vectorized one.  The active backend is chosen
at import time from the ``QHA_NO_NUMBA`` environment variable and can be
switched at runtime with :func:`set_backend` (used by the test suite and the
benchmark script).  Both paths must agree to machine precision; the contract
is checked in ``tests/test_backends.py``.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap


_TWO_PI = 2.0 * np.pi


def _initial_backend() -> str:
    if os.environ.get("QHA_NO_NUMBA", "").strip() not in ("", "0"):
        return "numpy"
    return "numba" if HAVE_NUMBA else "numpy"


_ACTIVE = _initial_backend()


def set_backend(name: str) -> None:
    """Select 'numba' or 'numpy' for all hot kernels."""
    global _ACTIVE
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba backend requested but numba is not importable")
    _ACTIVE = name


def active_backend() -> str:
    return _ACTIVE


# ---------------------------------------------------------------------------
# trigonometric interpolation
#
# A length-N centered sample vector is represented by coefficients
# c_k = cDFT(f)[k]/N, k = -N/2 .. N/2-1, and the interpolant is
#   f(p) = sum_{k=-N/2}^{N/2-1} c_k e^{2 pi i k p / L},
# with the unpaired Nyquist mode kept one-sided at -N/2.  This is the same
# mode set the lattice Riemann sums use, which is what makes quantization
# exactly adjoint to the Wigner transform on the grid; zero-padded
# refinement places the Nyquist coefficient the same way.
# ---------------------------------------------------------------------------


def _np_basis(points: np.ndarray, n: int, period: float) -> np.ndarray:
    # rows: evaluation points, columns: centered mode index 0..n-1
    k = np.arange(n) - n // 2
    return np.exp(2j * np.pi * np.outer(points, k) / period)


def _np_trig_eval_2d(coeffs, points0, points1, period0, period1):
    b0 = _np_basis(points0, coeffs.shape[0], period0)
    b1 = _np_basis(points1, coeffs.shape[1], period1)
    return ((b0 @ coeffs) * b1).sum(axis=1)


@njit(cache=True)
def _nb_trig_eval_2d(coeffs, points0, points1, period0, period1):  # pragma: no cover
    n0, n1 = coeffs.shape
    m = points0.shape[0]
    out = np.zeros(m, dtype=np.complex128)
    eb = np.empty(n1, dtype=np.complex128)
    for i in range(m):
        p, q = points0[i], points1[i]
        for b in range(n1):
            eb[b] = np.exp(2j * np.pi * (b - n1 // 2) * q / period1)
        acc = 0.0 + 0.0j
        for a in range(n0):
            row = 0.0 + 0.0j
            for b in range(n1):
                row += coeffs[a, b] * eb[b]
            acc += np.exp(2j * np.pi * (a - n0 // 2) * p / period0) * row
        out[i] = acc
    return out


def trig_eval_2d(coeffs, points0, points1, period0, period1):
    """Evaluate the 2D trig interpolant with coefficients ``coeffs`` at points."""
    p0 = np.ascontiguousarray(points0, dtype=np.float64).ravel()
    p1 = np.ascontiguousarray(points1, dtype=np.float64).ravel()
    c = np.ascontiguousarray(coeffs, dtype=np.complex128)
    if _ACTIVE == "numba":
        return _nb_trig_eval_2d(c, p0, p1, float(period0), float(period1))
    return _np_trig_eval_2d(c, p0, p1, float(period0), float(period1))


def _np_trig_eval_1d(coeffs, points, period):
    return _np_basis(points, coeffs.shape[0], period) @ coeffs


@njit(cache=True)
def _nb_trig_eval_1d(coeffs, points, period):  # pragma: no cover
    n = coeffs.shape[0]
    m = points.shape[0]
    out = np.zeros(m, dtype=np.complex128)
    for i in range(m):
        p = points[i]
        acc = 0.0 + 0.0j
        for a in range(n):
            acc += coeffs[a] * np.exp(2j * np.pi * (a - n // 2) * p / period)
        out[i] = acc
    return out


def trig_eval_1d(coeffs, points, period):
    p = np.ascontiguousarray(points, dtype=np.float64).ravel()
    c = np.ascontiguousarray(coeffs, dtype=np.complex128)
    if _ACTIVE == "numba":
        return _nb_trig_eval_1d(c, p, float(period))
    return _np_trig_eval_1d(c, p, float(period))


# ---------------------------------------------------------------------------
# spreading-representation lattice sum (definitional oracle, O(N^4))
#
# K[t, u] += dz2 * h(x, w) * exp(-2 pi i tau x w) * exp(2 pi i w t) / dx
# with u = t - x wrapped on the grid; x, w run over the full phase lattice.
# ---------------------------------------------------------------------------


@njit(cache=True)
def _nb_spreading_sum(h, tau, t_vals, om_vals, dz2_over_dx):  # pragma: no cover
    n = h.shape[0]
    out = np.zeros((n, n), dtype=np.complex128)
    mod = np.empty((n, n), dtype=np.complex128)
    for k in range(n):
        for j in range(n):
            mod[k, j] = np.exp(2j * np.pi * om_vals[k] * t_vals[j])
    for mx in range(n):
        s = mx - n // 2
        x = t_vals[mx]
        for k in range(n):
            amp = dz2_over_dx * h[mx, k] * np.exp(-2j * np.pi * tau * x * om_vals[k])
            for j in range(n):
                out[j, (j - s) % n] += amp * mod[k, j]
    return out


def _np_spreading_sum(h, tau, t_vals, om_vals, dz2_over_dx):
    n = h.shape[0]
    out = np.zeros((n, n), dtype=np.complex128)
    mod = np.exp(2j * np.pi * np.outer(om_vals, t_vals))  # [k, j]
    rows = np.arange(n)
    for mx in range(n):
        s = mx - n // 2
        amp = dz2_over_dx * h[mx, :] * np.exp(-2j * np.pi * tau * t_vals[mx] * om_vals)
        out[rows, (rows - s) % n] += amp @ mod
    return out


def spreading_sum(h, tau, t_vals, om_vals, dz2_over_dx):
    h = np.ascontiguousarray(h, dtype=np.complex128)
    t_vals = np.ascontiguousarray(t_vals, dtype=np.float64)
    om_vals = np.ascontiguousarray(om_vals, dtype=np.float64)
    if _ACTIVE == "numba":
        return _nb_spreading_sum(h, float(tau), t_vals, om_vals, float(dz2_over_dx))
    return _np_spreading_sum(h, float(tau), t_vals, om_vals, float(dz2_over_dx))


# ---------------------------------------------------------------------------
# function (*) operator convolution, definitional oracle (O(N^4))
#
# K_out = dz2 * sum_z a(z) K_{alpha_z S},
# K_{alpha_z S}(y, u) = exp(2 pi i (y-u) w) K_S(y-x, u-x).
# ---------------------------------------------------------------------------


@njit(cache=True)
def _nb_conv_fn_op_sum(a, ker, t_vals, om_vals, dz2):  # pragma: no cover
    n = a.shape[0]
    out = np.zeros((n, n), dtype=np.complex128)
    mod = np.empty((n, n), dtype=np.complex128)
    for k in range(n):
        for j in range(n):
            mod[k, j] = np.exp(2j * np.pi * om_vals[k] * t_vals[j])
    for mx in range(n):
        s = mx - n // 2
        for k in range(n):
            amp = dz2 * a[mx, k]
            if amp == 0:
                continue
            for y in range(n):
                py = amp * mod[k, y]
                for u in range(n):
                    out[y, u] += py * np.conj(mod[k, u]) * ker[(y - s) % n, (u - s) % n]
    return out


def _np_conv_fn_op_sum(a, ker, t_vals, om_vals, dz2):
    n = a.shape[0]
    out = np.zeros((n, n), dtype=np.complex128)
    idx = np.arange(n)
    for mx in range(n):
        s = mx - n // 2
        shifted = ker[np.ix_((idx - s) % n, (idx - s) % n)]
        for k in range(n):
            if a[mx, k] == 0:
                continue
            mod = np.exp(2j * np.pi * om_vals[k] * t_vals)
            out += dz2 * a[mx, k] * (np.outer(mod, mod.conj()) * shifted)
    return out


def conv_fn_op_sum(a, ker, t_vals, om_vals, dz2):
    a = np.ascontiguousarray(a, dtype=np.complex128)
    ker = np.ascontiguousarray(ker, dtype=np.complex128)
    if _ACTIVE == "numba":
        return _nb_conv_fn_op_sum(a, ker, t_vals, om_vals, float(dz2))
    return _np_conv_fn_op_sum(a, ker, t_vals, om_vals, float(dz2))


# ---------------------------------------------------------------------------
# twisted convolution of two 4-index lattice arrays (O(M^2) in entry count)
#
# (F nat H)[z, w] = cell * sum_{z', w'} F[z', w'] H[z - z', w - w']
#                   * exp(2 pi i (omega * x' - u' * v))
# with z = (x, omega), w = (u, v); indices wrap periodically.
# ---------------------------------------------------------------------------


@njit(cache=True)
def _nb_twisted_conv4(F, H, xs, oms, us, vs, cell):  # pragma: no cover
    m0, m1, m2, m3 = F.shape
    out = np.zeros((m0, m1, m2, m3), dtype=np.complex128)
    ph_bx = np.empty((m1, m0), dtype=np.complex128)
    for b in range(m1):
        for ap in range(m0):
            ph_bx[b, ap] = np.exp(2j * np.pi * oms[b] * xs[ap])
    ph_ud = np.empty((m2, m3), dtype=np.complex128)
    for cp in range(m2):
        for d in range(m3):
            ph_ud[cp, d] = np.exp(-2j * np.pi * us[cp] * vs[d])
    idx0 = np.empty((m0, m0), dtype=np.int64)
    for a in range(m0):
        for ap in range(m0):
            idx0[a, ap] = (a - ap + m0 // 2) % m0
    idx1 = np.empty((m1, m1), dtype=np.int64)
    for b in range(m1):
        for bp in range(m1):
            idx1[b, bp] = (b - bp + m1 // 2) % m1
    for a in range(m0):
        for b in range(m1):
            for c in range(m2):
                for d in range(m3):
                    acc = 0.0 + 0.0j
                    for ap in range(m0):
                        pb = ph_bx[b, ap]
                        for bp in range(m1):
                            fa = F[ap, bp]
                            ha = H[idx0[a, ap], idx1[b, bp]]
                            for cp in range(m2):
                                pbu = pb * ph_ud[cp, d]
                                row_f = fa[cp]
                                row_h = ha[idx0[c, cp]]
                                for dp in range(m3):
                                    acc += row_f[dp] * row_h[idx1[d, dp]] * pbu
                    out[a, b, c, d] = cell * acc
    return out


def _np_twisted_conv4(F, H, xs, oms, us, vs, cell):
    # centered-value convolution: index of (z - z') is (a - a' + half) mod m,
    # so work with the ifftshifted H in raw cyclic index space
    m0, m1, m2, m3 = F.shape
    out = np.zeros((m0, m1, m2, m3), dtype=np.complex128)
    f_hat = np.fft.fftn(F, axes=(1, 3))
    h_hat = np.fft.fftn(np.fft.ifftshift(H), axes=(1, 3))
    for ap in range(m0):
        pb = np.exp(2j * np.pi * oms * xs[ap])  # over output axis b
        for cp in range(m2):
            pd = np.exp(-2j * np.pi * us[cp] * vs)  # over output axis d
            rolled = np.roll(h_hat, (ap, cp), axis=(0, 2))
            block = np.fft.ifftn(
                f_hat[ap, :, cp, :][None, :, None, :] * rolled, axes=(1, 3)
            )
            out += block * pb[None, :, None, None] * pd[None, None, None, :]
    return cell * out


def twisted_conv4(F, H, xs, oms, us, vs, cell):
    F = np.ascontiguousarray(F, dtype=np.complex128)
    H = np.ascontiguousarray(H, dtype=np.complex128)
    if F.shape[0] != F.shape[2] or F.shape[1] != F.shape[3]:
        raise ValueError("twisted convolution expects matching z and w lattices")
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    oms = np.ascontiguousarray(oms, dtype=np.float64)
    us = np.ascontiguousarray(us, dtype=np.float64)
    vs = np.ascontiguousarray(vs, dtype=np.float64)
    if _ACTIVE == "numba":
        return _nb_twisted_conv4(F, H, xs, oms, us, vs, float(cell))
    return _np_twisted_conv4(F, H, xs, oms, us, vs, float(cell))


# transposed pairing: theta = x omega' - u v' (outer positions against inner
# frequencies); the variant under which the reproducing identity is exact


@njit(cache=True)
def _nb_twisted_conv4_t(F, H, xs, oms, us, vs, cell):  # pragma: no cover
    m0, m1, m2, m3 = F.shape
    out = np.zeros((m0, m1, m2, m3), dtype=np.complex128)
    ph_ab = np.empty((m0, m1), dtype=np.complex128)
    for a in range(m0):
        for bp in range(m1):
            ph_ab[a, bp] = np.exp(2j * np.pi * xs[a] * oms[bp])
    ph_cd = np.empty((m2, m3), dtype=np.complex128)
    for c in range(m2):
        for dp in range(m3):
            ph_cd[c, dp] = np.exp(-2j * np.pi * us[c] * vs[dp])
    idx0 = np.empty((m0, m0), dtype=np.int64)
    for a in range(m0):
        for ap in range(m0):
            idx0[a, ap] = (a - ap + m0 // 2) % m0
    idx1 = np.empty((m1, m1), dtype=np.int64)
    for b in range(m1):
        for bp in range(m1):
            idx1[b, bp] = (b - bp + m1 // 2) % m1
    for a in range(m0):
        for b in range(m1):
            for c in range(m2):
                for d in range(m3):
                    acc = 0.0 + 0.0j
                    for ap in range(m0):
                        for bp in range(m1):
                            fa = F[ap, bp]
                            ha = H[idx0[a, ap], idx1[b, bp]]
                            pab = ph_ab[a, bp]
                            for cp in range(m2):
                                row_f = fa[cp]
                                row_h = ha[idx0[c, cp]]
                                pc = pab
                                for dp in range(m3):
                                    acc += (
                                        row_f[dp]
                                        * row_h[idx1[d, dp]]
                                        * pc
                                        * ph_cd[c, dp]
                                    )
                    out[a, b, c, d] = cell * acc
    return out


def _np_twisted_conv4_t(F, H, xs, oms, us, vs, cell):
    m0, m1, m2, m3 = F.shape
    out = np.zeros((m0, m1, m2, m3), dtype=np.complex128)
    f_hat = np.fft.fftn(F, axes=(0, 2))
    h_hat = np.fft.fftn(np.fft.ifftshift(H), axes=(0, 2))
    for bp in range(m1):
        pa = np.exp(2j * np.pi * xs * oms[bp])  # over output axis a
        for dp in range(m3):
            pc = np.exp(-2j * np.pi * us * vs[dp])  # over output axis c
            rolled = np.roll(h_hat, (bp, dp), axis=(1, 3))
            block = np.fft.ifftn(
                f_hat[:, bp, :, dp][:, None, :, None] * rolled, axes=(0, 2)
            )
            out += block * pa[:, None, None, None] * pc[None, None, :, None]
    return cell * out


def twisted_conv4_transposed(F, H, xs, oms, us, vs, cell):
    F = np.ascontiguousarray(F, dtype=np.complex128)
    H = np.ascontiguousarray(H, dtype=np.complex128)
    if F.shape[0] != F.shape[2] or F.shape[1] != F.shape[3]:
        raise ValueError("twisted convolution expects matching z and w lattices")
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    oms = np.ascontiguousarray(oms, dtype=np.float64)
    us = np.ascontiguousarray(us, dtype=np.float64)
    vs = np.ascontiguousarray(vs, dtype=np.float64)
    if _ACTIVE == "numba":
        return _nb_twisted_conv4_t(F, H, xs, oms, us, vs, float(cell))
    return _np_twisted_conv4_t(F, H, xs, oms, us, vs, float(cell))


# ---------------------------------------------------------------------------
# pointwise Wigner reconstruction from a full-lattice Gabor matrix (O(N^4)
# per requested point)
#
# R(z) = cell^2 * sum_{z'} sum_{w} exp(-2 pi i theta) M[z' + w, w],
# theta = (omega' x - ... ) collected as
#   theta = (x' omega - omega' x) + (coef - 1/2) x' omega' - x' v.
# The inner quadrature nodes are offset by z'/2 relative to the printed
# integral, which keeps every Gabor-matrix argument on the integer lattice
# and makes the reconstruction exact on the grid; z' and w both run over the
# full fundamental lattice.
# ---------------------------------------------------------------------------


@njit(cache=True)
def _nb_reconstruct_point(M4, t_vals, om_vals, x, om, coef, weight):  # pragma: no cover
    n = M4.shape[0]
    half = n // 2
    acc = 0.0 + 0.0j
    for a in range(n):
        xp = t_vals[a]
        for b in range(n):
            wp = om_vals[b]
            base = (xp * om - wp * x) + (coef - 0.5) * xp * wp
            for c in range(n):
                i0 = (a + c - half) % n
                for d in range(n):
                    theta = base - xp * om_vals[d]
                    acc += np.exp(-2j * np.pi * theta) * M4[
                        i0, (b + d - half) % n, c, d
                    ]
    return weight * acc


def _np_reconstruct_point(M4, t_vals, om_vals, x, om, coef, weight):
    n = M4.shape[0]
    half = n // 2
    ia = np.arange(n)
    j1 = (ia[:, None] + ia[None, :] - half) % n  # index of value(a) + value(c)
    mm = M4[j1[:, None, :, None], j1[None, :, None, :], ia[None, None, :, None], ia[None, None, None, :]]
    theta = (
        (om * t_vals[:, None, None, None] - om_vals[None, :, None, None] * x)
        + (coef - 0.5) * t_vals[:, None, None, None] * om_vals[None, :, None, None]
        - t_vals[:, None, None, None] * om_vals[None, None, None, :]
    )
    return weight * np.sum(np.exp(-2j * np.pi * theta) * mm)


def reconstruct_point(M4, t_vals, om_vals, x, om, coef, weight):
    M4 = np.ascontiguousarray(M4, dtype=np.complex128)
    if _ACTIVE == "numba":
        return _nb_reconstruct_point(
            M4, t_vals, om_vals, float(x), float(om), float(coef), float(weight)
        )
    return _np_reconstruct_point(M4, t_vals, om_vals, x, om, coef, weight)
