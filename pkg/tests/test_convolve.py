from __future__ import annotations

import numpy as np

import qha
from qha import FiniteRankOperator, PhaseSpaceFunction
from qha.convolve import (
    cohen_distribution,
    cohen_of_signal,
    convolve_function_operator,
    convolve_operators,
    convolve_ps,
    convolve_ps_direct,
    delta_spike,
)

from conftest import TAUS, smooth_signal, smooth_symbol


def projector(grid):
    phi = qha.gaussian(grid)
    return FiniteRankOperator(grid, ((phi, phi),))


def gaussian_2d(grid):
    vals = np.exp(-np.pi * (grid.times[:, None] ** 2 + grid.freqs[None, :] ** 2))
    return PhaseSpaceFunction(grid, vals.astype(complex))


def test_convolve_ps_delta_neutral(grid32):
    f = smooth_symbol(grid32, 0)
    out = convolve_ps(f, delta_spike(grid32))
    assert np.max(np.abs(out.values - f.values)) <= 1e-12 * np.max(np.abs(f.values))


def test_convolve_ps_gaussian_closed_form(grid64):
    # exp(-pi|z|^2) * exp(-pi|z|^2) = (1/2) exp(-pi|z|^2/2)
    g2 = gaussian_2d(grid64)
    out = convolve_ps(g2, g2)
    closed = 0.5 * np.exp(
        -np.pi * (grid64.times[:, None] ** 2 + grid64.freqs[None, :] ** 2) / 2
    )
    assert np.max(np.abs(out.values - closed)) <= 1e-8


def test_convolve_ps_matches_direct_sum(grid16):
    f = smooth_symbol(grid16, 1)
    g = smooth_symbol(grid16, 2)
    fast = convolve_ps(f, g)
    direct = convolve_ps_direct(f, g)
    assert np.max(np.abs(fast.values - direct.values)) <= 1e-10 * np.max(
        np.abs(direct.values)
    )


def test_convolve_ps_commutative(grid32):
    f = smooth_symbol(grid32, 3)
    g = smooth_symbol(grid32, 4)
    ab = convolve_ps(f, g)
    ba = convolve_ps(g, f)
    assert np.max(np.abs(ab.values - ba.values)) <= 1e-12 * np.max(np.abs(ab.values))


def test_conv_fn_op_delta_neutral(grid32):
    s = qha.random_state(grid32, 2, seed=5)
    out = convolve_function_operator(delta_spike(grid32), s)
    assert np.max(np.abs(out.kernel.values - s.kernel().values)) <= 1e-12 * np.max(
        np.abs(s.kernel().values)
    )


def test_conv_fn_op_preserves_positivity(grid32):
    s = qha.random_state(grid32, 2, seed=6)
    out = convolve_function_operator(gaussian_2d(grid32), s)
    rep = qha.is_positive(out)
    assert rep.positive
    assert rep.min_eigenvalue >= -1e-8 * abs(np.linalg.norm(out.kernel.values))


def test_conv_fn_op_symbol_identity(grid32):
    # the tau-symbol of a (*) S is a conv W_tau(S)
    a = smooth_symbol(grid32, 7)
    s = qha.random_state(grid32, 2, seed=8)
    for tau in TAUS:
        lhs = qha.wigner_transform(convolve_function_operator(a, s), tau)
        rhs = convolve_ps(a, qha.wigner_transform(s, tau))
        assert np.max(np.abs(lhs.values - rhs.values)) <= 1e-8 * np.max(
            np.abs(rhs.values)
        )


def test_conv_fn_op_fast_vs_lattice(grid32):
    a = smooth_symbol(grid32, 9)
    s = qha.random_state(grid32, 2, seed=10)
    fast = convolve_function_operator(a, s)
    latt = convolve_function_operator(a, s, method="lattice")
    scale = np.max(np.abs(latt.kernel.values))
    assert np.max(np.abs(fast.kernel.values - latt.kernel.values)) <= 1e-8 * scale


def test_conv_op_op_gaussian_pair(grid64, phi64):
    p = projector(grid64)
    out = convolve_operators(p, p)
    amb2 = np.abs(qha.ambiguity(phi64, phi64).values) ** 2
    assert np.max(np.abs(out.values - amb2)) <= 1e-8
    c = grid64.n // 2
    assert abs(out.values[c, c] - 1.0) <= 1e-8
    assert out.values.real.min() >= -1e-10


def test_conv_op_op_fast_vs_trace_oracle(grid32):
    s = qha.random_state(grid32, 2, seed=11)
    t = qha.random_state(grid32, 2, seed=12)
    fast = convolve_operators(s, t, 0.3)
    oracle = convolve_operators(s, t, 0.3, method="trace")
    scale = np.max(np.abs(oracle.values))
    assert np.max(np.abs(fast.values - oracle.values)) <= 1e-8 * scale


def test_conv_op_op_stft_expansion(grid32):
    s = qha.random_state(grid32, 2, seed=13)
    t = qha.random_state(grid32, 2, seed=14)
    fast = convolve_operators(s, t)
    exp = convolve_operators(s, t, method="stft")
    assert np.max(np.abs(fast.values - exp.values)) <= 1e-10 * np.max(np.abs(fast.values))


def test_conv_op_op_total_mass(grid32):
    s = qha.random_state(grid32, 2, seed=15)
    t = qha.random_state(grid32, 3, seed=16)
    st = convolve_operators(s, t)
    assert abs(st.integral() - s.trace() * t.trace()) <= 1e-8


def test_conv_op_op_commutative(grid32):
    s = qha.random_state(grid32, 2, seed=17)
    t = qha.random_state(grid32, 2, seed=18)
    ab = convolve_operators(s, t)
    ba = convolve_operators(t, s)
    assert np.max(np.abs(ab.values - ba.values)) <= 1e-8 * np.max(np.abs(ab.values))


def test_cohen_spike_kernel_gives_wigner(grid32):
    s = qha.random_state(grid32, 2, seed=19)
    for tau in (0.0, 0.5, 1.0):
        q = cohen_distribution(delta_spike(grid32), s, tau)
        w = qha.wigner_transform(s, tau)
        assert np.max(np.abs(q.values - w.values)) <= 1e-10 * np.max(np.abs(w.values))


def test_cohen_rank_one_reduces_to_function_case(grid32):
    a = smooth_symbol(grid32, 20)
    f = smooth_signal(grid32, 21)
    g = smooth_signal(grid32, 22)
    s = FiniteRankOperator(grid32, ((f, g),))
    for tau in (0.0, 0.77):
        lhs = cohen_distribution(a, s, tau)
        rhs = convolve_ps(a, qha.cross_wigner(f, g, tau))
        assert np.max(np.abs(lhs.values - rhs.values)) <= 1e-10 * np.max(
            np.abs(rhs.values)
        )


def test_spectral_cohen_class_identity(grid32, phi32):
    # kernel W_{1-tau}(phi_rev, phi_rev) turns the Cohen class of a mixture
    # sum h_n x h_n into the spectrogram sum |V_phi h_n|^2
    s = qha.random_state(grid32, 3, seed=23)
    for tau in (0.0, 0.3, 0.5, 1.0):
        a = qha.cross_wigner(phi32.reversed(), phi32.reversed(), 1.0 - tau)
        q = cohen_distribution(PhaseSpaceFunction(grid32, a.values), s, tau)
        direct = np.zeros((grid32.n, grid32.n), dtype=complex)
        for f, g in s.terms:
            vf = qha.tau_stft(f, phi32, 0.0).values
            vg = qha.tau_stft(g, phi32, 0.0).values
            direct += vf * vg.conj()
        assert np.max(np.abs(q.values - direct)) <= 1e-8 * np.max(np.abs(direct))


def test_cohen_of_signal_paths_agree(grid32):
    s = qha.random_state(grid32, 2, seed=24)
    f = smooth_signal(grid32, 25)
    inner = cohen_of_signal(s, f, method="inner")
    conv = cohen_of_signal(s, f, method="convolution")
    assert np.max(np.abs(inner.values - conv.values)) <= 1e-10 * np.max(
        np.abs(inner.values)
    )


def test_cohen_of_signal_origin_value(grid32, phi32):
    p = projector(grid32)
    f = smooth_signal(grid32, 26)
    q = cohen_of_signal(p, f)
    c = grid32.n // 2
    assert abs(q.values[c, c] - abs(f.inner(phi32)) ** 2) <= 1e-12


def test_cohen_of_signal_total_mass(grid32):
    s = qha.random_state(grid32, 2, seed=27)
    f = smooth_signal(grid32, 28)
    q = cohen_of_signal(s, f)
    assert abs(q.integral() - s.trace() * f.norm() ** 2) <= 1e-8


def test_associativity_laws(grid32):
    s = qha.random_state(grid32, 2, seed=29)
    t = qha.random_state(grid32, 2, seed=30)
    q = qha.random_state(grid32, 2, seed=31)
    b = smooth_symbol(grid32, 32)
    sigma = smooth_symbol(grid32, 33)
    # (S * (T * b)) = ((S * T) conv b)
    lhs = convolve_operators(s, convolve_function_operator(b, t).to_finite_rank())
    rhs = convolve_ps(convolve_operators(s, t), b)
    scale = np.max(np.abs(rhs.values))
    assert np.max(np.abs(lhs.values - rhs.values)) <= 1e-6 * scale
    # (S * b) * sigma = S * (b conv sigma)
    lhs2 = convolve_function_operator(sigma, convolve_function_operator(b, s).to_finite_rank())
    rhs2 = convolve_function_operator(convolve_ps(b, sigma), s)
    scale2 = np.max(np.abs(rhs2.kernel.values))
    assert np.max(np.abs(lhs2.kernel.values - rhs2.kernel.values)) <= 1e-6 * scale2
    # S * (T * Q) = (S * T) * Q, both sides operators
    lhs3 = convolve_function_operator(convolve_operators(t, q), s)
    rhs3 = convolve_function_operator(convolve_operators(s, t), q)
    scale3 = np.max(np.abs(rhs3.kernel.values))
    assert np.max(np.abs(lhs3.kernel.values - rhs3.kernel.values)) <= 1e-6 * scale3


def test_fourier_wigner_of_localization(grid32):
    # spreading function of a (*) S factorizes through the symplectic
    # transform of a
    a = smooth_symbol(grid32, 34)
    s = qha.random_state(grid32, 2, seed=35)
    for tau in (0.0, 0.3, 1.0):
        lhs = qha.fourier_wigner(convolve_function_operator(a, s), tau)
        rhs = qha.symplectic_fourier(a).values * qha.fourier_wigner(s, tau).values
        assert np.max(np.abs(lhs.values - rhs)) <= 1e-8 * np.max(np.abs(rhs))


def test_trace_of_product_as_wigner_pairing(grid32):
    # positive states: trace(TS) equals the phase-space pairing of the
    # Wigner transforms, every test tau
    t = qha.random_state(grid32, 2, seed=36)
    s = qha.random_state(grid32, 3, seed=37)
    lhs = t.compose(s).trace()
    for tau in TAUS:
        wt = qha.wigner_transform(t, tau)
        ws = qha.wigner_transform(s, tau)
        rhs = wt.pair(ws)
        assert abs(lhs - rhs) <= 1e-8 * max(1.0, abs(lhs))


def test_cohen_correlation_identity(grid32, phi32):
    # Q_T(phi)(z) = cell * sum_w W_tau(T)(w) conj(W_tau(phi)(z + w)); the
    # convolution with the reflected conjugate gives the same values
    # reflected, Q_T(phi)(-z) (see ledger note on the printed form)
    t = qha.random_state(grid32, 2, seed=38).translate(
        qha.LatticePoint(2 * grid32.dx, 3 * grid32.dw)
    )
    q = cohen_of_signal(t, phi32).values
    n = grid32.n
    half = n // 2
    flip = (-np.arange(n)) % n
    for tau in (0.0, 0.5, 0.77):
        wt = qha.wigner_transform(t, tau)
        wphi = qha.cross_wigner(phi32, phi32, tau)
        # correlation form at a few sample points
        rng = np.random.default_rng(39)
        for _ in range(6):
            i, k = rng.integers(0, n, 2)
            shifted = np.roll(wphi.values, (-(i - half), -(k - half)), axis=(0, 1))
            val = grid32.cell * np.sum(wt.values * shifted.conj())
            assert abs(q[i, k] - val) <= 1e-8 * max(1.0, np.max(np.abs(q)))
        conv = convolve_ps(
            PhaseSpaceFunction(grid32, wt.values), wphi.reflected_conjugate()
        )
        assert np.max(np.abs(conv.values - q[np.ix_(flip, flip)])) <= 1e-8 * np.max(
            np.abs(q)
        )


def test_trace_from_cohen_mass(grid32, phi32):
    t = qha.random_state(grid32, 2, seed=40)
    q = cohen_of_signal(t, phi32)
    assert abs(q.integral() - t.trace()) <= 1e-6
