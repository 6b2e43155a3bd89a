from __future__ import annotations

import numpy as np
import pytest

import qha
from qha import FiniteRankOperator, PhaseSpaceFunction
from qha.decay import (
    MAX_STFT4_N,
    gaussian_window_2d,
    moment_suprema,
    polynomial_weight,
    rapid_decay_check,
    schwartz_score,
    slope_threshold,
    stft_4d,
    stft_4d_direct,
    weighted_m1_norm,
)
from qha.gabor import GuardrailError

from conftest import smooth_symbol

S_LIST = (0.0, 1.0, 2.0, 4.0)


def step_operator(grid):
    vals = np.where(np.abs(grid.times) < 2.0, 1.0, 0.0) * np.where(
        grid.times >= 0, 1.0, -1.0
    )
    sig = qha.Signal(grid, vals.astype(complex))
    sig = qha.Signal(grid, sig.values / sig.norm())
    return FiniteRankOperator(grid, ((sig, sig),))


def test_stft_4d_matches_direct_sum():
    g = qha.make_grid(8, 8.0)
    f = smooth_symbol(g, 0)
    win = gaussian_window_2d(g)
    fast = stft_4d(f, win)
    direct = stft_4d_direct(f, win)
    assert np.max(np.abs(fast - direct)) <= 1e-10 * np.max(np.abs(direct))


def test_stft_4d_guardrail():
    g = qha.make_grid(64, 8.0)
    with pytest.raises(GuardrailError):
        stft_4d(PhaseSpaceFunction(g, np.zeros((64, 64), dtype=complex)))


def test_weight_submultiplicative_on_lattice(grid16):
    # v_s(z + w) <= 2^(s/2) v_s(z) v_s(w) over lattice pairs
    zs = np.stack(
        np.meshgrid(grid16.times, grid16.freqs, indexing="ij"), axis=-1
    ).reshape(-1, 2)
    rng = np.random.default_rng(1)
    idx = rng.integers(0, len(zs), size=(200, 2))
    for s in (0.0, 1.0, 2.0):
        for i, j in idx:
            z, w = zs[i], zs[j]
            lhs = polynomial_weight(s, np.sum((z + w) ** 2))
            rhs = polynomial_weight(s, np.sum(z**2)) * polynomial_weight(
                s, np.sum(w**2)
            )
            assert lhs <= 2 ** (s / 2) * rhs * (1 + 1e-12)


def test_weighted_norm_monotone_in_s(grid16):
    for seed in (2, 3):
        s_op = qha.random_state(grid16, 2, seed=seed)
        norms = [weighted_m1_norm(s_op, s, 0.5) for s in S_LIST]
        assert all(b >= a * (1 - 1e-12) for a, b in zip(norms, norms[1:]))


def test_weighted_norm_s0_is_unweighted(grid16):
    s_op = qha.random_state(grid16, 2, seed=4)
    w = qha.wigner_transform(s_op, 0.5)
    v4 = stft_4d(PhaseSpaceFunction(grid16, w.values))
    unweighted = grid16.cell**2 * np.sum(np.abs(v4))
    assert abs(weighted_m1_norm(s_op, 0.0, 0.5) - unweighted) <= 1e-12 * unweighted


def test_weighted_norm_gaussian_ratio_bounded(grid16):
    p = FiniteRankOperator(grid16, ((qha.gaussian(grid16), qha.gaussian(grid16)),))
    norms = [weighted_m1_norm(p, s, 0.5) for s in S_LIST]
    assert all(np.isfinite(norms))
    # Gaussian decay dominates every polynomial weight at desk scale
    assert norms[-1] / norms[0] < 50.0


def test_rough_state_grows_faster_than_gaussian(grid16):
    p = FiniteRankOperator(grid16, ((qha.gaussian(grid16), qha.gaussian(grid16)),))
    rough = step_operator(grid16)
    r_gauss = weighted_m1_norm(p, 4.0, 0.5) / weighted_m1_norm(p, 0.0, 0.5)
    r_rough = weighted_m1_norm(rough, 4.0, 0.5) / weighted_m1_norm(rough, 0.0, 0.5)
    assert r_rough > r_gauss  # comparative report, no hard threshold


def test_moment_suprema_linear(grid16):
    f = smooth_symbol(grid16, 5)
    orders = [((1, 0), (0, 0)), ((0, 1), (1, 1))]
    sup1 = moment_suprema(f, orders)
    sup2 = moment_suprema(PhaseSpaceFunction(grid16, 2.0 * f.values), orders)
    for key in sup1:
        assert abs(sup2[key] - 2.0 * sup1[key]) <= 1e-12 * sup1[key]
    with pytest.raises(ValueError):
        moment_suprema(f, [((5, 0), (0, 0))])


def test_rapid_decay_gaussian_state_plateaus():
    g16 = qha.make_grid(16, 8.0)
    g32 = qha.make_grid(32, 8.0)
    w16 = qha.cross_wigner(qha.gaussian(g16), qha.gaussian(g16), 0.5)
    w32 = qha.cross_wigner(qha.gaussian(g32), qha.gaussian(g32), 0.5)
    # orders up to total degree two per slot; at this desk scale higher
    # mixed moments of the coarse grid are not yet in the asymptotic regime
    orders = [
        ((1, 0), (0, 0)),
        ((0, 1), (0, 0)),
        ((0, 0), (1, 0)),
        ((0, 0), (0, 1)),
        ((1, 1), (0, 0)),
        ((0, 0), (1, 1)),
        ((2, 0), (0, 0)),
        ((0, 2), (0, 0)),
        ((0, 0), (0, 2)),
    ]
    rep = rapid_decay_check(
        PhaseSpaceFunction(g16, w16.values),
        orders,
        refined=PhaseSpaceFunction(g32, w32.values),
    )
    assert rep.verdict == "decaying"


def test_rapid_decay_constant_symbol_fails():
    g16 = qha.make_grid(16, 8.0)
    g32 = qha.make_grid(32, 8.0)
    one16 = PhaseSpaceFunction(g16, np.ones((16, 16), dtype=complex))
    one32 = PhaseSpaceFunction(g32, np.ones((32, 32), dtype=complex))
    # omega-direction moments of z grow with the frequency cap N/(2L)
    orders = [((0, 1), (0, 0)), ((0, 2), (0, 0))]
    rep = rapid_decay_check(one16, orders, refined=one32)
    assert rep.verdict == "not-decaying"
    assert "plateau_factor=1.5" in rep.notes[0]


def test_rapid_decay_requires_doubled_grid(grid16):
    f = smooth_symbol(grid16, 6)
    with pytest.raises(ValueError):
        rapid_decay_check(f, [((1, 0), (0, 0))], refined=f)


def test_schwartz_score_fixtures():
    g = qha.make_grid(32, 8.0)
    smooth = qha.random_state(g, 3, seed=7)
    rep = schwartz_score(smooth, S_LIST, 0.5)
    assert rep.verdict == "schwartz-consistent"
    assert rep.entries["slope"] < rep.entries["slope_threshold"]
    rough = step_operator(g)
    rep2 = schwartz_score(rough, S_LIST, 0.5)
    assert rep2.verdict == "not-schwartz-consistent"


def test_schwartz_score_tau_stable():
    g = qha.make_grid(32, 8.0)
    smooth = qha.random_state(g, 3, seed=8)
    slopes = [schwartz_score(smooth, S_LIST, tau).entries["slope"] for tau in (0.0, 0.5, 1.0)]
    spread = (max(slopes) - min(slopes)) / abs(np.mean(slopes))
    assert spread <= 0.10


def test_schwartz_report_format(grid16):
    s_op = qha.random_state(grid16, 2, seed=9)
    rep = schwartz_score(s_op, (0.0, 1.0), 0.5)
    text = rep.format_text()
    assert text.startswith("report=schwartz-score\n")
    assert "slope=" in text and "verdict=" in text
    assert f"slope_threshold={slope_threshold(grid16):.17g}" in text
    with pytest.raises(ValueError):
        schwartz_score(s_op, (0.0,), 0.5)


def test_schwartz_guardrail():
    g = qha.make_grid(64, 8.0)
    assert g.n > MAX_STFT4_N
    s_op = qha.random_state(g, 1, seed=10)
    with pytest.raises(GuardrailError):
        schwartz_score(s_op, S_LIST, 0.5)
