from __future__ import annotations

import numpy as np
import pytest

import qha
from qha import FiniteRankOperator, LatticePoint
from qha.grid import GridError
from qha.operators import as_kernel_operator, translate_kernel

from conftest import rough_signal, smooth_signal


def projector(grid):
    phi = qha.gaussian(grid)
    return FiniteRankOperator(grid, ((phi, phi),))


def test_kernel_of_projector_hermitian(grid64, phi64):
    k = projector(grid64).kernel()
    assert np.max(np.abs(k.values - np.outer(phi64.values, phi64.values.conj()))) == 0
    assert np.max(np.abs(k.values - k.values.conj().T)) <= 1e-14


def test_kernel_of_rank_zero(grid64):
    z = FiniteRankOperator(grid64, ())
    assert not z.kernel().values.any()
    assert z.trace() == 0


def test_symmetrized_pair_kernel(grid64):
    hs = qha.hermite_functions(grid64, 2)
    f, g = hs[0], hs[1]  # orthogonal
    s = FiniteRankOperator(grid64, ((f, g), (g, f)))
    k = s.kernel()
    oracle = np.outer(f.values, g.values.conj()) + np.outer(g.values, f.values.conj())
    assert np.max(np.abs(k.values - oracle)) <= 1e-14
    assert np.max(np.abs(k.values - k.values.conj().T)) <= 1e-14
    assert abs(s.trace()) <= 1e-14


def test_apply_projector_and_orthogonal(grid64, phi64):
    p = projector(grid64)
    out = p.apply(phi64)
    assert np.max(np.abs(out.values - phi64.values)) <= 1e-12
    hs = qha.hermite_functions(grid64, 2)
    s = FiniteRankOperator(grid64, ((hs[0], hs[1]),))
    assert np.max(np.abs(s.apply(hs[0]).values)) <= 1e-12  # hs[0] orthogonal to hs[1]


def test_apply_term_path_vs_kernel_path(grid32):
    terms = tuple(
        (smooth_signal(grid32, 2 * i), smooth_signal(grid32, 2 * i + 1))
        for i in range(3)
    )
    s = FiniteRankOperator(grid32, terms)
    psi = rough_signal(grid32, 99)
    direct = s.apply(psi)
    viak = as_kernel_operator(s).apply(psi)
    assert np.max(np.abs(direct.values - viak.values)) <= 1e-12 * np.max(
        np.abs(direct.values)
    )


def test_trace_formulas_agree(grid64):
    terms = tuple(
        (smooth_signal(grid64, 10 + i), smooth_signal(grid64, 20 + i)) for i in range(3)
    )
    s = FiniteRankOperator(grid64, terms)
    t1 = s.trace()
    t2 = as_kernel_operator(s).trace()
    assert abs(t1 - t2) <= 1e-12 * max(1.0, abs(t1))
    f, g = smooth_signal(grid64, 31), smooth_signal(grid64, 32)
    assert abs(FiniteRankOperator(grid64, ((f, g),)).trace() - f.inner(g)) <= 1e-13


def test_trace_cyclic(grid32):
    s = qha.random_state(grid32, 2, seed=1)
    t = qha.random_state(grid32, 2, seed=2)
    assert abs(s.compose(t).trace() - t.compose(s).trace()) <= 1e-10


def test_adjoint(grid64):
    p = projector(grid64)
    assert np.max(np.abs(p.adjoint().kernel().values - p.kernel().values)) <= 1e-14
    s = FiniteRankOperator(
        grid64, ((smooth_signal(grid64, 1), smooth_signal(grid64, 2)),)
    )
    ks = s.kernel().values
    kstar = s.adjoint().kernel().values
    assert np.max(np.abs(kstar - ks.conj().T)) <= 1e-14
    f, g = rough_signal(grid64, 3), rough_signal(grid64, 4)
    lhs = s.apply(f).inner(g)
    rhs = f.inner(s.adjoint().apply(g))
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))
    assert np.max(np.abs(s.adjoint().adjoint().kernel().values - ks)) == 0


def test_compose_projector_idempotent(grid64, phi64):
    p = projector(grid64)
    pp = p.compose(p)
    assert np.max(np.abs(pp.kernel().values - p.kernel().values)) <= 1e-12


def test_compose_kernel_path_matches_term_path(grid32):
    s = qha.random_state(grid32, 2, seed=5)
    t = qha.random_state(grid32, 2, seed=6)
    st = s.compose(t)
    # executable order: K(S o T) = dx * K_S @ K_T
    ks = s.kernel().values
    kt = t.kernel().values
    oracle = grid32.dx * (ks @ kt)
    assert np.max(np.abs(st.kernel().values - oracle)) <= 1e-10 * np.max(np.abs(oracle))


def test_compose_against_orthonormal_resolution(grid64):
    # T = sum e_j x e_j over a family spanning f: S o T agrees with S there
    hs = qha.hermite_functions(grid64, 4)
    t = FiniteRankOperator(grid64, tuple((h, h) for h in hs))
    s = qha.random_state(grid64, 2, seed=7)
    f = hs[0] + 0.3 * hs[2]
    lhs = s.compose(t).apply(f)
    rhs = s.apply(f)
    assert np.max(np.abs(lhs.values - rhs.values)) <= 1e-10 * np.max(np.abs(rhs.values))


def test_compose_associative(grid32):
    a = qha.random_state(grid32, 2, seed=8)
    b = qha.random_state(grid32, 2, seed=9)
    c = qha.random_state(grid32, 2, seed=10)
    k1 = a.compose(b.compose(c)).kernel().values
    k2 = a.compose(b).compose(c).kernel().values
    assert np.max(np.abs(k1 - k2)) <= 1e-10 * np.max(np.abs(k1))


def test_translate_identity_and_group_law(grid32):
    s = qha.random_state(grid32, 2, seed=11)
    k0 = s.translate(LatticePoint(0.0, 0.0)).kernel().values
    assert np.max(np.abs(k0 - s.kernel().values)) <= 1e-14
    z1 = LatticePoint(3 * grid32.dx, -2 * grid32.dw)
    z2 = LatticePoint(-5 * grid32.dx, 7 * grid32.dw)
    k12 = s.translate(z2).translate(z1).kernel().values
    ksum = s.translate(z1 + z2).kernel().values
    assert np.max(np.abs(k12 - ksum)) <= 1e-12 * np.max(np.abs(ksum))


def test_translate_kernel_formula(grid32):
    s = qha.random_state(grid32, 2, seed=12)
    z = LatticePoint(4 * grid32.dx, 5 * grid32.dw)
    via_terms = s.translate(z).kernel()
    via_formula = translate_kernel(s.kernel(), z)
    assert np.max(np.abs(via_terms.values - via_formula.values)) <= 1e-12 * np.max(
        np.abs(via_terms.values)
    )


def test_translate_rejects_off_lattice(grid32):
    s = qha.random_state(grid32, 1, seed=13)
    with pytest.raises(GridError):
        s.translate(LatticePoint(0.5 * grid32.dx, 0.0))


def test_parity_involution_and_kernel_reflection(grid32):
    s = qha.random_state(grid32, 2, seed=14).translate(
        LatticePoint(2 * grid32.dx, 3 * grid32.dw)
    )
    twice = s.parity_conjugate().parity_conjugate()
    assert np.max(np.abs(twice.kernel().values - s.kernel().values)) == 0
    n = grid32.n
    flip = (-np.arange(n)) % n
    expect = s.kernel().values[np.ix_(flip, flip)]
    got = s.parity_conjugate().kernel().values
    assert np.max(np.abs(got - expect)) <= 1e-14
    p = projector(grid32)  # even window: parity-invariant
    assert np.max(np.abs(p.parity_conjugate().kernel().values - p.kernel().values)) <= 1e-12


def test_is_positive(grid32):
    assert qha.is_positive(projector(grid32)).positive
    hs = qha.hermite_functions(grid32, 2)
    bad = FiniteRankOperator(grid32, ((hs[0], hs[1]),))
    rep = qha.is_positive(bad)
    assert not rep.positive
    assert rep.hermitian_defect > rep.tol
    mix = qha.random_state(grid32, 4, seed=15)
    rep = qha.is_positive(mix)
    assert rep.positive
    # eigenvalue oracle: all eigenvalues of the weighted kernel >= -tol
    a = mix.kernel().values * grid32.dx
    eigs = np.linalg.eigvalsh(0.5 * (a + a.conj().T))
    assert eigs.min() >= -rep.tol


def test_random_state_contract(grid32):
    s1 = qha.random_state(grid32, 2, seed=16)
    s2 = qha.random_state(grid32, 2, seed=16)
    assert s1.rank == 2
    for (f1, g1), (f2, g2) in zip(s1.terms, s2.terms):
        assert np.array_equal(f1.values, f2.values)
        assert np.array_equal(g1.values, g2.values)
    assert abs(s1.trace() - 1.0) <= 1e-12
    assert qha.is_positive(s1).positive
    with pytest.raises(ValueError):
        qha.random_state(grid32, grid32.n + 1, seed=0)


def test_trace_norm_embedding_bound(grid32):
    for seed in range(3):
        terms = tuple(
            (smooth_signal(grid32, 50 + seed * 10 + i), smooth_signal(grid32, 60 + seed * 10 + i))
            for i in range(2)
        )
        s = FiniteRankOperator(grid32, terms)
        bound = sum(f.norm() * g.norm() for f, g in terms)
        assert abs(s.trace()) <= bound + 1e-12


def test_singular_values_invariant_under_isometries(grid32):
    s = qha.random_state(grid32, 3, seed=17)
    a = s.kernel().values * grid32.dx
    sv = np.linalg.svd(a, compute_uv=False)
    z = LatticePoint(3 * grid32.dx, -4 * grid32.dw)
    for other in (s.translate(z), s.parity_conjugate()):
        b = other.kernel().values * grid32.dx
        sv2 = np.linalg.svd(b, compute_uv=False)
        assert np.max(np.abs(sv - sv2)) <= 1e-10 * sv[0]


def test_svd_truncation_roundtrip(grid32):
    s = qha.random_state(grid32, 3, seed=18)
    op = as_kernel_operator(s)
    back = op.to_finite_rank(svd_tol=1e-12)
    assert back.rank <= grid32.n
    assert np.max(np.abs(back.kernel().values - op.kernel.values)) <= 1e-10 * np.max(
        np.abs(op.kernel.values)
    )
