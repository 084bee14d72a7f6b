from __future__ import annotations

import numpy as np
import pytest

from photon_blockade.dynamics import g2_zero
from photon_blockade.hilbert import DensityMatrix, fock_ladder, operators_for
from photon_blockade.models import (
    JcParams,
    TpbParams,
    build_jc_dual,
    build_tpb,
    interaction_term,
    observables_of,
    solve,
)


def test_tpb_three_body_element():
    H, _ = build_tpb(TpbParams(J=0.37, delta=0.2, omega=0.1))
    sp = H.space
    assert H.matrix[sp.index(1, 1, 0), sp.index(0, 0, 1)] == pytest.approx(0.37)
    assert H.matrix[sp.index(0, 0, 1), sp.index(0, 0, 0)] == pytest.approx(0.1)
    assert H.matrix[sp.index(0, 1, 1), sp.index(0, 1, 1)] == pytest.approx(0.4)
    assert H.is_hermitian()


def test_interaction_blocks_two_photon_states():
    V = interaction_term(TpbParams(J=1.0))
    sp = V.space
    out = V.matrix @ sp.basis(1, 1, 1)
    for q1 in (0, 1):
        for q2 in (0, 1):
            assert out[sp.index(2, q1, q2)] == 0


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_interaction_doublet_splitting(n):
    J = 0.7
    V = interaction_term(TpbParams(J=J))
    sp = V.space
    idx = [sp.index(n - 1, 0, 1), sp.index(n, 1, 0)]
    block = V.matrix[np.ix_(idx, idx)]
    np.testing.assert_allclose(np.linalg.eigvalsh(block), [-J * np.sqrt(n), J * np.sqrt(n)], atol=1e-14)


def test_interaction_conserved_charges():
    op = interaction_term(TpbParams(J=1.3))
    V = op.matrix
    a, (s1, s2) = operators_for(op.space)
    n = (a.dag() @ a).matrix
    q1 = (s1.dag() @ s1).matrix
    q2 = (s2.dag() @ s2).matrix
    for charge in (n - q1, n + q2):
        assert np.max(np.abs(V @ charge - charge @ V)) < 1e-12


def test_jc_elements_and_splittings():
    G = 0.8
    H, chans = build_jc_dual(JcParams(G=G, omega_c=0.0, omega_q=0.0))
    sp = H.space
    assert H.matrix[sp.index(1, 0), sp.index(0, 1)] == pytest.approx(G)
    assert len(chans) == 2
    one = [sp.index(1, 0), sp.index(0, 1)]
    two = [sp.index(2, 0), sp.index(1, 1)]
    e1 = np.linalg.eigvalsh(H.matrix[np.ix_(one, one)])
    e2 = np.linalg.eigvalsh(H.matrix[np.ix_(two, two)])
    assert e1[1] - e1[0] == pytest.approx(2 * G)
    assert e2[1] - e2[0] == pytest.approx(2 * np.sqrt(2) * G)


def test_jc_undriven_is_dark():
    sol = solve(JcParams(omega_c=0.0, omega_q=0.0))
    assert sol.obs.N == pytest.approx(0.0, abs=1e-14)
    assert not sol.obs.g2_defined


def test_observables_fock_states():
    a = fock_ladder(4)
    for n, (N, pair, g2) in {2: (2, 1, 0.5), 1: (1, 0, 0)}.items():
        rho = DensityMatrix.from_ket(a.space, np.eye(5)[n])
        o = observables_of(rho, a, 2.5)
        assert (o.N, o.Npair, o.g2_0) == pytest.approx((N, pair, g2))
        assert o.S == 2.5 * o.N


def test_observables_match_g2_zero():
    sol = solve(TpbParams())
    assert sol.obs.g2_0 == pytest.approx(g2_zero(sol.rho, sol.a), rel=1e-12)
    assert sol.obs.S == sol.obs.N * 1.0


def test_g2_even_in_detuning():
    for d in (0.1, 0.35, 0.8):
        plus = solve(TpbParams(delta=d)).obs.g2_0
        minus = solve(TpbParams(delta=-d)).obs.g2_0
        assert plus == pytest.approx(minus, rel=1e-8)


def test_param_validation():
    with pytest.raises(ValueError):
        TpbParams(kappa=0.0)
    with pytest.raises(ValueError):
        TpbParams(J=-1.0)
    with pytest.raises(ValueError):
        TpbParams(n_max=1)
    with pytest.raises(ValueError):
        JcParams(gamma_q=-0.1)


def test_jc_ratio_helpers():
    p = JcParams.with_ratio(5.0, 0.002, G=0.1)
    assert p.omega_q == pytest.approx(0.01)
    assert p.ratio == pytest.approx(5.0)
    assert JcParams(omega_c=0.0).ratio == float("inf")


@pytest.mark.parametrize("p", [TpbParams(), TpbParams(J=0.1, omega=0.01, gamma=0.01), TpbParams(J=0.01)])
def test_truncation_convergence(p):
    lo = solve(p.with_(n_max=4)).obs
    hi = solve(p.with_(n_max=6)).obs
    assert lo.N == pytest.approx(hi.N, rel=1e-6)
    assert lo.g2_0 == pytest.approx(hi.g2_0, rel=1e-6)
