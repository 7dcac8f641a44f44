import math

import numpy as np
import pytest

from rcprobe.baseline import weak_snr
from rcprobe.errors import ConvergenceError, NumericalDomainError
from rcprobe.operators import OperatorMatrix, ProbeParams, build_mapped_hamiltonian
from rcprobe.thermal import (
    converge_nmax,
    eigendecompose,
    reduced_probe_state,
    snr_exact,
    thermal_observables,
)


def test_eigendecompose_trivial():
    es = eigendecompose(OperatorMatrix(np.diag([3.0, 1.0, 2.0]), "test"))
    assert np.allclose(es.eigenvalues, [1, 2, 3])
    es2 = eigendecompose(OperatorMatrix(np.array([[0.0, 1.0], [1.0, 0.0]]), "test"))
    assert np.allclose(es2.eigenvalues, [-1, 1])


def test_eigendecompose_properties():
    rng = np.random.default_rng(7)
    A = rng.normal(size=(30, 30))
    A = A + A.T
    es = eigendecompose(OperatorMatrix(A, "test"))
    V = es.eigenvectors
    assert np.max(np.abs(V.T @ V - np.eye(30))) < 1e-10
    D = V.T @ A @ V
    assert np.max(np.abs(D - np.diag(es.eigenvalues))) < 1e-8 * np.abs(A).max()
    # deterministic sign: first significant component positive
    for k in range(30):
        col = V[:, k]
        nz = np.flatnonzero(np.abs(col) > 1e-12)
        assert col[nz[0]] > 0


def test_eigendecompose_polaron_oracle():
    p = ProbeParams(N=1, epsilon=0.0, omega=1.0, g=0.5)
    H = build_mapped_hamiltonian(p, 0.5, 60)
    es = eigendecompose(H)
    assert abs(es.eigenvalues[0] + p.g**2 / (4 * p.omega)) < 1e-8


@pytest.mark.parametrize("N", [1, 2, 3])
def test_g_zero_matches_weak(N):
    p = ProbeParams(N=N, epsilon=0.8, omega=1.0, g=0.0)
    beta = 3.0
    obs = thermal_observables(p, beta, n_max=16)
    ref = weak_snr(N, p.epsilon, beta)
    assert obs.mean_Jz == pytest.approx(ref.mean_Jz, abs=1e-12)
    assert obs.var_Jz == pytest.approx(ref.var_Jz, rel=1e-10)


def test_eps_zero_symmetry():
    p = ProbeParams(N=2, epsilon=0.0, omega=1.0, g=0.6)
    obs = thermal_observables(p, 5.0, n_max=40)
    assert abs(obs.mean_Jz) < 1e-10


def test_sector_sum_consistency_at_g0():
    # full sector-weighted Z equals (2cosh(beta eps/2))^N * Z_boson
    N, beta, eps, n_max = 3, 2.0, 0.7, 30
    p = ProbeParams(N=N, epsilon=eps, omega=1.0, g=0.0)
    obs = thermal_observables(p, beta, n_max=n_max)
    z_boson = np.sum(np.exp(-beta * np.arange(n_max + 1.0)))
    expected = N * math.log(2 * math.cosh(beta * eps / 2)) + math.log(z_boson)
    assert obs.lnZ == pytest.approx(expected, rel=1e-12)


def test_hellmann_feynman_grid():
    # -(1/beta) d lnZ/d eps == mean_Jz across the parameter grid
    h = 1e-5
    for N in (1, 2, 3):
        for g in (0.1, 0.4):
            for beta in (1.0, 10.0, 40.0):
                p = ProbeParams(N=N, epsilon=1.0, omega=1.0, g=g)
                up = thermal_observables(p.replace_epsilon(1.0 + h), beta, 32).lnZ
                dn = thermal_observables(p.replace_epsilon(1.0 - h), beta, 32).lnZ
                fd = -(up - dn) / (2 * h * beta)
                obs = thermal_observables(p, beta, 32)
                assert fd == pytest.approx(obs.mean_Jz, rel=1e-6), (N, g, beta)


def test_kubo_moment_is_lnz_curvature():
    # the susceptibility-channel second moment equals (1/(Z beta^2)) d2Z/deps2
    h = 1e-4
    for N, g, beta in ((1, 0.4, 8.0), (2, 0.3, 5.0)):
        p = ProbeParams(N=N, epsilon=1.0, omega=1.0, g=g)
        lnz = [
            thermal_observables(p.replace_epsilon(1.0 + k * h), beta, 40).lnZ
            for k in (-1, 0, 1)
        ]
        # d2Z/(Z deps2) = d2 lnZ + (d lnZ)^2
        d1 = (lnz[2] - lnz[0]) / (2 * h)
        d2 = (lnz[2] - 2 * lnz[1] + lnz[0]) / h**2
        expect = (d2 + d1 * d1) / beta**2
        obs = thermal_observables(p, beta, 40)
        assert obs.mean_Jz2_kubo == pytest.approx(expect, rel=1e-5)


def test_channels_coincide_at_g0():
    p = ProbeParams(N=2, epsilon=0.9, omega=1.0, g=0.0)
    obs = thermal_observables(p, 4.0, n_max=20)
    assert obs.mean_Jz2 == pytest.approx(obs.mean_Jz2_kubo, rel=1e-10)


def test_channels_differ_at_strong_g():
    p = ProbeParams(N=2, epsilon=1.0, omega=1.0, g=0.4)
    obs = thermal_observables(p, 40.0, n_max=48)
    assert abs(obs.mean_Jz2 - obs.mean_Jz2_kubo) > 1e-3 * abs(obs.mean_Jz2)


def test_snr_continuity_in_g():
    p = ProbeParams(N=1, epsilon=1.0, omega=1.0, g=1e-4)
    pt = snr_exact(p, 5.0, n_max=24)
    assert pt.snr / pt.snr_weak == pytest.approx(1.0, abs=1e-4)


def test_truncation_cauchy_convergence():
    p = ProbeParams(N=1, epsilon=1.0, omega=1.0, g=0.5)
    beta = 10.0
    vals = [snr_exact(p, beta, n_max=n).snr for n in (16, 32, 64)]
    assert abs(vals[2] - vals[1]) < abs(vals[1] - vals[0]) + 1e-12
    assert vals[2] == pytest.approx(vals[1], rel=1e-6)


def test_converge_nmax_behaviour():
    p0 = ProbeParams(N=1, epsilon=1.0, omega=1.0, g=0.0)
    assert converge_nmax(p0, 5.0) == 16
    # larger coupling needs a bigger cutoff (monotone)
    ns = [
        converge_nmax(ProbeParams(N=1, epsilon=1.0, omega=1.0, g=g), 5.0)
        for g in (0.1, 0.5, 1.0)
    ]
    assert ns[0] <= ns[1] <= ns[2]
    # higher temperature needs a bigger cutoff
    ms = [
        converge_nmax(ProbeParams(N=1, epsilon=1.0, omega=1.0, g=0.3), b)
        for b in (10.0, 1.0, 0.1)
    ]
    assert ms[0] <= ms[1] <= ms[2]


def test_converge_nmax_cap():
    p = ProbeParams(N=1, epsilon=1.0, omega=1.0, g=0.5)
    with pytest.raises(ConvergenceError):
        converge_nmax(p, 1.0, cap=32, rel_tol=1e-30)


def test_reduced_state_g0_gibbs():
    p = ProbeParams(N=2, epsilon=0.8, omega=1.0, g=1e-9)
    beta = 3.0
    rho, labels = reduced_probe_state(p, beta, n_max=20)
    assert rho.shape == (4, 4)
    # coupled-basis Gibbs reference: block-diag of e^{-beta eps m}
    ms = np.concatenate([
        np.arange(-J, J + 1) for J, _ in ((1.0, 1), (0.0, 1))
    ])
    ref = np.exp(-beta * p.epsilon * ms)
    ref /= ref.sum()
    assert np.allclose(rho, np.diag(ref), atol=1e-8)


def test_reduced_state_properties():
    p = ProbeParams(N=2, epsilon=1.0, omega=1.0, g=0.8)
    rho, labels = reduced_probe_state(p, 4.0, n_max=40)
    assert np.trace(rho) == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(rho, rho.T)
    assert np.linalg.eigvalsh(rho).min() > -1e-12
    assert labels == [(1.0, 0), (0.0, 0)]


def test_reduced_state_non_gibbsian_at_strong_g():
    # a Gibbs state of eps*Jz has geometric populations in the J=1 block;
    # strong coupling breaks p0^2 == p(-1)*p(+1)
    p = ProbeParams(N=2, epsilon=1.0, omega=1.0, g=0.8)
    rho, _ = reduced_probe_state(p, 4.0, n_max=40)
    pops = np.diag(rho)[:3]
    assert abs(pops[1] ** 2 - pops[0] * pops[2]) > 1e-4 * pops[1] ** 2


def test_degenerate_variance_guard():
    p = ProbeParams(N=1, epsilon=1.0, omega=1.0, g=0.0)
    with pytest.raises(NumericalDomainError):
        snr_exact(p, 2000.0, n_max=8)


def test_maximal_sector_flag():
    p = ProbeParams(N=3, epsilon=1.0, omega=1.0, g=0.3)
    full = thermal_observables(p, 2.0, 24, sector="full")
    maximal = thermal_observables(p, 2.0, 24, sector="maximal")
    assert full.lnZ > maximal.lnZ  # sub-maximal sectors add weight
