"""Exact-diagonalization thermodynamics of the probe + extracted-mode system.

The 2^N product space is decomposed into total-spin sectors J with known
multiplicities; each sector Hamiltonian (2J+1)(n_max+1)-dimensional is
diagonalized densely and partition sums are combined across sectors with
multiplicity weights.  All Boltzmann factors are taken relative to the
global ground energy so that beta*omega ~ 10^3 neither under- nor
overflows.

Two noise channels are provided for the SNR denominator:

  "projective"      Var Jz of the reduced state, i.e. the eigenbasis trace
                    of Jz^2 minus <Jz>^2 — the statistics of repeated
                    projective Jz measurements.
  "susceptibility"  the generalized (Kubo/Duhamel) second moment
                    (1/(Z beta^2)) d^2 Z / d eps^2, evaluated spectrally.
                    For [H, Jz] != 0 this differs from the projective
                    second moment; it is the curvature of lnZ and sets the
                    thermal-response noise floor.
  "auto"            projective for N=1, susceptibility for N >= 2.

The "auto" split reproduces the published low-temperature scaling laws:
the single-spin SNR saturates (T^0) with the projective denominator while
the N >= 2 SNR grows as 1/T with the susceptibility denominator.
"""

from dataclasses import dataclass, replace

import numpy as np
from scipy.special import logsumexp

from .baseline import weak_snr
from .errors import ConvergenceError, NumericalDomainError
from .operators import (
    OperatorMatrix,
    ProbeParams,
    build_mapped_hamiltonian,
    composite_jz,
    sector_multiplicities,
)

NOISE_CHANNELS = ("projective", "susceptibility", "auto")


@dataclass(frozen=True)
class EigenSystem:
    """Ascending spectrum and orthonormal eigenvectors of a symmetric matrix."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    basis: str


@dataclass(frozen=True)
class ThermalObservables:
    beta: float
    lnZ: float
    mean_Jz: float
    mean_Jz2: float
    var_Jz: float
    # generalized (Kubo) second moment; equals mean_Jz2 only when [H, Jz] = 0
    mean_Jz2_kubo: float = 0.0

    @property
    def var_Jz_kubo(self):
        return max(self.mean_Jz2_kubo - self.mean_Jz**2, 0.0)


@dataclass(frozen=True)
class SnrPoint:
    beta: float
    snr: float
    snr_weak: float
    delta_snr: float
    convention: str = "difference"  # or "per_spin"


def eigendecompose(H: OperatorMatrix) -> EigenSystem:
    """Full symmetric eigendecomposition with a deterministic sign convention.

    Each eigenvector is flipped so its first component of magnitude above
    1e-12 is positive.
    """
    A = H.entries
    if not np.allclose(A, A.T, atol=0.0):
        raise NumericalDomainError("eigendecompose requires an exactly symmetric matrix")
    w, V = np.linalg.eigh(A)
    for k in range(V.shape[1]):
        col = V[:, k]
        nz = np.flatnonzero(np.abs(col) > 1e-12)
        if nz.size and col[nz[0]] < 0:
            V[:, k] = -col
    return EigenSystem(eigenvalues=w, eigenvectors=V, basis=H.basis)


def _phi(x):
    # (1 - e^{-x}) / x, stable at x -> 0
    x = np.asarray(x, dtype=float)
    out = np.ones_like(x)
    small = np.abs(x) < 1e-8
    xs = np.where(small, 1.0, x)
    out = np.where(small, 1.0 - 0.5 * x, -np.expm1(-xs) / xs)
    return out


def _sector_data(p: ProbeParams, n_max, sector="full", dim_cap=20000):
    """Eigen-data per total-spin sector: (mult, E, diag Jz, diag Jz^2, M)."""
    dec = sector_multiplicities(p.N)
    sectors = dec.sectors if sector == "full" else dec.sectors[:1]
    out = []
    for J, mult in sectors:
        H = build_mapped_hamiltonian(p, J, n_max, dim_cap=dim_cap)
        es = eigendecompose(H)
        jz = np.diag(composite_jz(J, n_max).entries)
        V = es.eigenvectors
        # M = V^T Jz V; Jz diagonal, so scale rows
        M = V.T @ (jz[:, None] * V)
        d1 = np.diag(M).copy()
        d2 = (V * V).T @ jz**2
        out.append((mult, es.eigenvalues, d1, d2, M))
    return out


def _combine(data, beta):
    e0 = min(E[0] for _, E, _, _, _ in data)
    logw = []
    num1 = num2 = numk = zt = 0.0
    for mult, E, d1, d2, M in data:
        w = mult * np.exp(-beta * (E - e0))
        zt += w.sum()
        num1 += w @ d1
        num2 += w @ d2
        logw.append(np.log(mult) - beta * E)
        # Kubo second moment: sum_ij |M_ij|^2 * weight(E_i, E_j)
        Ei = E[:, None]
        Ej = E[None, :]
        lo = np.minimum(Ei, Ej)
        kw = np.exp(-beta * (lo - e0)) * _phi(beta * np.abs(Ej - Ei))
        numk += mult * np.sum(M * M * kw)
    lnz = logsumexp(np.concatenate(logw))
    return lnz, num1 / zt, num2 / zt, numk / zt


def thermal_observables(p: ProbeParams, beta, n_max, sector="full", dim_cap=20000):
    """Partition function and Jz moments of the composite Gibbs state."""
    if beta <= 0:
        raise NumericalDomainError(f"beta must be positive, got {beta}")
    data = _sector_data(p, n_max, sector, dim_cap)
    lnz, m1, m2, mk = _combine(data, beta)
    return ThermalObservables(
        beta=beta,
        lnZ=lnz,
        mean_Jz=m1,
        mean_Jz2=m2,
        var_Jz=max(m2 - m1 * m1, 0.0),
        mean_Jz2_kubo=mk,
    )


def _mean_jz(p, beta, n_max, sector, dim_cap=20000):
    data = _sector_data(p, n_max, sector, dim_cap)
    return _combine(data, beta)[1]


def djz_deps(p: ProbeParams, beta, n_max, fd_step=None, sector="full"):
    """d<Jz>/d eps by Richardson-extrapolated central differences."""
    h = fd_step if fd_step is not None else 1e-4 * p.omega
    if h <= 0:
        raise NumericalDomainError(f"fd_step must be positive, got {h}")

    def cd(step):
        up = _mean_jz(p.replace_epsilon(p.epsilon + step), beta, n_max, sector)
        dn = _mean_jz(p.replace_epsilon(p.epsilon - step), beta, n_max, sector)
        return (up - dn) / (2.0 * step)

    d_h = cd(h)
    d_h2 = cd(0.5 * h)
    return (4.0 * d_h2 - d_h) / 3.0


def snr_exact(
    p: ProbeParams,
    beta,
    fd_step=None,
    n_max=128,
    noise="auto",
    sector="full",
    convention="difference",
):
    """Exact SNR S = |d<Jz>/d eps|^2 / noise at one parameter point.

    `noise` selects the variance channel (see module docstring); `convention`
    picks delta_snr = snr - snr_weak ("difference") or the same divided by N
    ("per_spin").
    """
    if noise not in NOISE_CHANNELS:
        raise NumericalDomainError(f"unknown noise channel {noise!r}")
    if noise == "auto":
        noise = "projective" if p.N == 1 else "susceptibility"
    obs = thermal_observables(p, beta, n_max, sector)
    var = obs.var_Jz if noise == "projective" else obs.var_Jz_kubo
    if var < 1e-14 * p.N**2:
        raise NumericalDomainError(
            f"variance {var:.3e} degenerate (T -> 0 with a pure Jz eigenstate)"
        )
    slope = djz_deps(p, beta, n_max, fd_step, sector)
    snr = slope * slope / var
    sw = weak_snr(p.N, p.epsilon, beta).snr
    delta = snr - sw
    if convention == "per_spin":
        delta /= p.N
    elif convention != "difference":
        raise NumericalDomainError(f"unknown delta-snr convention {convention!r}")
    return SnrPoint(beta=beta, snr=snr, snr_weak=sw, delta_snr=delta, convention=convention)


def converge_nmax(
    p: ProbeParams,
    beta,
    rel_tol=1e-6,
    lnz_tol=1e-8,
    start=16,
    cap=4096,
    noise="auto",
    sector="full",
):
    """Smallest n_max in a doubling sequence with stable (lnZ, <Jz>, snr)."""
    prev = None
    n = start
    while n <= cap:
        obs = thermal_observables(p, beta, n, sector, dim_cap=10**9)
        pt = snr_exact(p, beta, n_max=n, noise=noise, sector=sector)
        cur = (obs.lnZ, obs.mean_Jz, pt.snr)
        if prev is not None:
            dz = abs(cur[0] - prev[0]) / max(abs(cur[0]), 1.0)
            dm = abs(cur[1] - prev[1]) / max(abs(cur[1]), 1e-30)
            ds = abs(cur[2] - prev[2]) / max(abs(cur[2]), 1e-300)
            if dz < lnz_tol and dm < rel_tol and ds < rel_tol:
                return n // 2 if n > start else start
        prev = cur
        n *= 2
    raise ConvergenceError(
        f"n_max cap {cap} reached without convergence at beta={beta}, g={p.g}"
    )


def reduced_probe_state(p: ProbeParams, beta, n_max, sector="full"):
    """Reduced probe density matrix, block-diagonal over total-spin sectors.

    Returns (rho, labels): rho is the 2^N x 2^N (sector="full") matrix in
    the direct-sum coupled basis, with each J block repeated per its
    multiplicity; labels lists (J, copy_index) per block.  Trace 1,
    symmetric, positive semidefinite.
    """
    dec = sector_multiplicities(p.N)
    sectors = dec.sectors if sector == "full" else dec.sectors[:1]
    blocks = []
    e0 = None
    raw = []
    for J, mult in sectors:
        H = build_mapped_hamiltonian(p, J, n_max)
        es = eigendecompose(H)
        raw.append((J, mult, es))
        lo = es.eigenvalues[0]
        e0 = lo if e0 is None else min(e0, lo)
    total = 0.0
    for J, mult, es in raw:
        ds = int(round(2 * J + 1))
        nb = n_max + 1
        w = np.exp(-beta * (es.eigenvalues - e0))
        # partial trace over the Fock index (fast axis)
        V = es.eigenvectors.reshape(ds, nb, -1)
        rho = np.einsum("ank,bnk,k->ab", V, V, w)
        blocks.append((J, mult, rho))
        total += mult * np.trace(rho)
    dim = sum(int(round(2 * J + 1)) * m for J, m, _ in blocks)
    out = np.zeros((dim, dim))
    labels = []
    pos = 0
    for J, mult, rho in blocks:
        ds = rho.shape[0]
        for c in range(mult):
            out[pos : pos + ds, pos : pos + ds] = rho / total
            labels.append((J, c))
            pos += ds
    return out, labels
