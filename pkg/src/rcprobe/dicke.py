"""Large-N (Dicke) thermodynamics by Laplace's method.

Integrating out the mode with a coherent-state resolution leaves
Z ~ int dz e^{N Phi(z)} with the intensive free-energy functional

    Phi(z) = -beta*omega*z^2 + ln[2 cosh( (beta/2) sqrt(eps^2 + 16 gbar^2 z^2) )]

where gbar = sqrt(N) g / 2 is the intensive coupling.  With
mu = eps*omega/(4 gbar^2), the superradiant phase exists for mu < 1 below

    Tc = eps / (2 arctanh(mu)),

where the order parameter eta in [1, 1/mu] solves eta*mu = tanh(beta*eps*eta/2)
and the saddle sits at z0 = eps*sqrt(eta^2 - 1)/(4 gbar).  The per-spin SNR is

    normal        beta^2 / (2 + 2 cosh(beta*eps))       (weak-coupling form)
    superradiant  omega^2 / (16 gbar^4 - eps^2 omega^2)  (temperature-independent)
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .baseline import weak_snr
from .errors import NumericalDomainError
from .thermal import SnrPoint, ThermalObservables

NORMAL = "normal"
SUPERRADIANT = "superradiant"


@dataclass(frozen=True)
class DickeParams:
    epsilon: float
    omega: float
    gbar: float
    N: int = 1

    def __post_init__(self):
        if min(self.epsilon, self.omega, self.gbar) <= 0 or self.N < 1:
            raise NumericalDomainError("epsilon, omega, gbar must be positive; N >= 1")

    @property
    def mu(self):
        return self.epsilon * self.omega / (4.0 * self.gbar**2)


@dataclass(frozen=True)
class DickeSolution:
    phase: str
    Tc: float  # inf when mu >= 1 never reached; 0 disallowed
    eta: float  # 1 in the normal phase
    z0: float
    lnZ: float
    snr_per_N: float


def critical_temperature(p: DickeParams):
    """Tc of the normal/superradiant transition; None when mu >= 1."""
    if p.mu >= 1.0:
        return None
    return p.epsilon / (2.0 * math.atanh(p.mu))


def solve_eta(p: DickeParams, beta):
    """Order parameter eta in [1, 1/mu] from eta*mu = tanh(beta*eps*eta/2)."""
    mu = p.mu
    tc = critical_temperature(p)
    # tolerate rounding of beta*tc right at the boundary (eta -> 1 there)
    if tc is None or beta * tc < 1.0 - 1e-9:
        raise NumericalDomainError("solve_eta called in the normal phase")

    def f(eta):
        return eta * mu - math.tanh(0.5 * beta * p.epsilon * eta)

    hi = 1.0 / mu
    f1 = f(1.0)
    if f1 >= 0.0:  # at or within root tolerance of Tc
        return 1.0
    return brentq(f, 1.0, hi, xtol=1e-14, rtol=8.9e-16)


def phi(p: DickeParams, beta, z):
    r = np.sqrt(p.epsilon**2 + 16.0 * p.gbar**2 * np.asarray(z) ** 2)
    y = 0.5 * beta * r
    # ln 2cosh(y), overflow-free
    return -beta * p.omega * np.asarray(z) ** 2 + y + np.log1p(np.exp(-2.0 * y))


def _phi_dd(p: DickeParams, beta, z0):
    h = 1e-6 * max(1.0, abs(z0))
    return (phi(p, beta, z0 + h) - 2.0 * phi(p, beta, z0) + phi(p, beta, z0 - h)) / h**2


def _phase(p: DickeParams, beta):
    tc = critical_temperature(p)
    if tc is None or 1.0 / beta >= tc:
        return NORMAL
    return SUPERRADIANT


def laplace_partition(p: DickeParams, beta):
    """(lnZ, z0): saddle-point lnZ including the Gaussian prefactor."""
    if beta <= 0:
        raise NumericalDomainError(f"beta must be positive, got {beta}")
    if _phase(p, beta) == NORMAL:
        eta, z0 = 1.0, 0.0
    else:
        eta = solve_eta(p, beta)
        z0 = p.epsilon * math.sqrt(max(eta * eta - 1.0, 0.0)) / (4.0 * p.gbar)
    dd = _phi_dd(p, beta, z0)
    if abs(dd) < 1e-14:
        raise NumericalDomainError("flat saddle direction: exactly at the Tc boundary")
    lnz = p.N * float(phi(p, beta, z0)) + 0.5 * math.log(2.0 / (beta * p.omega * abs(dd)))
    return lnz, z0


def dicke_observables(p: DickeParams, beta) -> ThermalObservables:
    """Phase-resolved <Jz> and <Jz^2> in the thermodynamic limit.

    The moments are continuous across Tc; lnZ is reported as nan right at
    the boundary where the saddle goes flat and the Gaussian prefactor of
    the Laplace approximation diverges.
    """
    if beta <= 0:
        raise NumericalDomainError(f"beta must be positive, got {beta}")
    N = p.N
    if _phase(p, beta) == NORMAL:
        t = math.tanh(0.5 * beta * p.epsilon)
        m1 = -0.5 * N * t
        m2 = 0.25 * N + 0.25 * N * (N - 1) * t * t
    else:
        eta = solve_eta(p, beta)
        t = math.tanh(0.5 * beta * p.epsilon * eta) / eta
        m1 = -0.5 * N * t
        m2 = 0.25 * N + 0.25 * N * (N - 1) * t * t
    try:
        lnz, _ = laplace_partition(p, beta)
    except NumericalDomainError:
        lnz = math.nan
    return ThermalObservables(
        beta=beta, lnZ=lnz, mean_Jz=m1, mean_Jz2=m2,
        var_Jz=max(m2 - m1 * m1, 0.0), mean_Jz2_kubo=m2,
    )


def dicke_snr(p: DickeParams, beta) -> SnrPoint:
    """Per-spin SNR by the two-branch closed form; delta = (S - S_weak)/N."""
    sw = weak_snr(p.N, p.epsilon, beta).snr
    if _phase(p, beta) == NORMAL:
        s = p.N * weak_snr(1, p.epsilon, beta).snr
    else:
        den = 16.0 * p.gbar**4 - p.epsilon**2 * p.omega**2
        if den <= 0:
            raise NumericalDomainError("superradiant branch requires 16 gbar^4 > eps^2 omega^2")
        s = p.N * p.omega**2 / den
    return SnrPoint(beta=beta, snr=s, snr_weak=sw,
                    delta_snr=(s - sw) / p.N, convention="per_spin")


def dicke_solution(p: DickeParams, beta) -> DickeSolution:
    """Bundle phase, order parameter, saddle, lnZ and per-spin SNR."""
    phase = _phase(p, beta)
    tc = critical_temperature(p)
    eta = 1.0 if phase == NORMAL else solve_eta(p, beta)
    lnz, z0 = laplace_partition(p, beta)
    s = dicke_snr(p, beta)
    return DickeSolution(
        phase=phase,
        Tc=math.inf if tc is None else tc,
        eta=eta,
        z0=z0,
        lnZ=lnz,
        snr_per_N=s.snr / p.N,
    )


def hp_excitations(p: DickeParams):
    """Holstein-Primakoff/Bogoliubov excitation energies of both phases.

    Returns ((em_n, ep_n), (em_s, ep_s)); a negative normal-branch (em)^2
    (instability beyond the T=0 critical coupling) is reported as nan.
    """
    e2, w2 = p.epsilon**2, p.omega**2
    disc_n = math.sqrt((e2 - w2) ** 2 + 16.0 * p.gbar**2 * p.epsilon * p.omega)
    em2 = 0.5 * (e2 + w2 - disc_n)
    ep2 = 0.5 * (e2 + w2 + disc_n)
    normal = (math.sqrt(em2) if em2 >= 0 else math.nan, math.sqrt(ep2))
    if p.mu < 1.0:
        ee = e2 / p.mu**2
        disc_s = math.sqrt((ee - w2) ** 2 + 4.0 * e2 * w2)
        sm2 = 0.5 * (ee + w2 - disc_s)
        sp2 = 0.5 * (ee + w2 + disc_s)
        sup = (math.sqrt(max(sm2, 0.0)), math.sqrt(sp2))
    else:
        sup = (math.nan, math.nan)
    return normal, sup
