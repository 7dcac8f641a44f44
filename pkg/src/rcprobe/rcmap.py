"""Spectral densities, the Cauchy transform, and the mode-extraction mapping.

The residual bath seen by the extracted mode is Ohmic with an exponential
cutoff, J1(w) = gamma * w * exp(-w/omega_c).  In the limit omega_c -> inf
the original probe-bath spectral density implied by the mapping is the
Lorentzian

    J0(w) = Gamma * varsigma * w / ((w^2 - omega0^2)^2 + Gamma^2 w^2),

with peak width Gamma = gamma * omega0 and overall strength
varsigma = 4 * omega0 * g^2.

The two Hamiltonians are dynamically equivalent when

    -1/2 W0(z) = 2 g^2 omega0 / (z^2 - omega0^2 + omega0 * [W1(z) - W1(0)])

where Wn is the Cauchy transform of Jn (odd-extended).  The subtraction of
W1(0) is the static frequency renormalization cancelled by the quadratic
counterterm of the mapped Hamiltonian; without it the finite-cutoff real
part (2 gamma omega_c / pi) would shift the resonance by an amount that
grows with the cutoff.  `verify_equivalence` checks the relation
numerically instead of assuming it.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from .errors import QuadratureError


@dataclass(frozen=True)
class OhmicResidual:
    """J(w) = gamma * w * exp(-w / omega_c)."""

    gamma: float
    omega_c: float

    def __post_init__(self):
        if self.gamma <= 0 or self.omega_c <= 0:
            raise ValueError("gamma and omega_c must be positive")

    def __call__(self, w):
        return self.gamma * w * np.exp(-w / self.omega_c)


@dataclass(frozen=True)
class LorentzianOriginal:
    """J(w) = Gamma * varsigma * w / ((w^2 - omega0^2)^2 + Gamma^2 w^2)."""

    varsigma: float
    Gamma_width: float
    omega0: float

    def __post_init__(self):
        if min(self.varsigma, self.Gamma_width, self.omega0) <= 0:
            raise ValueError("all Lorentzian parameters must be positive")

    def __call__(self, w):
        return (
            self.Gamma_width
            * self.varsigma
            * w
            / ((w**2 - self.omega0**2) ** 2 + self.Gamma_width**2 * w**2)
        )


def map_residual_to_original(res: OhmicResidual, omega0, g):
    """Lorentzian original-bath density implied by an Ohmic residual bath."""
    if omega0 <= 0 or g <= 0:
        raise ValueError("omega0 and g must be positive")
    return LorentzianOriginal(
        varsigma=4.0 * omega0 * g**2,
        Gamma_width=res.gamma * omega0,
        omega0=omega0,
    )


def _quad_checked(f, a, b, tol, **kw):
    with warnings.catch_warnings():
        # the returned error estimate is checked below; roundoff chatter from
        # underflowing tails is not actionable
        warnings.simplefilter("ignore", IntegrationWarning)
        val, err = quad(f, a, b, limit=400, epsabs=tol, epsrel=tol, **kw)
    if err > 1e-5 * max(abs(val), 1.0):
        raise QuadratureError(f"quadrature error {err:.2e} on [{a}, {b}]")
    return val


def _quad_decades(f, a, b, tol):
    """Adaptive quadrature over [a, b] split into log-spaced panels.

    Wide smooth ranges (cutoff tails spanning many decades) defeat a single
    adaptive call's subdivision budget; per-decade panels do not.
    """
    edges = np.geomspace(a, b, max(2, int(math.log10(b / a)) + 2))
    return sum(_quad_checked(f, lo, hi, tol) for lo, hi in zip(edges[:-1], edges[1:]))


def cauchy_transform(J, z, quadrature_tol=1e-10, upper=None):
    """W(z) = (2/pi) * int_0^inf J(w) w / (w^2 - z^2) dw for complex z.

    J is assumed odd-extended (J(-w) = -J(w)).  For z = x + i*delta with
    delta tiny relative to x the integral is evaluated in the delta -> 0+
    limit: a Cauchy principal value for the real part (via the dedicated
    singular-weight rule) plus the exact boundary value Im W = J(x); the
    error of this limit is O(delta).  Away from that regime a direct
    adaptive quadrature is used.  z = 0 is allowed (the integrand J(w)/w
    is regular there for Ohmic-like densities).
    """
    z = complex(z)
    x, d = z.real, z.imag
    if upper is None:
        upper = 50.0 * max(abs(x), 1.0)
    tol = quadrature_tol

    if z == 0:
        val = _quad_checked(lambda w: J(w) / w, 0.0, upper, tol)
        val += _quad_checked(lambda w: J(w) / w, upper, 10.0 * upper, tol)
        return complex((2.0 / math.pi) * val)

    if x > 0 and abs(d) <= 1e-4 * x:
        # delta -> 0+ limit: PV real part + exact imaginary part J(x)
        cut = 2.0 * x
        pv = _quad_checked(lambda w: J(w) * w / (w + x), 0.0, cut, tol,
                           weight="cauchy", wvar=x)
        reg = _quad_checked(lambda w: J(w) * w / (w * w - x * x), cut, upper, tol)
        reg += _quad_checked(lambda w: J(w) * w / (w * w - x * x),
                             upper, 10.0 * upper, tol)
        re = (2.0 / math.pi) * (pv + reg)
        return complex(re, math.copysign(1.0, d) * J(x))

    if d == 0:
        raise QuadratureError(
            "z on the real axis: use a finite imaginary shift or |Im z| << Re z"
        )

    z2 = z * z

    def fre(w):
        den = w * w - z2
        return (J(w) * w * den.real) / (abs(den) ** 2)

    def fim(w):
        den = w * w - z2
        return -(J(w) * w * den.imag) / (abs(den) ** 2)

    re = _quad_checked(fre, 0.0, upper, tol) + _quad_checked(fre, upper, 10.0 * upper, tol)
    im = _quad_checked(fim, 0.0, upper, tol) + _quad_checked(fim, upper, 10.0 * upper, tol)
    return (2.0 / math.pi) * complex(re, im)


def cauchy_transform_subtracted(J, z, quadrature_tol=1e-10, upper=None):
    """W(z) - W(0) = (2/pi) * int_0^inf J(w) z^2 / (w (w^2 - z^2)) dw.

    Computing the difference under one integral sign avoids the catastrophic
    cancellation of two individually cutoff-sized real parts; the subtracted
    integrand also decays one power faster, so the result is insensitive to
    the tail.  Same near-real-axis PV treatment as cauchy_transform.
    """
    z = complex(z)
    x, d = z.real, z.imag
    if upper is None:
        upper = 50.0 * max(abs(x), 1.0)
    tol = quadrature_tol
    if z == 0:
        return 0.0 + 0.0j
    if x > 0 and abs(d) <= 1e-4 * x:
        cut = 2.0 * x

        def h(w):
            if w == 0.0:
                w = 1e-300  # J(w)/w has a finite limit; dodge the 0/0
            return J(w) * x * x / (w * (w + x))

        pv = _quad_checked(h, 0.0, cut, tol, weight="cauchy", wvar=x)
        reg = _quad_decades(lambda w: J(w) * x * x / (w * (w * w - x * x)),
                            cut, 10.0 * upper, tol)
        return complex((2.0 / math.pi) * (pv + reg), math.copysign(1.0, d) * J(x))
    if d == 0:
        raise QuadratureError(
            "z on the real axis: use a finite imaginary shift or |Im z| << Re z"
        )
    z2 = z * z

    def fre(w):
        val = z2 / (w * (w * w - z2))
        return J(w) * val.real

    def fim(w):
        val = z2 / (w * (w * w - z2))
        return J(w) * val.imag

    re = _quad_checked(fre, 0.0, upper, tol) + _quad_checked(fre, upper, 10.0 * upper, tol)
    im = _quad_checked(fim, 0.0, upper, tol) + _quad_checked(fim, upper, 10.0 * upper, tol)
    return (2.0 / math.pi) * complex(re, im)


def verify_equivalence(res: OhmicResidual, omega0, g, grid, delta=None, quadrature_tol=1e-10):
    """Max residual of the dynamical-equivalence relation over a frequency grid.

    Compares -W0(w + i delta)/2 against
    2 g^2 omega0 / ((w + i delta)^2 - omega0^2 + omega0 (W1 - W1(0))),
    with W0 taken over the mapped Lorentzian and W1 over the Ohmic residual
    by quadrature.  Returns the max relative difference (absolute when both
    sides vanish, e.g. g -> 0).
    """
    if delta is None:
        delta = 1e-6 * omega0
    lor = map_residual_to_original(res, omega0, g)
    upper1 = 60.0 * res.omega_c
    worst = 0.0
    for w in grid:
        z = w + 1j * delta
        w0 = cauchy_transform(lor, z, quadrature_tol, upper=50.0 * max(omega0, w))
        # counterterm-subtracted W1, computed cancellation-free
        dw1 = cauchy_transform_subtracted(res, z, quadrature_tol, upper=upper1)
        lhs = -0.5 * w0
        rhs = 2.0 * g**2 * omega0 / (z * z - omega0**2 + omega0 * dw1)
        denom = max(abs(lhs), abs(rhs))
        diff = abs(lhs - rhs)
        worst = max(worst, diff / denom if denom > 1e-12 else diff)
    return worst
