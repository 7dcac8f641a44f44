"""Collective-spin and truncated-boson operators, and the probe+mode Hamiltonian.

All matrices are real and dense.  In the chosen basis the Hamiltonian
H = eps*Jz + omega*n + g*Jx*(a^dag + a) is real symmetric, so complex
arithmetic is never needed; Jy is only ever handed out through its real
antisymmetric representation.

Composite basis ordering: spin index slow, Fock index fast, i.e. the
composite state |m, n> sits at row (m + J)*(n_max + 1) + n.
"""

from dataclasses import dataclass, field
from math import comb

import numpy as np

from .errors import NumericalDomainError, RcprobeError


@dataclass(frozen=True)
class ProbeParams:
    """Physical parameters of the probe coupled to the extracted bath mode.

    N        number of spin-1/2 constituents
    epsilon  probe level splitting (angular-frequency units, >= 0)
    omega    frequency of the extracted collective mode (> 0)
    g        probe-mode coupling (>= 0)
    """

    N: int
    epsilon: float
    omega: float
    g: float

    def __post_init__(self):
        if self.N < 1 or int(self.N) != self.N:
            raise ValueError(f"N must be a positive integer, got {self.N}")
        if self.omega <= 0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if self.epsilon < 0:
            raise ValueError(f"epsilon must be >= 0, got {self.epsilon}")
        if self.g < 0:
            raise ValueError(f"g must be >= 0, got {self.g}")

    def replace_epsilon(self, epsilon):
        return ProbeParams(self.N, epsilon, self.omega, self.g)


@dataclass(frozen=True)
class OperatorMatrix:
    """A dense real operator together with a basis descriptor."""

    entries: np.ndarray
    basis: str

    @property
    def dim(self):
        return self.entries.shape[0]


@dataclass(frozen=True)
class SectorDecomposition:
    """Total-spin sectors (J, multiplicity) of N spin-1/2 particles."""

    N: int
    sectors: tuple = field(default_factory=tuple)  # ((J, multiplicity), ...)

    def total_dimension(self):
        return sum(m * int(round(2 * J + 1)) for J, m in self.sectors)


def _check_half_integer(J):
    twoJ = 2 * J
    if twoJ < 0 or abs(twoJ - round(twoJ)) > 1e-12:
        raise NumericalDomainError(f"J must be a nonnegative half-integer, got {J}")
    return int(round(twoJ))


def spin_operators(J):
    """Return (Jx, B, Jz) in the |J, m> basis, m = -J ... J.

    Jz is diagonal, Jx real symmetric with the standard ladder elements.
    B is the real antisymmetric matrix representing Jy through Jy = -iB,
    so that Jx @ B - B @ Jx = -Jz.
    """
    twoJ = _check_half_integer(J)
    d = twoJ + 1
    m = -J + np.arange(d)
    # ladder amplitude <m+1| J+ |m>
    c = np.sqrt(J * (J + 1) - m[:-1] * (m[:-1] + 1))
    Jz = np.diag(m)
    Jx = 0.5 * (np.diag(c, -1) + np.diag(c, 1))
    B = 0.5 * (np.diag(c, -1) - np.diag(c, 1))
    tag = f"spin J={J} ascending m"
    return (
        OperatorMatrix(Jx, tag),
        OperatorMatrix(B, tag + " (Jy = -i B)"),
        OperatorMatrix(Jz, tag),
    )


def sector_multiplicities(N):
    """Decompose the 2^N product space into total-spin sectors.

    multiplicity(J) = C(N, N/2 - J) - C(N, N/2 - J - 1); the identity
    sum_J mult(J) * (2J + 1) == 2^N holds exactly.
    """
    if N < 1 or int(N) != N:
        raise NumericalDomainError(f"N must be a positive integer, got {N}")
    N = int(N)
    sectors = []
    twoJ = N
    while twoJ >= 0:
        k = (N - twoJ) // 2
        mult = comb(N, k) - (comb(N, k - 1) if k >= 1 else 0)
        sectors.append((twoJ / 2, mult))
        twoJ -= 2
    dec = SectorDecomposition(N, tuple(sectors))
    assert dec.total_dimension() == 2**N
    return dec


def boson_operators(n_max):
    """Return (a^dag + a, a^dag a) truncated at Fock occupation n_max."""
    if n_max < 1 or int(n_max) != n_max:
        raise NumericalDomainError(f"n_max must be a positive integer, got {n_max}")
    nb = int(n_max) + 1
    off = np.sqrt(np.arange(1, nb))
    x = np.diag(off, 1) + np.diag(off, -1)
    num = np.diag(np.arange(nb, dtype=float))
    tag = f"fock n_max={n_max}"
    return OperatorMatrix(x, tag), OperatorMatrix(num, tag)


def composite_basis(J, n_max):
    return f"spin J={J} (slow) x fock n_max={n_max} (fast), ascending m and n"


def build_mapped_hamiltonian(p: ProbeParams, J, n_max, dim_cap=20000):
    """H = eps*Jz x 1 + omega*1 x n + g*Jx x (a^dag + a), real symmetric."""
    twoJ = _check_half_integer(J)
    if J > p.N / 2 + 1e-12:
        raise NumericalDomainError(f"J={J} exceeds N/2={p.N / 2}")
    dim = (twoJ + 1) * (int(n_max) + 1)
    if dim > dim_cap:
        raise RcprobeError(
            f"composite dimension {dim} exceeds cap {dim_cap}; "
            "raise dim_cap explicitly if this is intentional"
        )
    Jx, _, Jz = spin_operators(J)
    x, num = boson_operators(n_max)
    ds, nb = twoJ + 1, int(n_max) + 1
    H = (
        p.epsilon * np.kron(Jz.entries, np.eye(nb))
        + p.omega * np.kron(np.eye(ds), num.entries)
        + p.g * np.kron(Jx.entries, x.entries)
    )
    return OperatorMatrix(H, composite_basis(J, n_max))


def composite_jz(J, n_max):
    """Jz x 1 in the composite basis (diagonal)."""
    twoJ = _check_half_integer(J)
    _, _, Jz = spin_operators(J)
    nb = int(n_max) + 1
    return OperatorMatrix(np.kron(Jz.entries, np.eye(nb)), composite_basis(J, n_max))
