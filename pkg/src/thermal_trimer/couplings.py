"""Pairwise coupling coefficients and thermal occupation.

``chi`` is the cross-damping (incoherent) coupling, ``delta`` the
vacuum-induced dipole-dipole shift.  Both depend on the dimensionless
separation ``u = omega0 r / c`` and the angle ``xi`` between the common dipole
and the pair vector.  Rates are in units of ``gamma`` unless stated otherwise.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import constants

from .geometry import EmitterGeometry

PSD_TOL = -1e-10


class CouplingError(ValueError):
    """Raised when a coupling set would give an ill-posed dissipator."""


def chi_pair(u, xi, dicke_limit=False):
    """Incoherent coupling for separation ``u`` and dipole-pair angle ``xi``.

    ``u = 0`` is rejected; pass ``dicke_limit=True`` to get the limit value 1.
    """
    if dicke_limit:
        return 1.0
    u = float(u)
    if not u > 0:
        raise ValueError(f"separation must be positive, got {u}")
    c2 = np.cos(xi) ** 2
    s, c = np.sin(u), np.cos(u)
    return 1.5 * ((1.0 - c2) * s / u + (1.0 - 3.0 * c2) * (c / u**2 - s / u**3))


def delta_pair(u, xi, gamma=1.0):
    """Coherent dipole-dipole shift; diverges as ``u**-3``, so ``u = 0`` is rejected."""
    u = float(u)
    if not u > 0:
        raise ValueError(f"separation must be positive, got {u}")
    c2 = np.cos(xi) ** 2
    s, c = np.sin(u), np.cos(u)
    return 0.75 * gamma * ((c2 - 1.0) * c / u + (1.0 - 3.0 * c2) * (s / u**2 + c / u**3))


def thermal_occupation(x):
    """Bose-Einstein occupation ``1/(exp(x) - 1)`` with ``x = hbar omega0 / kT``."""
    x = float(x)
    if not x > 0:
        raise ValueError(f"hbar*omega0/kT must be positive, got {x}")
    if x > 700:
        return 0.0
    return 1.0 / np.expm1(x)


def thermal_occupation_at(omega0, temperature):
    """n-bar for angular frequency ``omega0`` (rad/s) at ``temperature`` (K)."""
    return thermal_occupation(constants.hbar * omega0 / (constants.k * temperature))


def spontaneous_decay_rate(dipole_moment, omega0):
    """Single-emitter decay rate in 1/s from a dipole moment in C*m (SI units).

    Gaussian-unit form ``4 d^2 omega0^3 / (3 hbar c^3)`` with
    ``d^2 -> d^2 / (4 pi eps0)``.
    """
    d2 = dipole_moment**2 / (4.0 * np.pi * constants.epsilon_0)
    return 4.0 * d2 * omega0**3 / (3.0 * constants.hbar * constants.c**3)


@dataclass(frozen=True)
class CouplingSet:
    """Coupling matrices and bath parameters for N emitters.

    ``chi`` is dimensionless with unit diagonal; ``delta`` is a rate with zero
    diagonal (the single-emitter Lamb shift is absorbed into omega0).
    Validation runs on construction and raises :class:`CouplingError`.
    """

    chi: np.ndarray
    delta: np.ndarray
    gamma: float = 1.0
    nbar: float = 0.0

    def __post_init__(self):
        chi = np.array(self.chi, dtype=float)
        delta = np.array(self.delta, dtype=float)
        if chi.ndim != 2 or chi.shape[0] != chi.shape[1] or chi.shape != delta.shape:
            raise CouplingError("chi and delta must be square matrices of equal size")
        if not self.gamma > 0:
            raise CouplingError(f"gamma must be positive, got {self.gamma}")
        if not self.nbar >= 0:
            raise CouplingError(f"nbar must be nonnegative, got {self.nbar}")
        if not (np.all(np.isfinite(chi)) and np.all(np.isfinite(delta))):
            raise CouplingError("couplings must be finite")
        if np.max(np.abs(np.diag(chi) - 1.0)) > 1e-12:
            raise CouplingError("chi must have unit diagonal")
        if np.max(np.abs(chi - chi.T)) > 1e-12 or np.max(np.abs(delta - delta.T)) > 1e-12:
            raise CouplingError("chi and delta must be symmetric")
        if np.max(np.abs(chi)) > 1.0 + 1e-12:
            raise CouplingError("|chi_jl| must not exceed 1")
        eig = np.linalg.eigvalsh(chi)
        if eig.min() < PSD_TOL:
            raise CouplingError(f"chi is not positive semidefinite (min eigenvalue {eig.min():.3g})")
        for arr in (chi, delta):
            arr.setflags(write=False)
        object.__setattr__(self, "chi", chi)
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "gamma", float(self.gamma))
        object.__setattr__(self, "nbar", float(self.nbar))

    @property
    def n_emitters(self) -> int:
        return self.chi.shape[0]

    @classmethod
    def uniform(cls, n_emitters, chi, delta, gamma=1.0, nbar=0.0):
        """Equal couplings for every pair; used for overrides and the Dicke limit."""
        off = 1.0 - np.eye(n_emitters)
        return cls(np.eye(n_emitters) + chi * off, delta * off, gamma, nbar)


def build_couplings(geom: EmitterGeometry, gamma=1.0, nbar=0.0) -> CouplingSet:
    """Fill chi and delta pairwise from emitter positions and dipole orientation."""
    n = geom.n_emitters
    chi = np.eye(n)
    delta = np.zeros((n, n))
    for j in range(n):
        for l in range(j + 1, n):
            r = geom.pair_vector(j, l)
            u = float(np.linalg.norm(r))
            if u < 1e-12:
                raise CouplingError(f"emitters {j + 1} and {l + 1} coincide")
            xi = np.arccos(np.clip(np.dot(r, geom.dipole_direction) / u, -1.0, 1.0))
            chi[j, l] = chi[l, j] = chi_pair(u, xi)
            delta[j, l] = delta[l, j] = delta_pair(u, xi, gamma)
    return CouplingSet(chi, delta, gamma, nbar)
