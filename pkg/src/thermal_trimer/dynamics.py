"""Master-equation generators, steady states and time evolution.

Generators are dense ``D**2 x D**2`` matrices acting on column-stacked density
matrices, ``vec(rho)[i + D*j] = rho[i, j]``.  The free Hamiltonian is dropped
(frame rotating at omega0); the dipole-dipole part is kept.  The coherent term
is ``-i[H_dd, rho]`` with ``H_dd = -sum_{j != l} delta_jl S+_j S-_l``, which
places the symmetric single/double excitation states at ``-2 delta`` and the
antisymmetric ones at ``+delta``.

A bare-basis generator acts on bare-basis matrices and a collective-basis one
on matrices indexed by the collective states 1..8 (see :mod:`.algebra`).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import expm, svd

from .algebra import dicke_basis, hamiltonian, raising_operators, symmetric_jump_operators
from .couplings import CouplingError, CouplingSet

KERNEL_TOL = 1e-10
POSITIVITY_TOL = -1e-10
STATE_TOL = 1e-10


class DensityMatrixError(ValueError):
    pass


class SteadyStateError(RuntimeError):
    pass


class EvolutionError(RuntimeError):
    pass


def vec(rho):
    return np.asarray(rho).reshape(-1, order="F")


def unvec(v):
    d = math.isqrt(v.shape[0])
    return np.asarray(v).reshape(d, d, order="F")


def hilbert_dim(generator) -> int:
    d = math.isqrt(generator.shape[0])
    if generator.shape != (d * d, d * d):
        raise ValueError(f"generator shape {generator.shape} is not (D^2, D^2)")
    return d


def check_density_matrix(rho, tol=STATE_TOL, positivity_tol=POSITIVITY_TOL):
    """Raise :class:`DensityMatrixError` unless ``rho`` is Hermitian, unit-trace, PSD."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DensityMatrixError(f"density matrix must be square, got {rho.shape}")
    herm = np.max(np.abs(rho - rho.conj().T))
    if herm > tol:
        raise DensityMatrixError(f"not Hermitian (deviation {herm:.3g})")
    tr = np.trace(rho)
    if abs(tr - 1.0) > tol:
        raise DensityMatrixError(f"trace {tr:.15g} differs from 1")
    lam = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min()
    if lam < positivity_tol:
        raise DensityMatrixError(f"negative eigenvalue {lam:.3g}")
    return rho


def ground_state(dim: int) -> np.ndarray:
    """All emitters in the ground state; index 0 in both bare and collective bases."""
    rho = np.zeros((dim, dim), dtype=complex)
    rho[0, 0] = 1.0
    return rho


def lindblad_generator(h, jumps) -> np.ndarray:
    """Superoperator of ``-i[h, .] + sum rate (A . A^+ - {A^+ A, .}/2)``.

    ``jumps`` is an iterable of ``(rate, A)`` pairs.
    """
    d = h.shape[0]
    eye = np.eye(d)
    gen = -1j * (np.kron(eye, h) - np.kron(h.T, eye))
    for rate, a in jumps:
        if rate == 0:
            continue
        ada = a.conj().T @ a
        gen += rate * (np.kron(a.conj(), a) - 0.5 * np.kron(eye, ada) - 0.5 * np.kron(ada.T, eye))
    return gen


def build_generator_bare(couplings: CouplingSet) -> np.ndarray:
    """Generator for N emitters with arbitrary couplings, in the bare basis.

    The cross-damping matrix is diagonalized into independent channels, so the
    cost is N Kronecker products rather than N**2.
    """
    n = couplings.n_emitters
    sp = raising_operators(n)
    sm = [s.conj().T for s in sp]
    g, nbar = couplings.gamma, couplings.nbar
    h = np.zeros_like(sp[0])
    for j in range(n):
        for l in range(n):
            if j != l and couplings.delta[j, l] != 0:
                h -= couplings.delta[j, l] * (sp[j] @ sm[l])
    weights, vecs = np.linalg.eigh(couplings.chi)
    if weights.min() < -1e-10:
        raise CouplingError("chi is not positive semidefinite")
    jumps = []
    for k, w in enumerate(np.clip(weights, 0.0, None)):
        lower = sum(vecs[j, k] * sm[j] for j in range(n))
        jumps.append((g * (1.0 + nbar) * w, lower))
        jumps.append((g * nbar * w, lower.conj().T))
    return lindblad_generator(h, jumps)


def build_generator_collective(gamma=1.0, nbar=0.0, chi=0.0, delta=0.0) -> np.ndarray:
    """Equilateral-triangle generator from the three collective decay channels.

    Channel weights are 3(1 + 2 chi), 2(1 - chi) and 6(1 - chi); at chi = 1
    only the first survives and the symmetric states form a closed ladder.
    """
    if not gamma > 0 or not nbar >= 0:
        raise CouplingError("need gamma > 0 and nbar >= 0")
    if not -0.5 - 1e-12 <= chi <= 1.0 + 1e-12:
        raise CouplingError(f"chi = {chi} gives a non-positive decay channel")
    weights = (3.0 * (1.0 + 2.0 * chi), 2.0 * (1.0 - chi), 6.0 * (1.0 - chi))
    jumps = []
    for w, (r_plus, r_minus) in zip(weights, symmetric_jump_operators()):
        w = max(w, 0.0)
        jumps.append((gamma * (1.0 + nbar) * w, r_minus))
        jumps.append((gamma * nbar * w, r_plus))
    return lindblad_generator(hamiltonian(0.0, delta), jumps)


def to_collective_generator(generator) -> np.ndarray:
    """Re-express a three-emitter bare-basis generator in the collective basis."""
    t = dicke_basis().superoperator()
    return t @ generator @ t.conj().T


def steady_state(generator, rho0=None, tol=KERNEL_TOL):
    """Trace-one stationary state and the kernel dimension of ``generator``.

    Kernel vectors are singular vectors with singular value below ``tol``
    times the largest.  If the kernel is degenerate the result is the
    infinite-time limit from ``rho0`` (default: the ground state), obtained by
    the spectral projector onto the kernel built from left and right null
    vectors.
    """
    d = hilbert_dim(generator)
    u, s, vh = svd(generator)
    k = int(np.sum(s < tol * s[0]))
    if k == 0:
        raise SteadyStateError(f"no stationary state (smallest singular value {s[-1]:.3g})")
    right = vh[-k:].conj().T
    if k == 1:
        v = right[:, 0]
    else:
        left = u[:, -k:]
        start = ground_state(d) if rho0 is None else np.asarray(rho0, dtype=complex)
        coeffs = np.linalg.solve(left.conj().T @ right, left.conj().T @ vec(start))
        v = right @ coeffs
    rho = unvec(v)
    rho = 0.5 * (rho + rho.conj().T)
    rho = rho / np.trace(rho).real
    check_density_matrix(rho)
    return rho, k


def evolve(generator, rho0, t):
    """``exp(L t) rho0``: dense exponential for D <= 8, DOP853 otherwise."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    rho0 = np.asarray(rho0, dtype=complex)
    if t == 0:
        return rho0.copy()
    d = hilbert_dim(generator)
    if d <= 8:
        v = expm(generator * t) @ vec(rho0)
    else:
        sol = solve_ivp(
            lambda _, y: generator @ y, (0.0, t), vec(rho0),
            method="DOP853", rtol=1e-11, atol=1e-13,
        )
        if not sol.success:
            raise EvolutionError(sol.message)
        v = sol.y[:, -1]
    rho = unvec(v)
    check_density_matrix(rho)
    return rho


def spectral_gap(generator, tol=1e-9) -> float:
    """Smallest ``|Re lambda|`` among eigenvalues not numerically zero."""
    lam = np.linalg.eigvals(generator)
    re = np.abs(lam.real)
    nonzero = re[re > tol * np.abs(lam).max()]
    if nonzero.size == 0:
        return 0.0
    return float(nonzero.min())


@dataclass
class ReducedState:
    """Populations p_1..p_8 plus the coherences <R_32> and <R_65>.

    ``<R_ab> = Tr(|a><b| rho) = rho[b-1, a-1]`` in the collective basis.
    Also used to hold time derivatives, so no sum rule is enforced here.
    """

    populations: np.ndarray
    r32: complex = 0.0
    r65: complex = 0.0

    def __post_init__(self):
        self.populations = np.asarray(self.populations, dtype=float)
        if self.populations.shape != (8,):
            raise ValueError("need eight populations")
        self.r32 = complex(self.r32)
        self.r65 = complex(self.r65)

    @property
    def rx(self):
        return self.populations[2] + self.populations[3]

    @property
    def ry(self):
        return self.populations[5] + self.populations[6]

    def to_vector(self):
        return np.concatenate(
            [self.populations, [self.r32.real, self.r32.imag, self.r65.real, self.r65.imag]]
        )

    @classmethod
    def from_vector(cls, v):
        v = np.asarray(v, dtype=float)
        return cls(v[:8], v[8] + 1j * v[9], v[10] + 1j * v[11])

    @classmethod
    def from_density_matrix(cls, rho_c):
        """Project a collective-basis density matrix (or its derivative)."""
        return cls(np.diag(rho_c).real, rho_c[1, 2], rho_c[4, 5])

    def to_density_matrix(self):
        rho = np.diag(self.populations).astype(complex)
        rho[1, 2], rho[2, 1] = self.r32, np.conj(self.r32)
        rho[4, 5], rho[5, 4] = self.r65, np.conj(self.r65)
        return rho


def reduced_rhs(s: ReducedState, gamma=1.0, nbar=0.0, chi=0.0, delta=0.0) -> ReducedState:
    """Closed equations of motion for the populations and <R_32>, <R_65>."""
    g, n, x = gamma, nbar, chi
    p = dict(zip(range(1, 9), s.populations))
    rx, ry = s.rx, s.ry
    r32, r23 = s.r32, np.conj(s.r32)
    r65, r56 = s.r65, np.conj(s.r65)
    sym_mix = 2.0 / (3.0 * np.sqrt(2.0))
    asym = 1.0 - x
    d = np.empty(8)
    d[0] = -3 * g * n * p[1] + g * (1 + 2 * x) * (1 + n) * p[2] + g * asym * (1 + n) * rx
    d[1] = (
        g * n * (1 + 2 * x) * p[1]
        - g * (1 + 2 * x + n * (3 + 4 * x)) * p[2]
        + 4 * g / 3 * (1 + n) * (1 + 2 * x) * p[5]
        + g / 3 * (1 + n) * asym * ry
    )
    d[4] = (
        4 * g / 3 * n * (1 + 2 * x) * p[2]
        + g * (1 + n) * (1 + 2 * x) * p[8]
        - g * (2 * (1 + x) + n * (3 + 4 * x)) * p[5]
        + g / 3 * n * asym * rx
    )
    d[7] = g * n * (1 + 2 * x) * p[5] - 3 * g * (1 + n) * p[8] + g * n * asym * ry
    loss_low = g * (asym + n * (3 - 2 * x))
    loss_high = g * (2 - x + n * (3 - 2 * x))
    c65 = sym_mix * g * (1 + n) * asym * (r65 + r56).real
    c32 = sym_mix * g * n * asym * (r32 + r23).real
    d[2] = g * n * asym * p[1] - loss_low * p[3] + g / 3 * (1 + n) * asym * (p[5] + 2 * p[7]) + g * (1 + n) * p[6] - c65
    d[3] = g * n * asym * p[1] - loss_low * p[4] + g / 3 * (1 + n) * asym * (p[5] + 2 * p[6]) + g * (1 + n) * p[7] + c65
    d[5] = g * n / 3 * asym * (p[2] + 2 * p[4]) - loss_high * p[6] + g * n * p[3] + g * (1 + n) * asym * p[8] - c32
    d[6] = g * n / 3 * asym * (p[2] + 2 * p[3]) - loss_high * p[7] + g * n * p[4] + g * (1 + n) * asym * p[8] + c32
    dr32 = (3j * delta - g / 2 * (2 + x + 2 * n * (3 + x))) * r32 - g / 2 * (1 + n) * (
        2 * sym_mix * asym * (p[6] - p[7]) - 2 / 3 * asym * r56 + 4 / 3 * (1 + 2 * x) * r65
    )
    dr65 = (3j * delta - g / 2 * (4 + x + 2 * n * (3 + x))) * r65 - g / 2 * n * (
        2 * sym_mix * asym * (p[3] - p[4]) - 2 / 3 * asym * r23 + 4 / 3 * (1 + 2 * x) * r32
    )
    return ReducedState(d, dr32, dr65)


def _require_thermal(nbar):
    if not nbar > 0:
        raise ValueError("closed-form steady states need nbar > 0 (nbar = 0 relaxes to the ground state)")


def analytic_steady_extended(nbar) -> np.ndarray:
    """Populations of states 1..8 for chi != 1; independent of chi, delta, gamma."""
    _require_thermal(nbar)
    n = float(nbar)
    z = (1 + 2 * n) ** 3
    one = n * (1 + n) ** 2 / z
    two = n**2 * (1 + n) / z
    return np.array([(1 + n) ** 3 / z, one, one, one, two, two, two, n**3 / z])


def analytic_steady_dicke(nbar) -> np.ndarray:
    """Populations of the symmetric states 1, 2, 5, 8 at chi = 1 from the ground state."""
    _require_thermal(nbar)
    n = float(nbar)
    z = (1 + 2 * n) * ((1 + n) ** 2 + n**2)
    return np.array([(1 + n) ** 3, n * (1 + n) ** 2, n**2 * (1 + n), n**3]) / z


def collective_populations(rho_bare) -> np.ndarray:
    """Diagonal of a bare-basis three-emitter state in the collective basis."""
    return np.diag(dicke_basis().to_collective(rho_bare)).real
