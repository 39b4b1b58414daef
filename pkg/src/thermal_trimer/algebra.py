"""Qubit ladder operators and the three-emitter collective basis.

Bare product basis: state index ``sum_j a_j 2**(j-1)`` with ``a_j = 0`` for
ground and ``1`` for excited, i.e. atom 1 is the least significant bit.
Collective states are labelled 1..8 as

    |1> = |ggg>,  |2>, |3>, |4>  single excitation,
    |5>, |6>, |7>  double excitation,  |8> = |eee>,

with {1, 2, 5, 8} symmetric and {3, 4, 6, 7} antisymmetric.  Operators in the
collective basis have entries ``<alpha| A |beta>`` at ``[alpha-1, beta-1]``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache, reduce

import numpy as np

SYMMETRIC = (1, 2, 5, 8)
ANTISYMMETRIC = (3, 4, 6, 7)

_SIGMA_PLUS = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)
_SIGMA_MINUS = _SIGMA_PLUS.T.copy()
_INVERSION = np.diag([-0.5, 0.5]).astype(complex)
_SINGLE = {"raise": _SIGMA_PLUS, "lower": _SIGMA_MINUS, "inversion": _INVERSION}


def ladder(n_emitters: int, j: int, kind: str = "raise") -> np.ndarray:
    """Single-qubit operator ``kind`` acting on emitter ``j`` (1-based).

    ``kind`` is one of ``"raise"`` (S+), ``"lower"`` (S-) or ``"inversion"`` (S_z).
    """
    if kind not in _SINGLE:
        raise ValueError(f"unknown operator kind {kind!r}")
    if not 1 <= j <= n_emitters:
        raise IndexError(f"emitter index {j} out of range 1..{n_emitters}")
    factors = [np.eye(2, dtype=complex)] * n_emitters
    factors[j - 1] = _SINGLE[kind]
    # kron(atom_N, ..., atom_1) puts atom 1 on the least significant bit
    return reduce(np.kron, factors[::-1])


def raising_operators(n_emitters: int) -> list:
    return [ladder(n_emitters, j, "raise") for j in range(1, n_emitters + 1)]


def total_raising(n_emitters: int) -> np.ndarray:
    return sum(raising_operators(n_emitters))


def excitation_number(n_emitters: int) -> np.ndarray:
    dim = 2**n_emitters
    return np.diag([bin(k).count("1") for k in range(dim)]).astype(complex)


def _bare_index(*bits):
    return sum(b << k for k, b in enumerate(bits))


# (coefficient, (a1, a2, a3)) with g=0, e=1
_S2, _S3, _S6 = np.sqrt(2.0), np.sqrt(3.0), np.sqrt(6.0)
_DICKE_STATES = {
    1: [(1.0, (0, 0, 0))],
    2: [(1 / _S3, (1, 0, 0)), (1 / _S3, (0, 1, 0)), (1 / _S3, (0, 0, 1))],
    3: [(-1 / _S6, (1, 0, 0)), (2 / _S6, (0, 1, 0)), (-1 / _S6, (0, 0, 1))],
    4: [(1 / _S2, (1, 0, 0)), (-1 / _S2, (0, 0, 1))],
    5: [(1 / _S3, (0, 1, 1)), (1 / _S3, (1, 0, 1)), (1 / _S3, (1, 1, 0))],
    6: [(-1 / _S6, (0, 1, 1)), (2 / _S6, (1, 0, 1)), (-1 / _S6, (1, 1, 0))],
    7: [(1 / _S2, (0, 1, 1)), (-1 / _S2, (1, 1, 0))],
    8: [(1.0, (1, 1, 1))],
}


def projector(alpha: int, beta: int, dim: int = 8) -> np.ndarray:
    """``R_alpha,beta = |alpha><beta|`` as a matrix in the collective basis."""
    r = np.zeros((dim, dim), dtype=complex)
    r[alpha - 1, beta - 1] = 1.0
    return r


@dataclass(frozen=True)
class CollectiveBasis:
    """Change of basis between bare product states and the collective states.

    ``transform[alpha-1]`` holds the bare-basis coefficients of ``|alpha>``.
    """

    transform: np.ndarray
    symmetric: tuple = SYMMETRIC
    antisymmetric: tuple = ANTISYMMETRIC

    def to_collective(self, op: np.ndarray) -> np.ndarray:
        t = self.transform
        return t.conj() @ op @ t.T

    def to_bare(self, op: np.ndarray) -> np.ndarray:
        t = self.transform
        return t.T @ op @ t.conj()

    def projector_bare(self, alpha: int, beta: int) -> np.ndarray:
        return np.outer(self.transform[alpha - 1], self.transform[beta - 1].conj())

    def superoperator(self) -> np.ndarray:
        """Matrix ``T`` with ``vec(rho_collective) = T @ vec(rho_bare)`` (column stacking)."""
        m = self.transform.conj()
        return np.kron(m.conj(), m)


@lru_cache(maxsize=None)
def _dicke_transform():
    t = np.zeros((8, 8), dtype=complex)
    for alpha, terms in _DICKE_STATES.items():
        for coeff, bits in terms:
            t[alpha - 1, _bare_index(*bits)] = coeff
    t.setflags(write=False)
    return t


def dicke_basis() -> CollectiveBasis:
    return CollectiveBasis(_dicke_transform())


def _r_sum(terms):
    out = np.zeros((8, 8), dtype=complex)
    for coeff, a, b in terms:
        out[a - 1, b - 1] += coeff
    return out


# Single-atom raising operators written out in the collective basis.  Used only
# to cross-check the tensor-product construction, never to build operators.
_S18 = np.sqrt(18.0)
PRINTED_RAISING = {
    1: [
        (1 / _S2, 4, 1), (1 / _S2, 8, 7),
        (1 / _S3, 2, 1), (-1 / _S3, 6, 4), (-1 / _S3, 7, 3), (1 / _S3, 8, 5),
        (-1 / _S6, 3, 1), (-1 / _S6, 5, 4), (-1 / _S6, 7, 2), (-1 / _S6, 8, 6),
        (1 / _S18, 5, 3), (1 / _S18, 6, 2),
        (2 / 3, 5, 2), (-2 / 3, 6, 3),
    ],
    2: [
        (np.sqrt(2 / 3), 3, 1), (np.sqrt(2 / 3), 8, 6),
        (1 / _S3, 2, 1), (1 / _S3, 8, 5),
        (-_S2 / 3, 6, 2), (-_S2 / 3, 5, 3),
        (1 / 3, 6, 3), (2 / 3, 5, 2),
        (-1.0, 7, 4),
    ],
    3: [
        (-1 / _S2, 4, 1), (-1 / _S2, 8, 7),
        (1 / _S3, 2, 1), (1 / _S3, 6, 4), (1 / _S3, 7, 3), (1 / _S3, 8, 5),
        (1 / _S6, 5, 4), (1 / _S6, 7, 2), (-1 / _S6, 3, 1), (-1 / _S6, 8, 6),
        (1 / _S18, 5, 3), (1 / _S18, 6, 2),
        (2 / 3, 5, 2), (-2 / 3, 6, 3),
    ],
}

# total S+ restricted to the symmetric sector
PRINTED_TOTAL_RAISING_SYMMETRIC = [(_S3, 2, 1), (_S3, 8, 5), (2.0, 5, 2)]


def printed_raising(j: int) -> np.ndarray:
    return _r_sum(PRINTED_RAISING[j])


def collective_decomposition_check() -> float:
    """Max entrywise deviation between transformed S+_j and the written-out sums."""
    basis = dicke_basis()
    dev = 0.0
    for j, sp in enumerate(raising_operators(3), start=1):
        dev = max(dev, np.max(np.abs(basis.to_collective(sp) - printed_raising(j))))
    return float(dev)


def hamiltonian(omega0: float = 0.0, delta: float = 0.0) -> np.ndarray:
    """Free plus dipole-dipole Hamiltonian in the collective basis (hbar = 1).

    Manifold energies 0, omega0, 2 omega0, 3 omega0; the symmetric states
    |2>, |5> shift by -2 delta and the antisymmetric ones by +delta.
    """
    r = {a: projector(a, a) for a in range(1, 9)}
    h_q = omega0 * (r[2] + r[3] + r[4]) + 2 * omega0 * (r[5] + r[6] + r[7]) + 3 * omega0 * r[8]
    h_dd = -2 * delta * (r[2] + r[5]) + delta * (r[3] + r[4] + r[6] + r[7])
    return h_q + h_dd


def symmetric_jump_operators():
    """The three composite channel operators ``(R+, R-)`` in the collective basis.

    Channel 1 equals S+/3; channels 2 and 3 equal (S1+ - S3+)/2 and
    (S1+ - 2 S2+ + S3+)/6.
    """
    r1 = _r_sum([(1 / _S3, 2, 1), (1 / _S3, 8, 5), (2 / 3, 5, 2), (-1 / 3, 7, 4), (-1 / 3, 6, 3)])
    r2 = _r_sum([
        (1 / _S2, 4, 1), (1 / _S2, 8, 7),
        (-1 / _S3, 7, 3), (-1 / _S3, 6, 4),
        (-1 / _S6, 7, 2), (-1 / _S6, 5, 4),
    ])
    r3 = _r_sum([
        (1 / (3 * _S2), 6, 2), (1 / (3 * _S2), 5, 3),
        (-1 / _S6, 3, 1), (-1 / _S6, 8, 6),
        (1 / 3, 7, 4), (-1 / 3, 6, 3),
    ])
    return [(r, r.conj().T) for r in (r1, r2, r3)]
