"""Emitter positions and far-field detector directions.

All lengths are dimensionless, ``u = omega0 * r / c``.  Pair quantities for
three emitters are always returned in the fixed order (2,1), (3,1), (3,2),
with the pair vector ``u_jl = u_j - u_l``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

UNIT_TOL = 1e-12

# zero-based (j, l) for the pairs (2,1), (3,1), (3,2)
PAIRS = ((1, 0), (2, 0), (2, 1))


def _unit(v, name="vector"):
    v = np.asarray(v, dtype=float)
    if v.shape != (3,):
        raise ValueError(f"{name} must be a 3-vector, got shape {v.shape}")
    norm = np.linalg.norm(v)
    if not np.isfinite(norm) or norm == 0.0:
        raise ValueError(f"{name} must be nonzero and finite")
    return v / norm


def rotation_taking(a, b):
    """Return the proper rotation matrix taking unit vector ``a`` onto ``b``.

    The minimal rotation about ``a x b`` is used; for antiparallel inputs the
    rotation is by pi about an axis orthogonal to ``a`` chosen deterministically.
    """
    a = _unit(a, "a")
    b = _unit(b, "b")
    c = float(np.dot(a, b))
    if c > 1.0 - 1e-15:
        return np.eye(3)
    if c < -1.0 + 1e-15:
        trial = np.array([1.0, 0.0, 0.0]) if abs(a[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
        axis = _unit(np.cross(a, trial))
        return 2.0 * np.outer(axis, axis) - np.eye(3)
    v = np.cross(a, b)
    vx = np.array([[0.0, -v[2], v[1]], [v[2], 0.0, -v[0]], [-v[1], v[0], 0.0]])
    return np.eye(3) + vx + vx @ vx / (1.0 + c)


@dataclass(frozen=True)
class EmitterGeometry:
    """Point emitters sharing one dipole orientation.

    Parameters
    ----------
    positions : array_like, shape (N, 3)
        Dimensionless positions ``omega0 * r_j / c``.
    dipole_direction : array_like, shape (3,)
        Common dipole orientation; normalized on construction.
    """

    positions: np.ndarray
    dipole_direction: np.ndarray

    def __post_init__(self):
        pos = np.array(self.positions, dtype=float)
        if pos.ndim != 2 or pos.shape[1] != 3 or pos.shape[0] < 1:
            raise ValueError(f"positions must have shape (N, 3), got {pos.shape}")
        if not np.all(np.isfinite(pos)):
            raise ValueError("positions must be finite")
        pos.setflags(write=False)
        dip = _unit(self.dipole_direction, "dipole_direction")
        dip.setflags(write=False)
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "dipole_direction", dip)

    @property
    def n_emitters(self) -> int:
        return self.positions.shape[0]

    def pair_vector(self, j: int, l: int) -> np.ndarray:
        """``u_j - u_l`` for zero-based indices."""
        return self.positions[j] - self.positions[l]

    def separation(self, j: int, l: int) -> float:
        return float(np.linalg.norm(self.pair_vector(j, l)))

    def pair_vectors(self) -> np.ndarray:
        """Pair vectors u_21, u_31, u_32 as rows (three emitters only)."""
        self._require_three()
        return np.array([self.pair_vector(j, l) for j, l in PAIRS])

    def pair_distances(self) -> np.ndarray:
        return np.linalg.norm(self.pair_vectors(), axis=1)

    def rotated(self, rotation) -> "EmitterGeometry":
        rot = np.asarray(rotation, dtype=float)
        return EmitterGeometry(self.positions @ rot.T, rot @ self.dipole_direction)

    def _require_three(self):
        if self.n_emitters != 3:
            raise ValueError("pair ordering (2,1),(3,1),(3,2) needs exactly three emitters")


@dataclass(frozen=True)
class DetectorSet:
    """One to three far-field detector directions (normalized on construction)."""

    directions: tuple = field(default_factory=tuple)

    def __post_init__(self):
        dirs = tuple(_unit(d, "detector direction") for d in self.directions)
        if not 1 <= len(dirs) <= 3:
            raise ValueError(f"need 1 to 3 detector directions, got {len(dirs)}")
        for d in dirs:
            d.setflags(write=False)
        object.__setattr__(self, "directions", dirs)

    def __len__(self):
        return len(self.directions)

    def __iter__(self):
        return iter(self.directions)

    def __getitem__(self, k):
        return self.directions[k]


def make_equilateral(side, plane_normal=(0.0, 0.0, 1.0), dipole=(0.0, 0.0, 1.0)) -> EmitterGeometry:
    """Three emitters on an equilateral triangle of dimensionless side ``side``.

    The canonical triangle has atom 1 at the origin, atom 2 at ``(u, 0, 0)``
    and atom 3 at ``(u/2, u*sqrt(3)/2, 0)``.  It is then rotated so that the
    z axis maps onto ``plane_normal``.  ``dipole`` is given in the lab frame
    and is not rotated.
    """
    if not np.isfinite(side) or side <= 0:
        raise ValueError(f"side must be positive, got {side}")
    normal = _unit(plane_normal, "plane_normal")
    dip = _unit(dipole, "dipole")
    canonical = side * np.array(
        [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.5, np.sqrt(3.0) / 2.0, 0.0]]
    )
    rot = rotation_taking([0.0, 0.0, 1.0], normal)
    return EmitterGeometry(canonical @ rot.T, dip)


def direction_cosines(geom: EmitterGeometry, det) -> np.ndarray:
    """cos of the angles between ``det`` and r_21, r_31, r_32 (in that order)."""
    d = np.asarray(det, dtype=float)
    if abs(np.linalg.norm(d) - 1.0) > UNIT_TOL:
        raise ValueError("detector direction must be normalized")
    pv = geom.pair_vectors()
    return (pv @ d) / np.linalg.norm(pv, axis=1)


def dipole_pair_angles(geom: EmitterGeometry) -> np.ndarray:
    """Angles xi_jl between the dipole and r_21, r_31, r_32."""
    pv = geom.pair_vectors()
    cosines = (pv @ geom.dipole_direction) / np.linalg.norm(pv, axis=1)
    return np.arccos(np.clip(cosines, -1.0, 1.0))


def edge_normal_detectors(geom: EmitterGeometry) -> DetectorSet:
    """In-plane outward normals of edges 13, 23 and 12, in that order.

    The first two reproduce the two-detector g2 curve ``(2/9){3 + cos 2x +
    2 cos x}`` with ``x = sqrt(3) u / 2``; all three give the matching g3
    curve.  This is one placement realizing those curves, not a claim about
    any particular experimental layout.
    """
    geom._require_three()
    pos = geom.positions
    centroid = pos.mean(axis=0)
    normal = _unit(np.cross(pos[1] - pos[0], pos[2] - pos[0]), "plane normal")
    dirs = []
    for a, b in ((0, 2), (1, 2), (0, 1)):
        edge = pos[b] - pos[a]
        out = np.cross(edge, normal)
        mid = 0.5 * (pos[a] + pos[b])
        if np.dot(out, mid - centroid) < 0:
            out = -out
        dirs.append(out)
    return DetectorSet(tuple(dirs))
