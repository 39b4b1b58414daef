"""Far-zone photon correlation functions.

Only detector directions enter: the phase of the pair amplitude is
``u_jl . R`` with ``u_jl = u_j - u_l``, so the positive-frequency field seen by
a detector along ``R`` is proportional to ``E-(R) = sum_l exp(-i R.u_l) S-_l``.
All unnormalized quantities are reported divided by the geometric prefactor
(``G1/Phi_R`` and so on), which cancels in g2 and g3.

Density matrices passed here are in the bare product basis.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .algebra import dicke_basis, raising_operators, total_raising
from .geometry import DetectorSet, EmitterGeometry, direction_cosines

NONNEG_TOL = -1e-10


def _field_lowering(geom: EmitterGeometry, det) -> np.ndarray:
    det = np.asarray(det, dtype=float)
    phases = geom.positions @ det
    sp = raising_operators(geom.n_emitters)
    return sum(np.exp(-1j * ph) * s.conj().T for ph, s in zip(phases, sp))


def _check_dims(rho, geom):
    if rho.shape != (2**geom.n_emitters,) * 2:
        raise ValueError(f"state of shape {rho.shape} does not match {geom.n_emitters} emitters")


def _expect(rho, op):
    return np.trace(rho @ op)


def g1_steady(rho, geom: EmitterGeometry, det) -> float:
    """Intensity ``G1 / Phi_R`` along ``det``."""
    _check_dims(rho, geom)
    e = _field_lowering(geom, det)
    return float(_expect(rho, e.conj().T @ e).real)


def unnormalized_g(rho, geom: EmitterGeometry, dets) -> float:
    """``G_k`` divided by the product of prefactors for k = len(dets) detectors."""
    _check_dims(rho, geom)
    lows = [_field_lowering(geom, d) for d in dets]
    lower = np.eye(rho.shape[0], dtype=complex)
    for e in lows:
        lower = e @ lower
    return float(_expect(rho, lower.conj().T @ lower).real)


def _normalized(rho, geom, dets):
    num = unnormalized_g(rho, geom, dets)
    den = np.prod([g1_steady(rho, geom, d) for d in dets])
    if den <= 0:
        raise ValueError("zero intensity; normalized correlations are undefined (nbar = 0?)")
    return num / den


def g2_general(rho, geom: EmitterGeometry, det1, det2) -> float:
    """Normalized equal-time g2 for detectors along ``det1`` and ``det2``."""
    return _normalized(rho, geom, (det1, det2))


def g3_general(rho, geom: EmitterGeometry, det1, det2, det3) -> float:
    """Normalized equal-time g3 for three detectors."""
    return _normalized(rho, geom, (det1, det2, det3))


def g2_closed_form(geom: EmitterGeometry, det1, det2) -> float:
    """Steady-state g2 of the thermal three-emitter sample as a cosine sum."""
    u = geom.pair_distances()
    c1 = direction_cosines(geom, det1)
    c2 = direction_cosines(geom, det2)
    return 2.0 / 9.0 * (3.0 + np.sum(np.cos(u * (c2 - c1))))


def g3_closed_form(geom: EmitterGeometry, det1, det2, det3) -> float:
    """Steady-state g3 of the thermal three-emitter sample as a cosine sum.

    Three detector-pair groups for each emitter pair, plus six mixed terms
    built from ``u21 c1 + u32 c3 - u31 c2`` with detector labels permuted.
    """
    u21, u31, u32 = geom.pair_distances()
    # c[k][z]: detector k, pair z in order (21, 31, 32)
    c = [direction_cosines(geom, d) for d in (det1, det2, det3)]
    total = 3.0
    for z, uz in enumerate((u21, u31, u32)):
        total += np.cos(uz * (c[1][z] - c[0][z]))
        total += np.cos(uz * (c[2][z] - c[0][z]))
        total += np.cos(uz * (c[2][z] - c[1][z]))

    def mixed(a, b, e):
        # a -> pair 21, b -> pair 32, e -> pair 31 (detector indices)
        return np.cos(u21 * c[a][0] + u32 * c[b][2] - u31 * c[e][1])

    total += mixed(0, 2, 1) + mixed(0, 1, 2)
    total += mixed(1, 2, 0) + mixed(1, 0, 2)
    total += mixed(2, 1, 0) + mixed(2, 0, 1)
    return 2.0 / 27.0 * total


def g3_single_detector(geom: EmitterGeometry, det) -> float:
    """g3 with all three photons in one detector; 4/3 for any closed triangle."""
    pv = geom.pair_vectors()
    mismatch = pv[0] + pv[2] - pv[1]
    return 4.0 / 9.0 * (2.0 + np.cos(np.dot(mismatch, det)))


def g2_opposite_pair(u) -> float:
    """g2 for two detectors on opposite sides along r_21, side ``u``."""
    return 2.0 / 9.0 * (3.0 + np.cos(2.0 * u) + 2.0 * np.cos(u))


def scenario_g2_fig3(x) -> float:
    """Two-detector g2 versus ``x = sqrt(3) u / 2``; ranges over [1/3, 4/3]."""
    x = np.asarray(x, dtype=float)
    return 2.0 / 9.0 * (3.0 + np.cos(2.0 * x) + 2.0 * np.cos(x))


def scenario_g3_fig3(x) -> float:
    """Three-detector g3 versus ``x = sqrt(3) u / 2``; ranges over [4/27, 4/3]."""
    x = np.asarray(x, dtype=float)
    return 2.0 / 27.0 * (7.0 + 3.0 * np.cos(2.0 * x) + 6.0 * np.cos(x) + 2.0 * np.cos(3.0 * x))


def correlator_table(rho) -> dict:
    """Equal-time moments of a three-emitter bare-basis state.

    Keys:
      ``pair[(j, l)]``      <S+_j S-_l>
      ``double[(j1, j2, l2, l1)]``  <S+_j1 S+_j2 S-_l2 S-_l1> for j1 < j2, l1 < l2
      ``triple``            <S+_1 S+_2 S+_3 S-_3 S-_2 S-_1>
      ``population_88``     <R_88>
    Indices are 1-based.
    """
    sp = raising_operators(3)
    sm = [s.conj().T for s in sp]
    pair = {
        (j + 1, l + 1): complex(_expect(rho, sp[j] @ sm[l])) for j in range(3) for l in range(3)
    }
    double = {}
    for j1, j2 in itertools.combinations(range(3), 2):
        for l1, l2 in itertools.combinations(range(3), 2):
            op = sp[j1] @ sp[j2] @ sm[l2] @ sm[l1]
            double[(j1 + 1, j2 + 1, l2 + 1, l1 + 1)] = complex(_expect(rho, op))
    triple = complex(_expect(rho, sp[0] @ sp[1] @ sp[2] @ sm[2] @ sm[1] @ sm[0]))
    r88 = float(dicke_basis().to_collective(rho)[7, 7].real)
    return {"pair": pair, "double": double, "triple": triple, "population_88": r88}


def _require_thermal(nbar):
    if not nbar > 0:
        raise ValueError("normalized correlations are undefined at nbar = 0")


def _dicke_parts(nbar):
    _require_thermal(nbar)
    n = float(nbar)
    q = (1 + n) ** 2 + n**2
    w = 10 * n**2 + 10 * n + 3
    return n, q, w


def dicke_g2(nbar) -> float:
    n, q, w = _dicke_parts(nbar)
    return 12 * (1 + 2 * n) ** 2 * q / w**2


def dicke_g3(nbar) -> float:
    n, q, w = _dicke_parts(nbar)
    return 36 * (1 + 2 * n) ** 2 * q**2 / w**3


def dicke_ratio(nbar) -> float:
    """g2 / g3 in the Dicke limit."""
    n, q, w = _dicke_parts(nbar)
    return w / (3 * q)


def dicke_intensity(nbar) -> float:
    """``G1 / Phi_R`` in the Dicke limit."""
    n, q, w = _dicke_parts(nbar)
    return n * w / ((1 + 2 * n) * q)


def dicke_moments_numeric(rho) -> dict:
    """g2, g3 and intensity from collective S+ = S1+ + S2+ + S3+ (bare-basis state)."""
    sp = total_raising(3)
    sm = sp.conj().T
    i1 = _expect(rho, sp @ sm).real
    i2 = _expect(rho, sp @ sp @ sm @ sm).real
    i3 = _expect(rho, sp @ sp @ sp @ sm @ sm @ sm).real
    return {"intensity": i1, "g2": i2 / i1**2, "g3": i3 / i1**3}


@dataclass(frozen=True)
class CorrelationResult:
    """A normalized correlation value with its detectors and parameter echo."""

    value: float
    kind: str
    detectors: DetectorSet
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ("G1", "g2", "g3"):
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.value < NONNEG_TOL:
            raise ValueError(f"{self.kind} = {self.value} is negative")


def evaluate(rho, geom: EmitterGeometry, detectors: DetectorSet, **metadata) -> CorrelationResult:
    """g2 for two detectors, g3 for three, G1/Phi for one."""
    dets = tuple(detectors)
    if len(dets) == 1:
        return CorrelationResult(g1_steady(rho, geom, dets[0]), "G1", detectors, metadata)
    kind = "g2" if len(dets) == 2 else "g3"
    return CorrelationResult(_normalized(rho, geom, dets), kind, detectors, metadata)
