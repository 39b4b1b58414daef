"""Named invariant checks run by ``thermal-trimer validate``."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import algebra, correlations, dynamics
from .couplings import CouplingError, CouplingSet, build_couplings, chi_pair
from .geometry import make_equilateral


@dataclass
class Check:
    name: str
    passed: bool
    max_abs_error: float
    tolerance: float
    note: str = ""


def _random_state(rng, dim):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def _measure(name, tol, fn):
    try:
        err = float(fn())
    except (CouplingError, dynamics.DensityMatrixError, dynamics.SteadyStateError, ValueError) as exc:
        return Check(name, False, float("nan"), tol, f"{type(exc).__name__}: {exc}")
    return Check(name, bool(err < tol), err, tol)


def resolve_couplings(u, gamma, nbar, chi=None, delta=None, dipole=(0.0, 0.0, 1.0)):
    """Equilateral couplings from the geometry, with optional uniform overrides."""
    geom = make_equilateral(u, dipole=dipole)
    if chi is None and delta is None:
        return geom, build_couplings(geom, gamma, nbar)
    base = build_couplings(geom, gamma, nbar)
    c = base.chi[0, 1] if chi is None else chi
    d = base.delta[0, 1] if delta is None else delta
    return geom, CouplingSet.uniform(3, c, d, gamma, nbar)


def run_checks(u=2.0, gamma=1.0, nbar=1.0, chi=None, delta=None, seed=20240611):
    """Run every check; returns a list of :class:`Check` in a fixed order."""
    rng = np.random.default_rng(seed)
    checks = []
    try:
        geom, cs = resolve_couplings(u, gamma, nbar, chi, delta)
    except CouplingError as exc:
        return [Check("couplings-psd", False, float("nan"), 0.0, str(exc))]
    min_eig = float(np.linalg.eigvalsh(cs.chi).min())
    checks.append(Check("couplings-psd", min_eig >= -1e-10, max(0.0, -min_eig), 1e-10))
    x = float(cs.chi[0, 1])
    dl = float(cs.delta[0, 1])

    checks.append(_measure("chi-dicke-limit", 1e-6, lambda: abs(chi_pair(1e-3, np.pi / 2) - 1.0)))
    checks.append(_measure("collective-decomposition", 1e-12, algebra.collective_decomposition_check))

    lb = dynamics.build_generator_bare(cs)
    lc = dynamics.build_generator_collective(gamma, nbar, x, dl)

    checks.append(_measure(
        "generator-equivalence", 1e-12,
        lambda: np.max(np.abs(dynamics.to_collective_generator(lb) - lc)),
    ))

    def trace_preservation():
        worst = 0.0
        for _ in range(20):
            drho = dynamics.unvec(lb @ dynamics.vec(_random_state(rng, 8)))
            worst = max(worst, abs(np.trace(drho)), np.max(np.abs(drho - drho.conj().T)))
        return worst

    checks.append(_measure("trace-preservation", 1e-12, trace_preservation))

    if abs(x - 1.0) > 1e-12:
        def kernel_vs_closed_form():
            rho, _ = dynamics.steady_state(lc)
            pops = np.diag(rho).real
            return max(
                np.max(np.abs(pops - dynamics.analytic_steady_extended(nbar))),
                abs(rho[1, 2]), abs(rho[4, 5]),
            )

        checks.append(_measure("eq13-matches-kernel", 1e-10, kernel_vs_closed_form))

        def fixed_point():
            s = dynamics.ReducedState(dynamics.analytic_steady_extended(nbar))
            return np.max(np.abs(dynamics.reduced_rhs(s, gamma, nbar, x, dl).to_vector()))

        checks.append(_measure("reduced-ode-fixed-point", 1e-12, fixed_point))

    def projection():
        worst = 0.0
        for _ in range(20):
            p = rng.random(8)
            s = dynamics.ReducedState(p / p.sum(), complex(*rng.normal(size=2)) * 0.1,
                                      complex(*rng.normal(size=2)) * 0.1)
            full = dynamics.unvec(lc @ dynamics.vec(s.to_density_matrix()))
            ref = dynamics.ReducedState.from_density_matrix(full).to_vector()
            worst = max(worst, np.max(np.abs(ref - dynamics.reduced_rhs(s, gamma, nbar, x, dl).to_vector())))
        return worst

    checks.append(_measure("reduced-ode-projection", 1e-12, projection))

    def dicke_steady():
        rho, _ = dynamics.steady_state(dynamics.build_generator_collective(gamma, nbar, 1.0, dl))
        pops = np.diag(rho).real
        sym = [a - 1 for a in algebra.SYMMETRIC]
        return np.max(np.abs(pops[sym] - dynamics.analytic_steady_dicke(nbar)))

    checks.append(_measure("dicke-steady-state", 1e-8, dicke_steady))

    rho_bare = None
    if abs(x - 1.0) > 1e-12:
        rho_bare, _ = dynamics.steady_state(lb)

        def closed_forms():
            worst = 0.0
            for _ in range(20):
                d = [v / np.linalg.norm(v) for v in rng.normal(size=(3, 3))]
                worst = max(
                    worst,
                    abs(correlations.g2_general(rho_bare, geom, d[0], d[1])
                        - correlations.g2_closed_form(geom, d[0], d[1])),
                    abs(correlations.g3_general(rho_bare, geom, *d)
                        - correlations.g3_closed_form(geom, *d)),
                )
            return worst

        checks.append(_measure("correlation-closed-forms", 1e-10, closed_forms))

        def coincident():
            d = np.array([0.3, -0.4, np.sqrt(0.75)])
            return max(
                abs(correlations.g2_general(rho_bare, geom, d, d) - 4 / 3),
                abs(correlations.g3_general(rho_bare, geom, d, d, d) - 4 / 3),
            )

        checks.append(_measure("coincident-detectors-4/3", 1e-10, coincident))

    checks.append(_measure(
        "scenario-constants", 1e-12,
        lambda: max(
            abs(correlations.scenario_g2_fig3(np.pi / 2) - 4 / 9),
            abs(correlations.scenario_g2_fig3(2 * np.pi / 3) - 1 / 3),
            abs(correlations.scenario_g3_fig3(np.pi / 2) - 8 / 27),
        ),
    ))

    def dicke_numeric():
        lc1 = dynamics.build_generator_collective(gamma, nbar, 1.0, dl)
        rho_c, _ = dynamics.steady_state(lc1)
        num = correlations.dicke_moments_numeric(algebra.dicke_basis().to_bare(rho_c))
        return max(
            abs(num["g2"] - correlations.dicke_g2(nbar)),
            abs(num["g3"] - correlations.dicke_g3(nbar)),
            abs(num["intensity"] - correlations.dicke_intensity(nbar)),
        )

    checks.append(_measure("dicke-correlations", 1e-10, dicke_numeric))
    return checks
