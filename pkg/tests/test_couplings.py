import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from thermal_trimer.couplings import (
    CouplingError,
    CouplingSet,
    build_couplings,
    chi_pair,
    delta_pair,
    spontaneous_decay_rate,
    thermal_occupation,
    thermal_occupation_at,
)
from thermal_trimer.geometry import EmitterGeometry, make_equilateral

_u = sp.symbols("u", positive=True)


def _series_at(expr, u0, order=10):
    """Evaluate the Laurent/Taylor series of ``expr`` about u = 0 at ``u0``."""
    ser = sp.series(expr, _u, 0, order).removeO()
    return float(ser.subs(_u, u0))


def _chi_expr(c2):
    s, c = sp.sin(_u), sp.cos(_u)
    return sp.Rational(3, 2) * ((1 - c2) * s / _u + (1 - 3 * c2) * (c / _u**2 - s / _u**3))


def test_chi_series_oracle():
    # series about 0 "1 - u^2/5 + ..."; frozen coefficient check plus value
    ser = sp.series(_chi_expr(0), _u, 0, 4).removeO()
    assert sp.simplify(ser - (1 - _u**2 / 5)) == 0
    val = chi_pair(0.1, np.pi / 2)
    assert val == pytest.approx(_series_at(_chi_expr(0), 0.1), abs=1e-12)
    # two-term series misses a +3u^4/280 term (1.07e-6 at u = 0.1); keep it
    ser4 = sp.series(_chi_expr(0), _u, 0, 6).removeO()
    assert val == pytest.approx(float(ser4.subs(_u, 0.1)), abs=1e-9)
    assert val == pytest.approx(1 - 0.01 / 5, abs=2e-6)
    assert str(val).startswith("0.998001")


def test_chi_at_pi_broadside():
    assert chi_pair(np.pi, np.pi / 2) == pytest.approx(-1.5 / np.pi**2, abs=1e-15)
    assert chi_pair(np.pi, np.pi / 2) == pytest.approx(-0.151982, abs=1e-6)


def test_chi_dicke_flag_and_zero_rejected():
    assert chi_pair(0.0, 0.3, dicke_limit=True) == 1.0
    with pytest.raises(ValueError):
        chi_pair(0.0, 0.3)


def test_delta_leading_order():
    u = 0.05
    lead = 0.75 / u**3
    assert delta_pair(u, np.pi / 2) == pytest.approx(lead, rel=1e-2)


def test_delta_series_oracle():
    s, c = sp.sin(_u), sp.cos(_u)
    c2 = sp.Rational(1, 4)
    expr = sp.Rational(3, 4) * ((c2 - 1) * c / _u + (1 - 3 * c2) * (s / _u**2 + c / _u**3))
    xi = np.arccos(0.5)
    assert delta_pair(0.2, xi) == pytest.approx(_series_at(expr, 0.2, 14), rel=1e-12)


def test_delta_axial_at_pi():
    assert delta_pair(np.pi, 0.0) == pytest.approx(1.5 / np.pi**3, abs=1e-15)


def test_delta_linear_in_gamma():
    assert delta_pair(1.7, 0.4, 2.0) == pytest.approx(2 * delta_pair(1.7, 0.4, 1.0), rel=1e-15)


def test_delta_rejects_zero():
    with pytest.raises(ValueError):
        delta_pair(0.0, 0.0)


def test_delta_cubic_divergence():
    drift = [u**3 * delta_pair(u, np.pi / 2) for u in (1e-2, 1e-3)]
    assert abs(drift[0] - drift[1]) / abs(drift[1]) < 1e-3


@pytest.mark.parametrize("x, expected", [(np.log(2.0), 1.0), (np.log(1.5), 2.0)])
def test_thermal_occupation_inversion(x, expected):
    assert thermal_occupation(x) == pytest.approx(expected, rel=1e-14)


def test_thermal_occupation_limits():
    assert thermal_occupation(1e4) == 0.0
    assert thermal_occupation(50.0) == pytest.approx(np.exp(-50.0), rel=1e-12)
    for bad in (0.0, -1.0):
        with pytest.raises(ValueError):
            thermal_occupation(bad)


def test_physical_conversions():
    # hbar*omega/kT = ln 2 gives nbar = 1
    from scipy import constants

    omega, t = 1e15, constants.hbar * 1e15 / (constants.k * np.log(2.0))
    assert thermal_occupation_at(omega, t) == pytest.approx(1.0, rel=1e-12)
    # rate scales as d^2 omega^3
    r = spontaneous_decay_rate(1e-29, 3e15)
    assert spontaneous_decay_rate(2e-29, 3e15) == pytest.approx(4 * r)
    assert spontaneous_decay_rate(1e-29, 6e15) == pytest.approx(8 * r)


def test_equilateral_couplings_equal():
    # dipole normal to the plane makes every pair angle pi/2
    cs = build_couplings(make_equilateral(1.9), 1.0, 0.5)
    iu = np.triu_indices(3, 1)
    np.testing.assert_allclose(cs.chi[iu], cs.chi[0, 1], atol=1e-12)
    np.testing.assert_allclose(cs.delta[iu], cs.delta[0, 1], atol=1e-12)


def test_tilted_dipole_breaks_pair_symmetry():
    cs = build_couplings(make_equilateral(1.9, dipole=(1.0, 0.0, 0.0)))
    assert abs(cs.chi[0, 1] - cs.chi[0, 2]) > 1e-3


def test_broadside_pi_values():
    cs = build_couplings(make_equilateral(np.pi))
    np.testing.assert_allclose(cs.chi[np.triu_indices(3, 1)], -0.151982, atol=1e-6)
    np.testing.assert_allclose(np.diag(cs.chi), 1.0)
    np.testing.assert_allclose(np.diag(cs.delta), 0.0)


@pytest.mark.parametrize("chi", [-0.3, 0.2, 0.9])
def test_uniform_chi_eigenvalues(chi):
    cs = CouplingSet.uniform(3, chi, 0.4)
    np.testing.assert_allclose(np.linalg.eigvalsh(cs.chi), sorted([1 + 2 * chi, 1 - chi, 1 - chi]), atol=1e-14)


def test_build_enforces_psd_or_fails():
    with pytest.raises(CouplingError):
        CouplingSet.uniform(3, 1.5, 0.0)
    with pytest.raises(CouplingError):
        CouplingSet.uniform(3, -0.6, 0.0)  # within |chi|<=1 but 1 + 2 chi < 0
    with pytest.raises(CouplingError):
        build_couplings(EmitterGeometry(np.zeros((2, 3)), (0, 0, 1)))


def test_invalid_parameters_rejected():
    with pytest.raises(CouplingError):
        CouplingSet.uniform(3, 0.1, 0.0, gamma=0.0)
    with pytest.raises(CouplingError):
        CouplingSet.uniform(3, 0.1, 0.0, nbar=-1.0)
    with pytest.raises(CouplingError):
        CouplingSet(np.array([[1.0, 0.2], [0.1, 1.0]]), np.zeros((2, 2)))


@settings(max_examples=200, deadline=None)
@given(u=st.floats(1e-3, 50.0), xi=st.floats(0.0, np.pi))
def test_chi_bounded(u, xi):
    assert abs(chi_pair(u, xi)) <= 1.0 + 1e-9


@pytest.mark.parametrize("u", [30.5, 41.0, 77.7])
def test_far_separation_decay(u):
    assert abs(chi_pair(u, np.pi / 2)) < 0.1
    assert abs(delta_pair(u, np.pi / 2)) < 0.1


@settings(max_examples=50, deadline=None)
@given(
    side=st.floats(0.2, 20.0),
    dip=st.tuples(st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1)).filter(
        lambda v: np.linalg.norm(v) > 0.1
    ),
)
def test_geometry_couplings_psd(side, dip):
    cs = build_couplings(make_equilateral(side, dipole=dip))
    assert np.linalg.eigvalsh(cs.chi).min() >= -1e-10
