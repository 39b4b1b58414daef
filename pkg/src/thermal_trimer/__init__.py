"""Thermally driven, dipole-dipole coupled emitters on an equilateral triangle."""
from .algebra import dicke_basis, hamiltonian, ladder, symmetric_jump_operators
from .correlations import (
    correlator_table,
    dicke_g2,
    dicke_g3,
    dicke_intensity,
    dicke_ratio,
    g1_steady,
    g2_general,
    g3_general,
    scenario_g2_fig3,
    scenario_g3_fig3,
)
from .couplings import CouplingSet, build_couplings, chi_pair, delta_pair, thermal_occupation
from .dynamics import (
    ReducedState,
    analytic_steady_dicke,
    analytic_steady_extended,
    build_generator_bare,
    build_generator_collective,
    evolve,
    reduced_rhs,
    spectral_gap,
    steady_state,
)
from .geometry import DetectorSet, EmitterGeometry, direction_cosines, dipole_pair_angles, make_equilateral

__version__ = "0.1.0"
