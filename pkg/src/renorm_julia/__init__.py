"""Free energy of the diamond-lattice Ising model as a dynamical object.

The Migdal-Kadanoff map f(t) = 4 t^b / (1 + t^b)^2 is exact on diamond
hierarchical lattices.  This package evaluates the free-energy series and
its derivatives, traces geodesics of the basin of 0, estimates Lyapunov
exponents and pressures on its boundary, and runs the critical-exponent
experiments.
"""
__version__ = "0.1.0"

from .errors import (
    BranchAmbiguity,
    BranchWarning,
    DomainError,
    NearIntegerResonance,
    NonContraction,
    NonConvergence,
    PoleError,
    RenormJuliaError,
    SizeGuard,
    TruncationFailure,
    Undecided,
    UnsupportedOrder,
)
from .rational_map import (
    INFINITY,
    FixedPointInfo,
    MapParams,
    all_preimages,
    basin_preimages,
    critical_orbits,
    decompose,
    eval_map,
    find_unstable_fixed_point,
    map_jet,
)
from .free_energy import (
    DEFAULT_POLICY,
    FJet,
    PhysicalParams,
    TruncationPolicy,
    cocycle_solution_U,
    eval_F_jet,
    eval_physical_free_energy,
    functional_residuals,
    temperature_to_t,
)
from .boettcher import (
    boettcher_modulus_phase,
    boundary_point,
    geodesic_point,
    green_potential,
    periodic_boundary_point,
    preimage_tree_tc,
    sample_harmonic_boundary,
)
from .julia_render import RasterSpec, classify_point, inverse_iteration_cloud, render_raster
from .thermo import (
    backward_cocycle_sample,
    birkhoff_sum,
    lyapunov_harmonic,
    pressure_curve,
    pressure_estimate,
    spectral_radius_estimate,
)
from .exponents import (
    ExponentFit,
    RadiusSchedule,
    complex_exponent_experiment,
    nu_exponent_prediction,
    periodic_exponent_experiment,
    real_exponent_at_tc,
)
from .lattice_oracle import build_lattice, decimate_cell, exact_logZ, verify_decimation
