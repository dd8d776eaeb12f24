"""
Exact time-dependent decoherence factors from Lewis-Riesenfeld invariants.

The package solves i d|psi>/dt = H(t)|psi> for

    H(t) = omega(t) [ (1/2) sin(theta) e^{-i phi} A+ + (1/2) sin(theta) e^{i phi} A- + cos(theta) A ]

through an invariant I(t) parameterised by two angles a(t), b(t), and
evaluates the decoherence factor F_ij(t) between branches. A brute-force
propagator (:mod:`lrdecoherence.oracle`) checks every derived quantity.
"""

from .algebra import (
    SU2,
    AlgebraSpec,
    Representation,
    build_representation,
    commutator_residual,
    expm_skew,
    spin_matrices,
)
from .auxiliary import (
    AuxiliarySolution,
    AuxiliaryState,
    adiabatic_solution,
    auxiliary_rhs,
    solve_auxiliary,
    stationary_solution,
)
from .cini import (
    CiniLevel,
    CiniModel,
    branch_protocol,
    composite_state,
    level_pair_decoherence,
    reduce_to_sector,
)
from .decoherence import (
    DecoherenceSeries,
    adiabatic_cini_factor,
    classical_limit_scan,
    decoherence_closed_form,
    decoherence_matrix_element,
    detector_overlap_vs_factor,
)
from .errors import (
    CoordinateSingularityError,
    DegenerateBranchError,
    GridMismatchError,
    NonCompactAlgebraError,
    ScenarioError,
    StepSizeError,
)
from .invariant import (
    PhaseDecomposition,
    build_displacement,
    build_invariant,
    invariant_residual,
    lr_state,
    lr_trajectory,
    phases,
    solid_angle_phase,
    transformed_hamiltonian_coefficient,
)
from .oracle import Trajectory, overlap_series, propagate, schrodinger_residual
from .protocol import (
    Constant,
    Linear,
    Protocol,
    Sampled,
    Sinusoid,
    Winding,
    evaluate,
    hamiltonian_matrix,
)

__version__ = "0.1.0"

__all__ = [
    "AlgebraSpec",
    "AuxiliarySolution",
    "AuxiliaryState",
    "CiniLevel",
    "CiniModel",
    "Constant",
    "CoordinateSingularityError",
    "DecoherenceSeries",
    "DegenerateBranchError",
    "GridMismatchError",
    "Linear",
    "NonCompactAlgebraError",
    "PhaseDecomposition",
    "Protocol",
    "Representation",
    "SU2",
    "Sampled",
    "ScenarioError",
    "Sinusoid",
    "StepSizeError",
    "Trajectory",
    "Winding",
    "adiabatic_cini_factor",
    "adiabatic_solution",
    "auxiliary_rhs",
    "branch_protocol",
    "build_displacement",
    "build_invariant",
    "build_representation",
    "classical_limit_scan",
    "commutator_residual",
    "composite_state",
    "decoherence_closed_form",
    "decoherence_matrix_element",
    "detector_overlap_vs_factor",
    "evaluate",
    "expm_skew",
    "hamiltonian_matrix",
    "invariant_residual",
    "level_pair_decoherence",
    "lr_state",
    "lr_trajectory",
    "overlap_series",
    "phases",
    "propagate",
    "reduce_to_sector",
    "schrodinger_residual",
    "solid_angle_phase",
    "solve_auxiliary",
    "spin_matrices",
    "stationary_solution",
    "transformed_hamiltonian_coefficient",
    "__version__",
]
