"""Simulation and analysis toolkit for quantum Otto refrigeration cycles
driven far from the adiabatic regime.

The working medium is a pair of coupled spins with a controllable external
field.  The cycle alternates thermal-contact segments at fixed field with
field-ramp segments, and the whole cycle is represented by affine propagators
acting on a closed set of observables.  Subpackage layout:

- ``model``:       parameter containers, observable vectors, state algebra
- ``propagators``: exact closed-form segment and cycle propagators
- ``limit_cycle``: periodic steady state, corner states, thermodynamics
- ``approx``:      short-time closed-form approximations and regime analysis
- ``lindblad``:    independent dense master-equation integrator (oracle)
- ``sweeps``:      deterministic parameter sweeps, maps and derived curves
- ``cli``:         command line interface
"""

from .errors import (
    DegenerateAdiabat,
    MarginalCycle,
    NoConvergence,
    NoMaximum,
    PhysicalityViolation,
    RegimeViolation,
    StepTooLarge,
    SuddenOttoError,
)
from .model import (
    AdiabatParams,
    BathSegmentParams,
    CycleParams,
    ObservableVector,
    WorkingMediumParams,
    big_omega,
    coherence_measure,
    entropies,
    equilibrium_energy,
    equilibrium_vector,
    reconstruct_density_matrix,
)
from .propagators import (
    SegmentPropagator,
    adiabat_propagator,
    build_segments,
    commutator_norm,
    global_propagator,
    isochore_propagator,
)
from .limit_cycle import (
    CycleReport,
    corner_states,
    cycle_report,
    fixed_point,
    iterate_to_limit,
    spectral_gap,
    trajectory,
)

__all__ = [
    "AdiabatParams",
    "BathSegmentParams",
    "CycleParams",
    "CycleReport",
    "DegenerateAdiabat",
    "MarginalCycle",
    "NoConvergence",
    "NoMaximum",
    "ObservableVector",
    "PhysicalityViolation",
    "RegimeViolation",
    "SegmentPropagator",
    "StepTooLarge",
    "SuddenOttoError",
    "WorkingMediumParams",
    "adiabat_propagator",
    "big_omega",
    "build_segments",
    "coherence_measure",
    "commutator_norm",
    "corner_states",
    "cycle_report",
    "cycle_report",
    "entropies",
    "equilibrium_energy",
    "equilibrium_vector",
    "fixed_point",
    "global_propagator",
    "isochore_propagator",
    "iterate_to_limit",
    "reconstruct_density_matrix",
    "spectral_gap",
    "trajectory",
]
