"""Spontaneous-emission dynamics of two radiatively coupled three-level
V-type emitters, including the vacuum-induced coupling between unlike
transitions that appears at sub-wavelength separations."""

from .coupling import (
    CouplingSet,
    DipoleModel,
    Geometry,
    RadialFunctions,
    chi_tensor,
    coupling_for_model,
    coupling_from_chi,
    coupling_real_dipoles,
    coupling_spherical,
    dipole_vectors,
    radial_functions,
)
from .dynamics import (
    Frame,
    ModelParams,
    basis_index,
    dissipator_term,
    lowering_op,
    make_rhs,
    pure_state,
    rhs_interaction,
    rhs_rotating,
)
from .integrate import InvariantViolation, TimeGrid, Trajectory, evolve, rk5_step
from .observables import (
    ObservableSeries,
    excited_coherence_A,
    matrix_element,
    observable_series,
    perturbative_p32,
    population,
    single_atom_baseline,
)
from .config import ConfigError, PresetBundle, SimConfig, SweepSpec, preset

__version__ = "0.1.0"

__all__ = [
    "CouplingSet",
    "DipoleModel",
    "Geometry",
    "RadialFunctions",
    "chi_tensor",
    "coupling_for_model",
    "coupling_from_chi",
    "coupling_real_dipoles",
    "coupling_spherical",
    "dipole_vectors",
    "radial_functions",
    "Frame",
    "ModelParams",
    "basis_index",
    "dissipator_term",
    "lowering_op",
    "make_rhs",
    "pure_state",
    "rhs_interaction",
    "rhs_rotating",
    "InvariantViolation",
    "TimeGrid",
    "Trajectory",
    "evolve",
    "rk5_step",
    "ObservableSeries",
    "excited_coherence_A",
    "matrix_element",
    "observable_series",
    "perturbative_p32",
    "population",
    "single_atom_baseline",
    "ConfigError",
    "PresetBundle",
    "SimConfig",
    "SweepSpec",
    "preset",
]
