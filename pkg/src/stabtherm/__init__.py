"""Thermal stability of Ising stabilizer memories.

Closed-form thermodynamics of hierarchical tree structures and the
concatenated repetition code, a brute-force enumeration oracle, CNOT
disentangling circuits, Monte Carlo samplers and critical-point analysis.
"""

from .structures import Kind, SpinGraph, StructureSpec, build_structure
from .pauli import (
    Circuit,
    ZHamiltonian,
    ZString,
    build_canonical_hamiltonian,
    build_graph_hamiltonian,
    canonical_disentangler,
    effective_distance,
    transform_hamiltonian,
    tree_disentangler,
)
from .thermo import ThermoPoint, closed_form_point, polarizations
from .exact import energy_gap, exact_thermo
from .critical import exponents, find_tchimax, fit_shift_law

__version__ = "0.1.0"

__all__ = [
    "Kind", "SpinGraph", "StructureSpec", "build_structure",
    "Circuit", "ZHamiltonian", "ZString", "build_canonical_hamiltonian",
    "build_graph_hamiltonian", "canonical_disentangler", "effective_distance",
    "transform_hamiltonian", "tree_disentangler",
    "ThermoPoint", "closed_form_point", "polarizations",
    "energy_gap", "exact_thermo",
    "exponents", "find_tchimax", "fit_shift_law",
]
