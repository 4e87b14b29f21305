"""Product formulas, Trotter error bounds, and resource planning for spin systems."""

from .pauli import PauliSum, PauliTerm, commutator, multiply, nested_commutator
from .hamiltonians import (
    Geometry,
    GroupedHamiltonian,
    TermGroup,
    group_terms,
    heisenberg_chain,
    power_law_heisenberg,
    tfim,
    truncate_power_law,
)
from .formulas import FormulaSchedule, lie_trotter, suzuki

__all__ = [
    "PauliSum",
    "PauliTerm",
    "commutator",
    "multiply",
    "nested_commutator",
    "Geometry",
    "GroupedHamiltonian",
    "TermGroup",
    "group_terms",
    "heisenberg_chain",
    "power_law_heisenberg",
    "tfim",
    "truncate_power_law",
    "FormulaSchedule",
    "lie_trotter",
    "suzuki",
]
