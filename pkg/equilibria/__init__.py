"""Equilibria package initialization"""

from .equilibrium_solver import (
    EndemicEquilibrium,
    EquilibriumSet,
    basic_reproduction_number,
    compute_equilibria,
    endemic_equation_rhs,
    infection_free,
    relaxation_target,
    solve_endemic,
)

__all__ = [
    'EquilibriumSet', 'EndemicEquilibrium', 'infection_free', 'basic_reproduction_number',
    'endemic_equation_rhs', 'solve_endemic', 'compute_equilibria', 'relaxation_target',
]
