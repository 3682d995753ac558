"""Plane-wave matrix elements, dense small-instance assembly, LCU norms."""

from .elements import ExcludedTermError, coulomb_element, kinetic_element, nuclear_element
from .dense import CapExceededError, DenseHamiltonian, build_dense_hamiltonian
from .lcu import LcuNorms, lambda_nu_sum, lcu_norms

__all__ = [
    "CapExceededError",
    "DenseHamiltonian",
    "ExcludedTermError",
    "LcuNorms",
    "build_dense_hamiltonian",
    "coulomb_element",
    "kinetic_element",
    "lambda_nu_sum",
    "lcu_norms",
    "nuclear_element",
]
