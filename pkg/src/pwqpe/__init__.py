"""Plane-wave qubitization resource estimator and desk-scale verifier."""

from . import costing, crystal, hamiltonian, properties, statesim
from .constants import (
    ANGSTROM_TO_BOHR,
    BOHR_RADIUS_ANGSTROM,
    BOLTZMANN_EV_PER_K,
    HARTREE_TO_EV,
    O2_ENTROPY_EV_PER_K,
)
from .costing import (
    BitWidths,
    CostParams,
    CostReport,
    calls_count,
    cost_params_for,
    er,
    qubit_cost,
    runtime_estimate,
    select_bit_widths,
    toffoli_cost_full,
    toffoli_cost_leading,
)
from .crystal import (
    Atom,
    GeometryError,
    Material,
    PlaneWaveGrid,
    SchemaError,
    UnitCell,
    grid_spacing,
    make_material,
    parse_material,
    reciprocal_vector,
    serialize_material,
    unit_cell_from_angstrom,
    unit_cell_from_bohr,
)
from .hamiltonian import (
    CapExceededError,
    DenseHamiltonian,
    ExcludedTermError,
    LcuNorms,
    build_dense_hamiltonian,
    coulomb_element,
    kinetic_element,
    lambda_nu_sum,
    lcu_norms,
    nuclear_element,
)
from .properties import (
    DiffusionInputs,
    EnergySet,
    StabilityInputs,
    cell_voltage,
    diffusivity,
    stability_temperature,
)

__all__ = [
    "ANGSTROM_TO_BOHR",
    "Atom",
    "BOHR_RADIUS_ANGSTROM",
    "BOLTZMANN_EV_PER_K",
    "BitWidths",
    "CapExceededError",
    "CostParams",
    "CostReport",
    "DenseHamiltonian",
    "DiffusionInputs",
    "EnergySet",
    "ExcludedTermError",
    "GeometryError",
    "HARTREE_TO_EV",
    "LcuNorms",
    "Material",
    "O2_ENTROPY_EV_PER_K",
    "PlaneWaveGrid",
    "SchemaError",
    "StabilityInputs",
    "UnitCell",
    "build_dense_hamiltonian",
    "calls_count",
    "cell_voltage",
    "cost_params_for",
    "costing",
    "coulomb_element",
    "crystal",
    "diffusivity",
    "er",
    "grid_spacing",
    "hamiltonian",
    "kinetic_element",
    "lambda_nu_sum",
    "lcu_norms",
    "make_material",
    "nuclear_element",
    "parse_material",
    "properties",
    "qubit_cost",
    "reciprocal_vector",
    "runtime_estimate",
    "select_bit_widths",
    "serialize_material",
    "stability_temperature",
    "statesim",
    "toffoli_cost_full",
    "toffoli_cost_leading",
    "unit_cell_from_angstrom",
    "unit_cell_from_bohr",
]
