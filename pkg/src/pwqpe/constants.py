"""Physical constants shared across the package.

Internal computations run in Hartree atomic units; these factors convert
at the ingestion and reporting boundaries.
"""

BOHR_RADIUS_ANGSTROM = 0.52917721067

ANGSTROM_TO_BOHR = 1.0 / BOHR_RADIUS_ANGSTROM

HARTREE_TO_EV = 27.211386245988

# Boltzmann constant in eV/K, as used by the diffusivity formula.
BOLTZMANN_EV_PER_K = 8.617333e-5

# Default molar entropy of O2 gas (205.152 J/(mol K)) expressed per molecule.
O2_ENTROPY_EV_PER_K = 205.152 / 96485.33212
