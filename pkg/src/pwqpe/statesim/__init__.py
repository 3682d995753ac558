"""Exact desk-scale simulation of the state-preparation subroutines."""

from .antisym import antisymmetrize, simulate_sorting_antisymmetrization
from .block_encoding import (
    EncodingModel,
    ancilla_layout,
    block_encoding_check,
    encoding_model,
    prep_operator,
    sel_involution_deviation,
    sel_operator,
    system_layout,
)
from .prep_states import (
    amplified_success,
    exponential_state,
    momentum_state,
    momentum_state_success_amplitude,
    momentum_success_probability,
)
from .qpe import phase_estimation_kernel, qpe_simulate
from .registers import OperatorMatrix, RegisterLayout, StateVector
from .slater import givens_rotation_fq, prepare_slater, random_unitary
from .verify import (
    CheckResult,
    reference_instances,
    run_verification_suite,
    verification_report,
)
from .walk import (
    WalkSubspace,
    eigenphase_check,
    reflection_identity_check,
    rotation_check,
    walk_operator,
    walk_subspace,
)

__all__ = [
    "EncodingModel",
    "OperatorMatrix",
    "RegisterLayout",
    "StateVector",
    "WalkSubspace",
    "CheckResult",
    "amplified_success",
    "ancilla_layout",
    "antisymmetrize",
    "block_encoding_check",
    "eigenphase_check",
    "encoding_model",
    "exponential_state",
    "givens_rotation_fq",
    "momentum_state",
    "momentum_state_success_amplitude",
    "momentum_success_probability",
    "phase_estimation_kernel",
    "prep_operator",
    "prepare_slater",
    "qpe_simulate",
    "random_unitary",
    "reference_instances",
    "reflection_identity_check",
    "rotation_check",
    "run_verification_suite",
    "sel_involution_deviation",
    "sel_operator",
    "simulate_sorting_antisymmetrization",
    "system_layout",
    "verification_report",
    "walk_operator",
    "walk_subspace",
]
