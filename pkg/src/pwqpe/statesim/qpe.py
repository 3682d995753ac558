"""Textbook phase-estimation measurement statistics.

The circuit (Hadamards, controlled powers, inverse Fourier transform)
is never simulated gate by gate; its exact outcome distribution is the
Fejer-style kernel evaluated at each eigenphase, weighted by the
overlap of the input with the corresponding eigenvector.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import schur

from .registers import OperatorMatrix, StateVector

QPE_BITS_CAP = 12


def phase_estimation_kernel(delta: np.ndarray, t: int) -> np.ndarray:
    """Probability of reading y when the phase is off by delta.

    Evaluates |sin(2^t pi delta) / sin(pi delta)|^2 / 4^t, with the
    limit value 1.0 at integer delta (the exactly-representable case).
    """
    delta = np.asarray(delta, dtype=float)
    den = np.sin(np.pi * delta)
    near = np.abs(den) < 1e-12
    safe = np.where(near, 1.0, den)
    ratio = np.sin(np.pi * (2**t) * delta) / safe
    out = (ratio * ratio) / 4.0**t
    return np.where(near, 1.0, out)


def qpe_simulate(unitary, input_state, t: int) -> np.ndarray:
    """Exact t-bit phase-estimation outcome distribution.

    Args:
        unitary: OperatorMatrix (or dense array) to estimate phases of.
        input_state: StateVector (or array) fed to the system register.
        t: Number of auxiliary bits, at most 12.

    Returns:
        Array of length 2^t; entry y is the probability of measuring
        the big-endian bit string of y, i.e. of estimating the phase
        as y / 2^t. Sums to the squared norm of the input.

    Raises:
        ValueError: On t outside [1, 12] or a dimension mismatch.
        RuntimeError: If the matrix is not unitary to working accuracy.
    """
    if not 1 <= t <= QPE_BITS_CAP:
        raise ValueError(f"t must lie in [1, {QPE_BITS_CAP}], got {t}")
    if isinstance(unitary, OperatorMatrix):
        matrix = unitary.matrix
    else:
        matrix = np.asarray(unitary, dtype=complex)
    if isinstance(input_state, StateVector):
        psi = input_state.amplitudes.ravel()
    else:
        psi = np.asarray(input_state, dtype=complex).ravel()
    if matrix.shape != (psi.size, psi.size):
        raise ValueError(
            f"operator shape {matrix.shape} does not match state dimension {psi.size}"
        )

    triangular, basis = schur(matrix, output="complex")
    eigenvalues = np.diag(triangular).copy()
    off = triangular - np.diag(eigenvalues)
    scale = max(1.0, float(np.max(np.abs(eigenvalues))))
    if float(np.max(np.abs(off))) > 1e-8 * scale:
        raise RuntimeError("matrix is not normal; phase estimation is undefined")
    if float(np.max(np.abs(np.abs(eigenvalues) - 1.0))) > 1e-8:
        raise RuntimeError("matrix is not unitary to working accuracy")

    phases = np.mod(np.angle(eigenvalues) / (2.0 * np.pi), 1.0)
    weights = np.abs(basis.conj().T @ psi) ** 2
    outcomes = np.arange(2**t)
    delta = phases[:, None] - outcomes[None, :] / 2.0**t
    return weights @ phase_estimation_kernel(delta, t)
