"""First-quantized Givens rotations and Slater-determinant preparation.

prepare_slater reduces the occupied-orbital block to diagonal form with
row rotations (free, determinant one) followed by at most eta (N - eta)
recorded column rotations; the recorded schedule is then replayed in
reverse on the antisymmetrized reference state as tensor-power
single-particle rotations.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.linalg import blas, lapack

from ..crystal import PlaneWaveGrid
from .registers import RegisterLayout, StateVector


def random_unitary(dim: int, seed: int) -> np.ndarray:
    """Haar-style unitary from a seeded QR of a complex Gaussian matrix."""
    rng = np.random.default_rng(seed)
    raw = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(raw)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def _grid_from_register_dim(size: int) -> PlaneWaveGrid:
    side = round(size ** (1.0 / 3.0))
    n_p = (side + 1).bit_length() - 1
    grid = PlaneWaveGrid(n_p)
    if grid.size != size:
        raise ValueError(f"register dimension {size} is not a momentum-grid size")
    return grid


def givens_rotation_fq(state: StateVector, p, q, theta: float) -> StateVector:
    """Occupation-conditional rotation between two momenta.

    Basis states holding neither or both of p, q are untouched; on the
    unique register holding exactly one of them the pair (|p>, |q>)
    rotates by theta, with |q> mapping to cos(theta)|q> - sin(theta)|p>.

    Args:
        state: Product-space state over identical momentum registers.
        p: First grid point.
        q: Second grid point, different from p.
        theta: Rotation angle in radians.

    Returns:
        The rotated state.
    """
    dims = state.layout.dims
    if len(set(dims)) != 1:
        raise ValueError("all registers must share one momentum dimension")
    grid = _grid_from_register_dim(dims[0])
    ip = grid.index_of(p)
    iq = grid.index_of(q)
    if ip == iq:
        raise ValueError("rotation needs two distinct momenta")

    eta = len(dims)
    size = dims[0]
    c, s = math.cos(theta), math.sin(theta)
    amps = state.amplitudes.reshape(dims).copy()
    neither = np.ones(size, dtype=bool)
    neither[[ip, iq]] = False
    for axis in range(eta):
        view = np.moveaxis(amps, axis, 0)
        others = np.ones(dims[1:], dtype=bool)
        for other_axis in range(eta - 1):
            shape = [1] * (eta - 1)
            shape[other_axis] = size
            others &= neither.reshape(shape)
        a = view[ip].copy()
        b = view[iq].copy()
        view[ip][others] = (c * a - s * b)[others]
        view[iq][others] = (s * a + c * b)[others]
    return StateVector(amps.reshape(-1), state.layout, success_prob=state.success_prob)


def _apply_two_level(amps: np.ndarray, eta: int, col_a: int, col_b: int, mat: np.ndarray):
    """Tensor-power application of a 2x2 block on two basis labels."""
    for axis in range(eta):
        view = np.moveaxis(amps, axis, 0)
        a = view[col_a].copy()
        b = view[col_b].copy()
        view[col_a] = mat[0, 0] * a + mat[0, 1] * b
        view[col_b] = mat[1, 0] * a + mat[1, 1] * b


def prepare_slater(u: np.ndarray, eta: int, n_prime: int | None = None):
    """First-quantized Slater determinant of the first eta rows of u.

    Args:
        u: Unitary single-particle change of basis; row i holds the
            coefficients of occupied orbital i.
        eta: Number of occupied orbitals.
        n_prime: Single-particle dimension; defaults to u's size.

    Returns:
        (state, rotation_count). Amplitudes on |q_1..q_eta> equal
        det(u[0:eta; q_1..q_eta]) / sqrt(eta!), and rotation_count is
        at most eta * (n_prime - eta).
    """
    u = np.asarray(u, dtype=complex)
    n = u.shape[0]
    if u.shape != (n, n):
        raise ValueError("u must be square")
    if n_prime is not None and n_prime != n:
        raise ValueError(f"n_prime {n_prime} does not match u dimension {n}")
    if not 1 <= eta <= n:
        raise ValueError(f"eta must lie in [1, {n}], got {eta}")
    deviation = np.max(np.abs(u.conj().T @ u - np.eye(n)))
    if deviation > 1e-10:
        raise ValueError(f"u deviates from unitarity by {deviation:.2e}")

    current = u[:eta].copy()
    m = eta
    # Row rotations clearing the upper-right wedge; these multiply the
    # occupied block by a determinant-one unitary on the left, leaving
    # the encoded state unchanged.
    for j in reversed(range(n - m + 1, n)):
        for i in range(m - n + j):
            c, s = blas.zrotg(current[i + 1, j], current[i, j])
            c = float(np.real(c))
            upper, lower = lapack.zrot(current[i + 1], current[i], c, s)
            current[i + 1], current[i] = upper, lower

    rotations: list[tuple[float, complex, int, int]] = []
    for i in range(m):
        for j in range(n - m + i, i, -1):
            c, s = blas.zrotg(current[i, j - 1], current[i, j])
            c = float(np.real(c))
            col_a, col_b = lapack.zrot(current[:, j - 1], current[:, j], c, s)
            current[:, j - 1], current[:, j] = col_a, col_b
            rotations.append((c, complex(s), j - 1, j))

    off_diagonal = current.copy()
    diag = np.diag(off_diagonal[:, :m]).copy()
    for i in range(m):
        off_diagonal[i, i] = 0.0
    residue = float(np.max(np.abs(off_diagonal)))
    if residue > 1e-9:
        raise RuntimeError(f"Givens reduction left residue {residue:.2e}")

    layout = RegisterLayout(tuple((f"sys{i}", n) for i in range(eta)))
    amps = np.zeros((n,) * eta, dtype=complex)
    if eta == 1:
        amps[0] = diag[0]
    else:
        norm = 1.0 / math.sqrt(math.factorial(eta))
        for order, sign in _permutations_with_sign(eta):
            amps[order] = sign * norm
        amps *= np.prod(diag)

    for c, s, col_a, col_b in reversed(rotations):
        # conj of the recorded column rotation, applied to every register.
        mat = np.array([[c, -s], [np.conj(s), c]], dtype=complex)
        _apply_two_level(amps, eta, col_a, col_b, mat)

    state = StateVector(amps.reshape(-1), layout)
    return state, len(rotations)


def _permutations_with_sign(eta: int):
    from itertools import permutations

    for perm in permutations(range(eta)):
        sign = 1
        for i in range(eta):
            for j in range(i + 1, eta):
                if perm[i] > perm[j]:
                    sign = -sign
        yield perm, sign
