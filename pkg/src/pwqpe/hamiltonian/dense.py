"""Dense small-instance Hamiltonian on the distinguishable-particle space.

The assembled matrix acts on the eta-fold tensor product of single-particle
momentum spaces (dimension N^eta). Antisymmetry is not imposed here; the
operator commutes with particle permutations and downstream consumers
project as needed. Momentum transfers that would leave the grid contribute
nothing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..crystal import Material, PlaneWaveGrid


class CapExceededError(ValueError):
    """A requested dense object exceeds the configured dimension cap."""


DEFAULT_DENSE_CAP = 4096


@dataclass(frozen=True)
class DenseHamiltonian:
    matrix: np.ndarray = field(repr=False)
    grid: PlaneWaveGrid
    material: Material
    eta: int

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]


def _single_particle_blocks(material: Material, grid: PlaneWaveGrid):
    """Kinetic diagonal, nuclear block and Coulomb shift data on one register."""
    cell = material.cell
    pts = grid.points()
    g = 2.0 * np.pi * pts / cell.lengths
    kinetic = 0.5 * np.sum(g * g, axis=1)

    # Nuclear block: entry (row p, col q) couples through nu = p - q in G_0.
    diff = pts[None, :, :] - pts[:, None, :]  # diff[p, q] = q - p
    in_grid = np.all(np.abs(diff) <= grid.half_width, axis=2)
    nonzero = np.any(diff != 0, axis=2)
    mask = in_grid & nonzero
    nuclear = np.zeros((grid.size, grid.size), dtype=complex)
    if material.atoms and np.any(mask):
        g_diff = 2.0 * np.pi * diff / cell.lengths
        normsq = np.sum(g_diff * g_diff, axis=2)
        structure = np.zeros((grid.size, grid.size), dtype=complex)
        for atom in material.atoms:
            structure += atom.Z * np.exp(1j * (g_diff @ atom.position))
        np.divide(structure, normsq, out=nuclear, where=mask)
        nuclear *= -(4.0 * np.pi / cell.omega)
        nuclear[~mask] = 0.0

    # Coulomb data: for each nu in G_0 the shift matrix |p+nu><p| restricted
    # to the grid, together with the scalar (2 pi / Omega) / ||G_nu||^2.
    shifts = []
    index = {tuple(p): i for i, p in enumerate(pts)}
    for nu in grid.points_nonzero():
        g_nu = 2.0 * np.pi * nu / cell.lengths
        coeff = (2.0 * np.pi / cell.omega) / float(g_nu @ g_nu)
        shift = np.zeros((grid.size, grid.size))
        for i, p in enumerate(pts):
            target = tuple(p + nu)
            if target in index:
                shift[index[target], i] = 1.0
        shifts.append((tuple(int(x) for x in nu), coeff, shift))
    return kinetic, nuclear, shifts


def _embed_one(block: np.ndarray, position: int, eta: int, n: int) -> np.ndarray:
    out = np.array([[1.0 + 0.0j]])
    for i in range(eta):
        out = np.kron(out, block if i == position else np.eye(n))
    return out


def build_dense_hamiltonian(
    material: Material,
    grid: PlaneWaveGrid,
    eta_override: int | None = None,
    cap: int = DEFAULT_DENSE_CAP,
) -> DenseHamiltonian:
    """Assembles H = sum_i T_i + sum_i U_i + (1/2) sum_{i != j} V_ij densely.

    Args:
        material: Atoms and cell; the electron count may be overridden.
        grid: Momentum grid.
        eta_override: Electron count to use instead of material.eta.
        cap: Maximum allowed matrix dimension N^eta.

    Raises:
        CapExceededError: when N^eta exceeds the cap.
    """
    eta = material.eta if eta_override is None else int(eta_override)
    if eta < 1:
        raise ValueError(f"eta must be positive, got {eta}")
    n = grid.size
    dim = n**eta
    if dim > cap:
        raise CapExceededError(f"dense dimension {dim} = {n}^{eta} exceeds cap {cap}")

    kinetic, nuclear, shifts = _single_particle_blocks(material, grid)
    one_body = np.diag(kinetic).astype(complex) + nuclear

    h = np.zeros((dim, dim), dtype=complex)
    for i in range(eta):
        h += _embed_one(one_body, i, eta, n)

    if eta >= 2:
        lookup = {nu: shift for nu, _, shift in shifts}
        for i in range(eta):
            for j in range(eta):
                if i == j:
                    continue
                for nu, coeff, shift in shifts:
                    minus = lookup[tuple(-x for x in nu)]
                    term = np.array([[1.0 + 0.0j]])
                    for k in range(eta):
                        if k == i:
                            term = np.kron(term, shift)
                        elif k == j:
                            term = np.kron(term, minus)
                        else:
                            term = np.kron(term, np.eye(n))
                    h += coeff * term
    return DenseHamiltonian(matrix=h, grid=grid, material=material, eta=eta)
