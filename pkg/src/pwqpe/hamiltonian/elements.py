"""Plane-wave matrix elements of the kinetic, nuclear and Coulomb operators.

Conventions: orthogonal cells, G_p = 2 pi (p1/a1, p2/a2, p3/a3), atomic
units throughout. The nu = 0 Fourier component of both Coulomb terms is
excluded (jellium-background convention), so callers must skip those terms
rather than expect a value.
"""

from __future__ import annotations

import numpy as np

from ..crystal import GeometryError, Material, PlaneWaveGrid, UnitCell, reciprocal_vector


class ExcludedTermError(ValueError):
    """The requested element belongs to an excluded nu = 0 term."""


def _check_in_grid(grid: PlaneWaveGrid | None, *points) -> None:
    if grid is None:
        return
    for p in points:
        if not grid.contains(np.asarray(p, dtype=int)):
            raise GeometryError(f"momentum index {tuple(int(x) for x in np.asarray(p))} outside grid for n_p={grid.n_p}")


def kinetic_element(cell: UnitCell, p, q, grid: PlaneWaveGrid | None = None) -> float:
    """Kinetic matrix element delta_{p,q} ||G_p||^2 / 2 in hartree."""
    _check_in_grid(grid, p, q)
    p = np.asarray(p, dtype=int)
    q = np.asarray(q, dtype=int)
    if not np.array_equal(p, q):
        return 0.0
    g = reciprocal_vector(cell, p)
    return float(g @ g) / 2.0


def nuclear_element(cell: UnitCell, material: Material, p, q, grid: PlaneWaveGrid | None = None) -> complex:
    """Electron-nucleus matrix element in hartree.

    Returns -(4 pi / Omega) sum_I Z_I exp(i G_{q-p} . R_I) / ||G_{p-q}||^2
    for nu = p - q != 0.

    Raises:
        ExcludedTermError: p = q (the excluded nu = 0 term; callers skip the
            diagonal).
        GeometryError: when a grid is supplied and p, q or p - q leave it.
    """
    _check_in_grid(grid, p, q)
    p = np.asarray(p, dtype=int)
    q = np.asarray(q, dtype=int)
    nu = p - q
    if not nu.any():
        raise ExcludedTermError("nu = 0 nuclear term is excluded")
    if grid is not None and not grid.contains(nu):
        raise GeometryError(f"momentum transfer {tuple(int(x) for x in nu)} outside grid for n_p={grid.n_p}")
    g_phase = reciprocal_vector(cell, q - p)
    g_nu = reciprocal_vector(cell, nu)
    phases = np.exp(1j * (material.positions @ g_phase))
    return complex(-(4.0 * np.pi / cell.omega) * (material.nuclear_charges @ phases) / (g_nu @ g_nu))


def coulomb_element(cell: UnitCell, p, q, r, s, grid: PlaneWaveGrid | None = None) -> float:
    """Electron-electron matrix element in hartree.

    Nonzero only when momentum is conserved, G_p - G_s = G_r - G_q, in which
    case the value is (4 pi / Omega) / ||G_nu||^2 with G_nu = G_p - G_s.

    Raises:
        ExcludedTermError: conserved transfer with nu = 0 (p = s and r = q).
    """
    _check_in_grid(grid, p, q, r, s)
    p, q, r, s = (np.asarray(x, dtype=int) for x in (p, q, r, s))
    nu = p - s
    if not np.array_equal(nu, r - q):
        return 0.0
    if not nu.any():
        raise ExcludedTermError("nu = 0 Coulomb term is excluded")
    g_nu = reciprocal_vector(cell, nu)
    return float((4.0 * np.pi / cell.omega) / (g_nu @ g_nu))
